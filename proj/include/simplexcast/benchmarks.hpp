#pragma once

#include <string>
#include <vector>

#include "simplexcast/composition.hpp"

namespace simplexcast {

// Point-forecast output of the baseline methods. Every forecast lies on
// the simplex: the share-space methods are convex combinations of
// observations, the transformed methods come back through the inverse ILR.
struct BenchmarkForecast {
    std::string method;
    std::vector<Composition> point;  // h entries
    std::vector<std::string> warnings;
};

// Last observation carried forward.
BenchmarkForecast naive_forecast(const CompositionalSeries& series, int h);

// Same month previous cycle, recursively reusing forecasts past one period.
BenchmarkForecast seasonal_naive_forecast(const CompositionalSeries& series, int h,
                                          int period = 12);

// Arithmetic mean of the last `window` compositions.
BenchmarkForecast rolling_mean_forecast(const CompositionalSeries& series, int h,
                                        int window = 12);

// Additive Holt-Winters per ILR coordinate; smoothing weights chosen per
// coordinate by Nelder-Mead on one-step in-sample squared error.
BenchmarkForecast ets_ilr_forecast(const CompositionalSeries& series, int h,
                                   int period = 12);

// Seasonal AR surrogate per ILR coordinate:
//   x_t = c + phi x_{t-1} + sPhi x_{t-s} - phi sPhi x_{t-s-1} + e_t,
// fitted by conditional least squares (alternating linear solves).
BenchmarkForecast sarima_ilr_forecast(const CompositionalSeries& series, int h,
                                      int period = 12);

}  // namespace simplexcast
