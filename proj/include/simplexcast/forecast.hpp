#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "simplexcast/composition.hpp"
#include "simplexcast/dirichlet.hpp"
#include "simplexcast/model.hpp"
#include "simplexcast/sampler.hpp"

namespace simplexcast {

struct ForecastConfig {
    int horizon = 6;
    double lower_level = 0.10;  // equal-tailed 80% band by default
    double upper_level = 0.90;
    std::uint64_t seed = 0;
    int threads = 0;
};

// Predictive simulation output. Every stored draw and point forecast lies
// on the simplex by construction; predictive_params keeps each draw's
// (mu, phi) at every horizon for Rao-Blackwellized density evaluation.
struct ForecastResult {
    int horizon = 0;
    double lower_level = 0.10;
    double upper_level = 0.90;
    std::vector<std::vector<Composition>> draws;                 // [h][S]
    std::vector<std::vector<DirichletParams>> predictive_params; // [h][S]
    std::vector<Composition> point;                              // [h]
    Eigen::MatrixXd lower;                                       // h x C
    Eigen::MatrixXd upper;                                       // h x C
};

// Simulate the recursion forward per posterior draw, sampling future
// observations from the Dirichlet predictive and feeding their centered
// residuals back in. designs_full must cover T + horizon rows (Fourier
// covariates are deterministic in calendar time). Each posterior draw
// owns the random stream (seed, draw index), so the result is
// deterministic for any thread count.
ForecastResult forecast(const PosteriorDraws& draws, const CompositionalSeries& series,
                        const ModelSpec& spec, const DesignMatrices& designs_full,
                        const ForecastConfig& config);

// Log posterior-predictive density at the realized composition for
// horizon j (1-based): log-mean-exp over posterior draws of the Dirichlet
// density under each draw's simulated parameter path.
double log_predictive_density(const ForecastResult& result, const Composition& actual,
                              int horizon_j);

// Compositional geometric center of the predictive draws at horizon j;
// the alternative point summary to the arithmetic mean.
Composition geometric_center_forecast(const ForecastResult& result, int horizon_j);

}  // namespace simplexcast
