#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simplexcast/composition.hpp"
#include "simplexcast/model.hpp"

namespace simplexcast {

// Mean-profile shift at a given month with exponential recovery back to
// baseline. half_life_months == 0 means the shift applies to the break
// month only (immediate snap-back).
struct RegimeBreak {
    int break_index;              // 0-based observation index
    Composition shifted_profile;  // mean composition at the break month
    double half_life_months;
};

struct SimulationOutput {
    CompositionalSeries series;
    EtaPath latent;  // generator's eta path and centered residuals
};

// Forward-simulate the generative model. The first max(P,Q) steps sit on
// the covariate mean path with zero pre-sample residuals, mirroring the
// likelihood's conditioning convention, so compute_eta_path reconstructs
// the returned latents index-by-index (with discard = 0). A positive
// discard drops that many leading observations after generation.
SimulationOutput simulate_bdarma(const ModelSpec& spec, const ParamVector& params, int T,
                                 const YearMonth& origin, std::uint64_t seed,
                                 int discard = 0,
                                 std::vector<std::string> labels = {});

// Same process with a mean-profile break injected into the generator's
// intercept. A disengaged break reproduces simulate_bdarma exactly.
SimulationOutput inject_regime_break(const ModelSpec& spec, const ParamVector& params,
                                     int T, const YearMonth& origin, std::uint64_t seed,
                                     const std::optional<RegimeBreak>& break_spec,
                                     std::vector<std::string> labels = {});

// Market-structure scenario: concentration profile, persistence, seasonal
// amplitudes, and an optional pandemic-style break.
struct ScenarioPreset {
    std::string name;
    int C;
    Composition profile;            // long-run mean composition
    std::string concentration;     // "dominant" | "diverse"
    double ar_diag;
    double mean_amplitude;         // ILR amplitude of mean seasonality
    double precision_intercept;    // gamma_0 (log precision)
    double precision_amplitude;    // first-harmonic log-precision amplitude
    std::optional<RegimeBreak> break_spec;
    std::vector<std::string> labels;

    ModelSpec model_spec(int P = 1, int Q = 0, int K_mean = 2, int K_prec = 1,
                         int period = 12) const;
    ParamVector params(const ModelSpec& spec) const;
};

// "dominant": one market holds a 0.82 average share; "diverse": top shares
// 0.234 and 0.149 with the rest spread over six more components.
ScenarioPreset preset(const std::string& name);

}  // namespace simplexcast
