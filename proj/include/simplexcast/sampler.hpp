#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "simplexcast/composition.hpp"
#include "simplexcast/model.hpp"
#include "simplexcast/rng.hpp"

namespace simplexcast {

struct SamplerConfig {
    int chains = 4;
    int iterations = 2000;  // per-chain total including warmup
    int warmup = 1000;
    std::uint64_t seed = 0;
    double target_acceptance = 0.30;  // random-walk target
    int threads = 0;                  // 0 = hardware concurrency

    void validate() const;
};

// Retained (post-warmup) draws, stacked chain-major.
struct PosteriorDraws {
    Eigen::MatrixXd draws;  // S x d
    std::vector<int> chain_ids;
    int chains = 0;
    int iterations = 0;
    int warmup = 0;
    std::vector<double> acceptance_rates;  // post-warmup, per chain

    int draws_per_chain() const { return iterations - warmup; }
};

struct Diagnostics {
    Eigen::VectorXd rhat;
    Eigen::VectorXd ess;
    std::vector<int> flagged;           // rhat > 1.01
    std::vector<int> constant_params;   // no variation; rhat/ess are NaN
};

// Adaptive random-walk Metropolis: joint Gaussian proposals whose
// covariance is learned from the warmup history and whose global scale is
// tuned toward target_acceptance (Robbins-Monro), both frozen after
// warmup. Chains run concurrently, each on its own derived random stream,
// so results are deterministic given (seed, config) regardless of thread
// scheduling.
PosteriorDraws run_sampler(const std::function<double(const Eigen::VectorXd&)>& log_posterior,
                           const std::vector<Eigen::VectorXd>& init,
                           const SamplerConfig& config);

// Prior-mean starting points with N(0, jitter_sd^2) perturbations,
// rejection-resampled (up to 100 attempts each) until the posterior is
// finite.
std::vector<Eigen::VectorXd> initialize_chains(const ModelSpec& spec,
                                               const CompositionalSeries& series,
                                               const DesignMatrices& designs,
                                               const SamplerConfig& config, Rng& rng,
                                               double jitter_sd = 0.1);

// Rank-normalized split R-hat per parameter (NaN for constants).
Eigen::VectorXd split_rhat(const PosteriorDraws& draws);

// Bulk effective sample size per parameter: Geyer initial-monotone
// truncated autocorrelation sums on rank-normalized split chains.
Eigen::VectorXd ess_bulk(const PosteriorDraws& draws);

Diagnostics compute_diagnostics(const PosteriorDraws& draws);

struct FitResult {
    ModelSpec spec;
    PosteriorDraws draws;
    Diagnostics diagnostics;
};

FitResult fit_bdarma(const CompositionalSeries& series, const ModelSpec& spec,
                     const SamplerConfig& config);

}  // namespace simplexcast
