#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "simplexcast/composition.hpp"

namespace simplexcast {

// Version tag embedded in draw artifacts; bump if the pack_params layout
// ever changes.
inline constexpr const char* kParamOrderVersion = "v1";

// Structure of a BDARMA(P,Q) model on a C-part simplex: VARMA dynamics of
// the ILR-transformed Dirichlet mean around a Fourier-seasonal regression,
// with log-linear Fourier-seasonal precision.
struct ModelSpec {
    int C;
    int P;
    int Q;
    int K_mean;
    int K_prec;
    int period;
    ContrastMatrix contrast;

    ModelSpec(int C_, int P_, int Q_, int K_mean_, int K_prec_, int period_ = 12);
    ModelSpec(int C_, int P_, int Q_, int K_mean_, int K_prec_, int period_,
              ContrastMatrix contrast_);

    int ilr_dim() const { return C - 1; }
    int burn_in() const { return P > Q ? P : Q; }
    int mean_covariates() const;       // m   = 1 + 2K - [2K == period]
    int precision_covariates() const;  // m_z
    int flat_dim() const;
};

// All free parameters in structured form.
struct ParamVector {
    Eigen::MatrixXd beta;                 // (C-1) x m
    std::vector<Eigen::MatrixXd> ar;      // P matrices, (C-1) x (C-1)
    std::vector<Eigen::MatrixXd> ma;      // Q matrices, (C-1) x (C-1)
    Eigen::VectorXd gamma;                // m_z

    void validate(const ModelSpec& spec) const;
};

struct DesignMatrices {
    Eigen::MatrixXd X;  // T x m, intercept first
    Eigen::MatrixXd Z;  // T x m_z
};

// The conditional-mean path and centered innovations of one pass through
// the data. Rows before burn_in hold the covariate mean path with zero
// residuals (the conditioning convention).
struct EtaPath {
    Eigen::MatrixXd eta;        // T x (C-1)
    Eigen::MatrixXd residuals;  // T x (C-1)
    int burn_in;
};

// Intercept plus paired Fourier columns sin/cos(2 pi k t / period) for
// k = 1..K, with t the absolute month index starting at origin_month.
// The identically-zero Nyquist sine (2K == period) is dropped.
Eigen::MatrixXd build_fourier_design(int T, int period, int K, int origin_month);

// Mean and precision designs anchored to a series start month.
DesignMatrices build_designs(const ModelSpec& spec, const YearMonth& start, int T);

Eigen::VectorXd precision_path(const Eigen::VectorXd& gamma, const Eigen::MatrixXd& Z);

EtaPath compute_eta_path(const CompositionalSeries& series, const ModelSpec& spec,
                         const ParamVector& params, const DesignMatrices& designs);

// Same recursion on precomputed ILR observations (one row per time step);
// the fast path for per-draw forecasting.
EtaPath compute_eta_path_from_ilr(const Eigen::MatrixXd& ilr_obs, const ModelSpec& spec,
                                  const ParamVector& params, const DesignMatrices& designs);

double log_prior(const ParamVector& params, const ModelSpec& spec);

double log_likelihood(const CompositionalSeries& series, const ModelSpec& spec,
                      const ParamVector& params, const DesignMatrices& designs);

// Per-observation likelihood terms over scored times t = burn_in..T-1;
// sums to log_likelihood.
Eigen::VectorXd pointwise_log_likelihood(const CompositionalSeries& series,
                                         const ModelSpec& spec, const ParamVector& params,
                                         const DesignMatrices& designs);

// Flat layout (order-stable, version kParamOrderVersion):
//   beta row-major, then ar[0..P-1] row-major, then ma[0..Q-1] row-major,
//   then gamma.
Eigen::VectorXd pack_params(const ParamVector& params);
ParamVector unpack_params(const Eigen::VectorXd& flat, const ModelSpec& spec);
std::vector<std::string> param_names(const ModelSpec& spec);

// Prior means: beta = 0, AR diagonals 0.5, MA = 0, gamma = (3, 0, ...).
ParamVector prior_mean_params(const ModelSpec& spec);

// Precomputes the data-dependent pieces (ILR and log observations,
// designs) so repeated posterior evaluations only pay for the recursion.
// log_posterior returns -infinity for numerically divergent parameters
// (precision exponent beyond +-700) instead of throwing.
class PosteriorEvaluator {
public:
    PosteriorEvaluator(const CompositionalSeries& series, const ModelSpec& spec,
                       const DesignMatrices& designs);

    double log_posterior(const Eigen::VectorXd& flat) const;

    // Posterior with one scored observation's likelihood term removed;
    // the exact leave-one-out target used by refit cross-validation.
    double log_posterior_excluding(const Eigen::VectorXd& flat, int scored_index) const;

    // Scored likelihood terms for one draw; throws on divergence.
    Eigen::VectorXd pointwise(const Eigen::VectorXd& flat) const;

    int scored_count() const;
    const ModelSpec& spec() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

std::function<double(const Eigen::VectorXd&)> make_log_posterior(
    const CompositionalSeries& series, const ModelSpec& spec,
    const DesignMatrices& designs);

}  // namespace simplexcast
