#include "simplexcast/model.hpp"

#include <cmath>
#include <limits>

#include "simplexcast/dirichlet.hpp"
#include "simplexcast/errors.hpp"
#include "simplexcast/special_functions.hpp"

namespace simplexcast {

using special::digamma;
using special::log_gamma;
using special::log_normal_pdf;

namespace {

constexpr double kMaxPrecisionExponent = 700.0;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::VectorXd stabilized_softmax(const Eigen::VectorXd& logits) {
    Eigen::VectorXd shifted = logits.array() - logits.maxCoeff();
    Eigen::VectorXd expd =
        shifted.array().exp().max(std::numeric_limits<double>::min()).matrix();
    return expd / expd.sum();
}

}  // namespace

ModelSpec::ModelSpec(int C_, int P_, int Q_, int K_mean_, int K_prec_, int period_)
    : ModelSpec(C_, P_, Q_, K_mean_, K_prec_, period_, build_helmert_contrast(C_)) {}

ModelSpec::ModelSpec(int C_, int P_, int Q_, int K_mean_, int K_prec_, int period_,
                     ContrastMatrix contrast_)
    : C(C_), P(P_), Q(Q_), K_mean(K_mean_), K_prec(K_prec_), period(period_),
      contrast(std::move(contrast_)) {
    if (C < 2) throw data_error("model requires C >= 2");
    if (P < 0 || Q < 0) throw data_error("AR/MA orders must be nonnegative");
    if (period < 2) throw data_error("seasonal period must be >= 2");
    if (K_mean < 0 || 2 * K_mean > period)
        throw data_error("K_mean must lie in [0, period/2]");
    if (K_prec < 0 || 2 * K_prec > period)
        throw data_error("K_prec must lie in [0, period/2]");
    if (contrast.parts() != C)
        throw data_error("contrast matrix does not match C");
}

namespace {
int fourier_columns(int K, int period) { return 1 + 2 * K - (2 * K == period ? 1 : 0); }
}

int ModelSpec::mean_covariates() const { return fourier_columns(K_mean, period); }
int ModelSpec::precision_covariates() const { return fourier_columns(K_prec, period); }

int ModelSpec::flat_dim() const {
    const int d = ilr_dim();
    return d * mean_covariates() + (P + Q) * d * d + precision_covariates();
}

void ParamVector::validate(const ModelSpec& spec) const {
    const int d = spec.ilr_dim();
    if (beta.rows() != d || beta.cols() != spec.mean_covariates())
        throw data_error("beta has wrong shape");
    if (static_cast<int>(ar.size()) != spec.P)
        throw data_error("wrong number of AR matrices");
    if (static_cast<int>(ma.size()) != spec.Q)
        throw data_error("wrong number of MA matrices");
    for (const auto& A : ar)
        if (A.rows() != d || A.cols() != d) throw data_error("AR matrix has wrong shape");
    for (const auto& B : ma)
        if (B.rows() != d || B.cols() != d) throw data_error("MA matrix has wrong shape");
    if (gamma.size() != spec.precision_covariates())
        throw data_error("gamma has wrong length");
    if (!beta.allFinite() || !gamma.allFinite())
        throw data_error("parameters must be finite");
    for (const auto& A : ar)
        if (!A.allFinite()) throw data_error("parameters must be finite");
    for (const auto& B : ma)
        if (!B.allFinite()) throw data_error("parameters must be finite");
}

Eigen::MatrixXd build_fourier_design(int T, int period, int K, int origin_month) {
    if (T < 1) throw data_error("design needs T >= 1");
    if (period < 2) throw data_error("period must be >= 2");
    if (K < 0 || 2 * K > period) throw data_error("K must lie in [0, period/2]");
    if (origin_month < 1 || origin_month > period)
        throw data_error("origin_month must lie in [1, period]");

    const int m = fourier_columns(K, period);
    Eigen::MatrixXd X(T, m);
    X.col(0).setOnes();
    const double two_pi = 2.0 * 3.14159265358979323846;
    for (int r = 0; r < T; ++r) {
        const double t = origin_month + r;
        int col = 1;
        for (int k = 1; k <= K; ++k) {
            const double angle = two_pi * k * t / period;
            if (2 * k != period) X(r, col++) = std::sin(angle);
            X(r, col++) = std::cos(angle);
        }
    }
    return X;
}

DesignMatrices build_designs(const ModelSpec& spec, const YearMonth& start, int T) {
    const int origin = ((start.month - 1) % spec.period) + 1;
    return DesignMatrices{
        build_fourier_design(T, spec.period, spec.K_mean, origin),
        build_fourier_design(T, spec.period, spec.K_prec, origin)};
}

Eigen::VectorXd precision_path(const Eigen::VectorXd& gamma, const Eigen::MatrixXd& Z) {
    if (Z.cols() != gamma.size())
        throw data_error("precision design does not match gamma length");
    Eigen::VectorXd lin = Z * gamma;
    if (lin.cwiseAbs().maxCoeff() > kMaxPrecisionExponent)
        throw numerical_error("divergent parameter: precision exponent beyond 700");
    return lin.array().exp();
}

namespace {

// One conditional pass over precomputed ILR observations: the eta
// recursion, centered residuals, precisions, and (optionally) the scored
// log-likelihood terms. ok = false signals a divergent precision.
struct PassResult {
    Eigen::MatrixXd eta;
    Eigen::MatrixXd resid;
    Eigen::VectorXd phi;
    Eigen::VectorXd loglik;  // T - burn entries when requested
    bool ok = true;
};

PassResult conditional_pass(const Eigen::MatrixXd& ilr_obs, const Eigen::MatrixXd* log_y,
                            const ModelSpec& spec, const ParamVector& params,
                            const DesignMatrices& designs, int skip_scored = -1) {
    const int T = static_cast<int>(ilr_obs.rows());
    const int d = spec.ilr_dim();
    const int C = spec.C;
    const int burn = spec.burn_in();
    const Eigen::MatrixXd& V = spec.contrast.matrix();

    PassResult out;
    Eigen::VectorXd lin = designs.Z.topRows(T) * params.gamma;
    if (lin.cwiseAbs().maxCoeff() > kMaxPrecisionExponent) {
        out.ok = false;
        return out;
    }
    out.phi = lin.array().exp();
    out.eta.resize(T, d);
    out.resid = Eigen::MatrixXd::Zero(T, d);
    if (log_y) out.loglik = Eigen::VectorXd::Zero(T - burn);

    const Eigen::MatrixXd mean_path = designs.X.topRows(T) * params.beta.transpose();
    Eigen::VectorXd eta_t(d), mu(C), elog(C);

    for (int t = 0; t < T; ++t) {
        eta_t = mean_path.row(t).transpose();
        if (t >= burn) {
            for (int p = 0; p < spec.P; ++p)
                eta_t.noalias() +=
                    params.ar[p] *
                    (ilr_obs.row(t - p - 1) - mean_path.row(t - p - 1)).transpose();
            for (int q = 0; q < spec.Q; ++q)
                eta_t.noalias() += params.ma[q] * out.resid.row(t - q - 1).transpose();
        }
        out.eta.row(t) = eta_t.transpose();
        if (t < burn) continue;

        const double phi_t = out.phi[t];
        mu = stabilized_softmax(V * eta_t);
        const double psi_phi = digamma(phi_t);
        for (int c = 0; c < C; ++c) elog[c] = digamma(phi_t * mu[c]) - psi_phi;
        out.resid.row(t) = ilr_obs.row(t) - (V.transpose() * elog).transpose();

        if (log_y) {
            if (t - burn == skip_scored) continue;
            double term = log_gamma(phi_t);
            for (int c = 0; c < C; ++c) {
                const double alpha = phi_t * mu[c];
                term -= log_gamma(alpha);
                term += (alpha - 1.0) * (*log_y)(t, c);
            }
            if (!std::isfinite(term)) {
                out.ok = false;
                return out;
            }
            out.loglik[t - burn] = term;
        }
    }
    return out;
}

Eigen::MatrixXd ilr_matrix(const CompositionalSeries& series, const ContrastMatrix& V) {
    Eigen::MatrixXd out(series.length(), V.dim());
    for (int t = 0; t < series.length(); ++t)
        out.row(t) = ilr(series.at(t), V).transpose();
    return out;
}

Eigen::MatrixXd log_matrix(const CompositionalSeries& series) {
    Eigen::MatrixXd out(series.length(), series.parts());
    for (int t = 0; t < series.length(); ++t)
        out.row(t) = series.at(t).shares().array().log().matrix().transpose();
    return out;
}

void check_inputs(const CompositionalSeries& series, const ModelSpec& spec,
                  const ParamVector& params, const DesignMatrices& designs) {
    if (series.parts() != spec.C)
        throw data_error("series component count does not match model spec");
    if (series.length() <= spec.burn_in())
        throw data_error("series too short: need T > max(P, Q)");
    params.validate(spec);
    if (designs.X.rows() < series.length() || designs.Z.rows() < series.length())
        throw data_error("design matrices shorter than series");
    if (designs.X.cols() != spec.mean_covariates() ||
        designs.Z.cols() != spec.precision_covariates())
        throw data_error("design matrices have wrong column counts");
}

}  // namespace

EtaPath compute_eta_path(const CompositionalSeries& series, const ModelSpec& spec,
                         const ParamVector& params, const DesignMatrices& designs) {
    check_inputs(series, spec, params, designs);
    return compute_eta_path_from_ilr(ilr_matrix(series, spec.contrast), spec, params,
                                     designs);
}

EtaPath compute_eta_path_from_ilr(const Eigen::MatrixXd& ilr_obs, const ModelSpec& spec,
                                  const ParamVector& params, const DesignMatrices& designs) {
    if (ilr_obs.cols() != spec.ilr_dim())
        throw data_error("ILR observations have wrong column count");
    if (ilr_obs.rows() <= spec.burn_in())
        throw data_error("series too short: need T > max(P, Q)");
    params.validate(spec);
    PassResult pass = conditional_pass(ilr_obs, nullptr, spec, params, designs);
    if (!pass.ok)
        throw numerical_error("divergent parameter: precision exponent beyond 700");
    return EtaPath{std::move(pass.eta), std::move(pass.resid), spec.burn_in()};
}

double log_prior(const ParamVector& params, const ModelSpec& spec) {
    params.validate(spec);
    double lp = 0.0;
    for (int i = 0; i < params.beta.rows(); ++i)
        for (int j = 0; j < params.beta.cols(); ++j)
            lp += log_normal_pdf(params.beta(i, j), 0.0, 1.0);
    for (const auto& A : params.ar)
        for (int i = 0; i < A.rows(); ++i)
            for (int j = 0; j < A.cols(); ++j)
                lp += (i == j) ? log_normal_pdf(A(i, j), 0.5, 0.3)
                               : log_normal_pdf(A(i, j), 0.0, 0.2);
    for (const auto& B : params.ma)
        for (int i = 0; i < B.rows(); ++i)
            for (int j = 0; j < B.cols(); ++j) lp += log_normal_pdf(B(i, j), 0.0, 0.3);
    for (int k = 0; k < params.gamma.size(); ++k)
        lp += (k == 0) ? log_normal_pdf(params.gamma[k], 3.0, 1.0)
                       : log_normal_pdf(params.gamma[k], 0.0, 0.5);
    return lp;
}

double log_likelihood(const CompositionalSeries& series, const ModelSpec& spec,
                      const ParamVector& params, const DesignMatrices& designs) {
    return pointwise_log_likelihood(series, spec, params, designs).sum();
}

Eigen::VectorXd pointwise_log_likelihood(const CompositionalSeries& series,
                                         const ModelSpec& spec, const ParamVector& params,
                                         const DesignMatrices& designs) {
    check_inputs(series, spec, params, designs);
    const Eigen::MatrixXd ilr_obs = ilr_matrix(series, spec.contrast);
    const Eigen::MatrixXd log_y = log_matrix(series);
    PassResult pass = conditional_pass(ilr_obs, &log_y, spec, params, designs);
    if (!pass.ok)
        throw numerical_error("divergent parameter: precision exponent beyond 700");
    return pass.loglik;
}

Eigen::VectorXd pack_params(const ParamVector& params) {
    int n = static_cast<int>(params.beta.size() + params.gamma.size());
    for (const auto& A : params.ar) n += static_cast<int>(A.size());
    for (const auto& B : params.ma) n += static_cast<int>(B.size());
    Eigen::VectorXd flat(n);
    int k = 0;
    for (int i = 0; i < params.beta.rows(); ++i)
        for (int j = 0; j < params.beta.cols(); ++j) flat[k++] = params.beta(i, j);
    for (const auto& A : params.ar)
        for (int i = 0; i < A.rows(); ++i)
            for (int j = 0; j < A.cols(); ++j) flat[k++] = A(i, j);
    for (const auto& B : params.ma)
        for (int i = 0; i < B.rows(); ++i)
            for (int j = 0; j < B.cols(); ++j) flat[k++] = B(i, j);
    for (int i = 0; i < params.gamma.size(); ++i) flat[k++] = params.gamma[i];
    return flat;
}

ParamVector unpack_params(const Eigen::VectorXd& flat, const ModelSpec& spec) {
    if (flat.size() != spec.flat_dim())
        throw data_error("flat parameter vector has wrong length");
    const int d = spec.ilr_dim();
    const int m = spec.mean_covariates();
    ParamVector params;
    params.beta.resize(d, m);
    int k = 0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < m; ++j) params.beta(i, j) = flat[k++];
    params.ar.resize(spec.P);
    for (auto& A : params.ar) {
        A.resize(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) A(i, j) = flat[k++];
    }
    params.ma.resize(spec.Q);
    for (auto& B : params.ma) {
        B.resize(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) B(i, j) = flat[k++];
    }
    params.gamma.resize(spec.precision_covariates());
    for (int i = 0; i < params.gamma.size(); ++i) params.gamma[i] = flat[k++];
    return params;
}

std::vector<std::string> param_names(const ModelSpec& spec) {
    std::vector<std::string> names;
    names.reserve(spec.flat_dim());
    const int d = spec.ilr_dim();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < spec.mean_covariates(); ++j)
            names.push_back("beta." + std::to_string(i + 1) + "." + std::to_string(j + 1));
    for (int p = 1; p <= spec.P; ++p)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                names.push_back("ar" + std::to_string(p) + "." + std::to_string(i + 1) +
                                "." + std::to_string(j + 1));
    for (int q = 1; q <= spec.Q; ++q)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                names.push_back("ma" + std::to_string(q) + "." + std::to_string(i + 1) +
                                "." + std::to_string(j + 1));
    for (int k = 0; k < spec.precision_covariates(); ++k)
        names.push_back("gamma." + std::to_string(k + 1));
    return names;
}

ParamVector prior_mean_params(const ModelSpec& spec) {
    const int d = spec.ilr_dim();
    ParamVector params;
    params.beta = Eigen::MatrixXd::Zero(d, spec.mean_covariates());
    params.ar.assign(spec.P, Eigen::MatrixXd::Identity(d, d) * 0.5);
    params.ma.assign(spec.Q, Eigen::MatrixXd::Zero(d, d));
    params.gamma = Eigen::VectorXd::Zero(spec.precision_covariates());
    params.gamma[0] = 3.0;
    return params;
}

struct PosteriorEvaluator::Impl {
    ModelSpec spec;
    DesignMatrices designs;
    Eigen::MatrixXd ilr_obs;
    Eigen::MatrixXd log_y;

    Impl(const CompositionalSeries& series, const ModelSpec& spec_,
         const DesignMatrices& designs_)
        : spec(spec_), designs(designs_) {
        // Params are validated per evaluation; data checks happen once.
        check_inputs(series, spec, prior_mean_params(spec), designs);
        ilr_obs = ilr_matrix(series, spec.contrast);
        log_y = log_matrix(series);
    }

    double posterior(const Eigen::VectorXd& flat, int skip) const {
        if (!flat.allFinite()) return kNegInf;
        const ParamVector params = unpack_params(flat, spec);
        PassResult pass = conditional_pass(ilr_obs, &log_y, spec, params, designs, skip);
        if (!pass.ok) return kNegInf;
        const double total = log_prior(params, spec) + pass.loglik.sum();
        return std::isfinite(total) ? total : kNegInf;
    }
};

PosteriorEvaluator::PosteriorEvaluator(const CompositionalSeries& series,
                                       const ModelSpec& spec,
                                       const DesignMatrices& designs)
    : impl_(std::make_shared<Impl>(series, spec, designs)) {}

double PosteriorEvaluator::log_posterior(const Eigen::VectorXd& flat) const {
    return impl_->posterior(flat, -1);
}

double PosteriorEvaluator::log_posterior_excluding(const Eigen::VectorXd& flat,
                                                   int scored_index) const {
    if (scored_index < 0 || scored_index >= scored_count())
        throw data_error("scored index out of range");
    return impl_->posterior(flat, scored_index);
}

Eigen::VectorXd PosteriorEvaluator::pointwise(const Eigen::VectorXd& flat) const {
    const ParamVector params = unpack_params(flat, impl_->spec);
    PassResult pass =
        conditional_pass(impl_->ilr_obs, &impl_->log_y, impl_->spec, params, impl_->designs);
    if (!pass.ok)
        throw numerical_error("divergent parameter: precision exponent beyond 700");
    return pass.loglik;
}

int PosteriorEvaluator::scored_count() const {
    return static_cast<int>(impl_->ilr_obs.rows()) - impl_->spec.burn_in();
}

const ModelSpec& PosteriorEvaluator::spec() const { return impl_->spec; }

std::function<double(const Eigen::VectorXd&)> make_log_posterior(
    const CompositionalSeries& series, const ModelSpec& spec,
    const DesignMatrices& designs) {
    PosteriorEvaluator eval(series, spec, designs);
    return [eval](const Eigen::VectorXd& flat) { return eval.log_posterior(flat); };
}

}  // namespace simplexcast
