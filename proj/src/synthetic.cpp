#include "simplexcast/synthetic.hpp"

#include <cmath>

#include "simplexcast/dirichlet.hpp"
#include "simplexcast/errors.hpp"
#include "simplexcast/rng.hpp"

namespace simplexcast {

namespace {

std::vector<std::string> default_labels(int C) {
    std::vector<std::string> labels;
    labels.reserve(C);
    for (int c = 1; c <= C; ++c) labels.push_back("c" + std::to_string(c));
    return labels;
}

SimulationOutput simulate_core(const ModelSpec& spec, const ParamVector& params, int T,
                               const YearMonth& origin, std::uint64_t seed,
                               const std::optional<RegimeBreak>& break_spec, int discard,
                               std::vector<std::string> labels) {
    params.validate(spec);
    if (T <= spec.burn_in()) throw data_error("simulation needs T > max(P, Q)");
    if (discard < 0) throw data_error("discard must be nonnegative");
    if (labels.empty()) labels = default_labels(spec.C);
    if (break_spec) {
        if (break_spec->break_index < 0 || break_spec->break_index >= T)
            throw data_error("break month outside the simulated series");
        if (break_spec->shifted_profile.size() != spec.C)
            throw data_error("shifted profile has wrong component count");
        if (break_spec->half_life_months < 0.0)
            throw data_error("recovery half-life must be nonnegative");
    }

    const int total = T + discard;
    const int d = spec.ilr_dim();
    const int burn = spec.burn_in();
    const DesignMatrices designs = build_designs(spec, origin, total);
    const Eigen::VectorXd phi = precision_path(params.gamma, designs.Z);
    Eigen::MatrixXd mean_path = designs.X * params.beta.transpose();  // total x d

    if (break_spec) {
        const Eigen::VectorXd baseline = params.beta.col(0);
        const Eigen::VectorXd shifted = ilr(break_spec->shifted_profile, spec.contrast);
        const Eigen::VectorXd delta = shifted - baseline;
        const int b = break_spec->break_index + discard;
        for (int t = b; t < total; ++t) {
            double w;
            if (break_spec->half_life_months == 0.0) {
                w = (t == b) ? 1.0 : 0.0;
            } else {
                w = std::exp2(-static_cast<double>(t - b) / break_spec->half_life_months);
            }
            mean_path.row(t) += (w * delta).transpose();
        }
    }

    Rng rng(seed);
    Eigen::MatrixXd eta(total, d);
    Eigen::MatrixXd resid = Eigen::MatrixXd::Zero(total, d);
    Eigen::MatrixXd ilr_obs(total, d);
    std::vector<Composition> observations;
    observations.reserve(total);
    Eigen::VectorXd eta_t(d);

    for (int t = 0; t < total; ++t) {
        eta_t = mean_path.row(t).transpose();
        if (t >= burn) {
            for (int p = 0; p < spec.P; ++p)
                eta_t.noalias() +=
                    params.ar[p] *
                    (ilr_obs.row(t - p - 1) - mean_path.row(t - p - 1)).transpose();
            for (int q = 0; q < spec.Q; ++q)
                eta_t.noalias() += params.ma[q] * resid.row(t - q - 1).transpose();
        }
        eta.row(t) = eta_t.transpose();

        const DirichletParams p_t(ilr_inverse(eta_t, spec.contrast), phi[t]);
        Composition y = dirichlet_sample(p_t, rng);
        ilr_obs.row(t) = ilr(y, spec.contrast).transpose();
        if (t >= burn)
            resid.row(t) = centered_ilr_residual(y, p_t, spec.contrast).transpose();
        observations.push_back(std::move(y));
    }

    if (discard > 0) {
        observations.erase(observations.begin(), observations.begin() + discard);
    }
    CompositionalSeries series(origin.plus_months(discard), std::move(observations),
                               std::move(labels));
    EtaPath latent{eta.bottomRows(T), resid.bottomRows(T), burn};
    return SimulationOutput{std::move(series), std::move(latent)};
}

}  // namespace

SimulationOutput simulate_bdarma(const ModelSpec& spec, const ParamVector& params, int T,
                                 const YearMonth& origin, std::uint64_t seed, int discard,
                                 std::vector<std::string> labels) {
    return simulate_core(spec, params, T, origin, seed, std::nullopt, discard,
                         std::move(labels));
}

SimulationOutput inject_regime_break(const ModelSpec& spec, const ParamVector& params,
                                     int T, const YearMonth& origin, std::uint64_t seed,
                                     const std::optional<RegimeBreak>& break_spec,
                                     std::vector<std::string> labels) {
    return simulate_core(spec, params, T, origin, seed, break_spec, 0, std::move(labels));
}

ModelSpec ScenarioPreset::model_spec(int P, int Q, int K_mean, int K_prec,
                                     int period) const {
    return ModelSpec(C, P, Q, K_mean, K_prec, period);
}

ParamVector ScenarioPreset::params(const ModelSpec& spec) const {
    if (spec.C != C) throw data_error("preset and model spec disagree on C");
    const int d = spec.ilr_dim();
    ParamVector out;
    out.beta = Eigen::MatrixXd::Zero(d, spec.mean_covariates());
    out.beta.col(0) = ilr(profile, spec.contrast);
    // Fixed synthetic seasonal pattern: amplitude decays with harmonic
    // order and varies smoothly across ILR coordinates.
    int col = 1;
    for (int k = 1; k <= spec.K_mean; ++k) {
        const double factor = mean_amplitude / k;
        if (2 * k != spec.period) {
            for (int i = 0; i < d; ++i)
                out.beta(i, col) = factor * std::cos(1.7 * i + 0.3 * k);
            ++col;
        }
        for (int i = 0; i < d; ++i)
            out.beta(i, col) = factor * std::sin(1.1 * i + 0.7 * k);
        ++col;
    }
    out.ar.assign(spec.P, Eigen::MatrixXd::Identity(d, d) * ar_diag);
    out.ma.assign(spec.Q, Eigen::MatrixXd::Identity(d, d) * 0.2);
    out.gamma = Eigen::VectorXd::Zero(spec.precision_covariates());
    out.gamma[0] = precision_intercept;
    if (out.gamma.size() >= 2) out.gamma[1] = precision_amplitude;
    if (out.gamma.size() >= 3) out.gamma[2] = -0.5 * precision_amplitude;
    return out;
}

namespace {

Composition geometric_profile(double top, double second, int C, double ratio) {
    Eigen::VectorXd shares(C);
    shares[0] = top;
    int start = 1;
    double rest = 1.0 - top;
    if (second > 0.0) {
        shares[1] = second;
        rest -= second;
        start = 2;
    }
    double wsum = 0.0;
    for (int i = start; i < C; ++i) wsum += std::pow(ratio, i - start);
    for (int i = start; i < C; ++i)
        shares[i] = rest * std::pow(ratio, i - start) / wsum;
    return Composition(shares);
}

Composition shift_top_share(const Composition& base, double add) {
    Eigen::VectorXd shares = base.shares();
    const double top = shares[0] + add;
    const double scale = (1.0 - top) / (1.0 - shares[0]);
    shares[0] = top;
    for (int i = 1; i < shares.size(); ++i) shares[i] *= scale;
    return Composition(shares);
}

}  // namespace

ScenarioPreset preset(const std::string& name) {
    if (name == "dominant") {
        // One market holding an 0.82 average share; remaining mass split
        // geometrically (ratio 0.55) over seven components.
        Composition profile = geometric_profile(0.82, 0.0, 8, 0.55);
        ScenarioPreset p{
            "dominant", 8, profile, "dominant",
            0.85,  // ar_diag
            0.04,  // mean_amplitude
            5.5,   // precision_intercept
            0.3,   // precision_amplitude
            RegimeBreak{38, shift_top_share(profile, 0.15), 8.0},
            {"top", "m2", "m3", "m4", "m5", "m6", "m7", "other"}};
        return p;
    }
    if (name == "diverse") {
        // Top shares 0.234 and 0.149; the rest spread nearly evenly
        // (geometric ratio 0.85) over six components.
        Composition profile = geometric_profile(0.234, 0.149, 8, 0.85);
        ScenarioPreset p{
            "diverse", 8, profile, "diverse",
            0.80,
            0.12,
            4.5,
            0.4,
            RegimeBreak{38, shift_top_share(profile, 0.25), 12.0},
            {"top", "m2", "m3", "m4", "m5", "m6", "m7", "other"}};
        return p;
    }
    throw data_error("unknown preset '" + name + "' (expected dominant or diverse)");
}

}  // namespace simplexcast
