#include "simplexcast/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "simplexcast/errors.hpp"
#include "simplexcast/util.hpp"

namespace simplexcast {

namespace {

struct DrawOutput {
    std::vector<Composition> path;        // h compositions
    std::vector<DirichletParams> params;  // h (mu, phi) pairs
};

DrawOutput simulate_one_draw(const Eigen::VectorXd& flat, const ModelSpec& spec,
                             const DesignMatrices& designs,
                             const Eigen::MatrixXd& ilr_obs, int h, Rng rng) {
    const ParamVector params = unpack_params(flat, spec);
    const int T = static_cast<int>(ilr_obs.rows());
    const int d = spec.ilr_dim();
    const int burn = spec.burn_in();
    const Eigen::MatrixXd mean_path = designs.X * params.beta.transpose();  // (T+h) x d
    const Eigen::VectorXd phi = precision_path(params.gamma, designs.Z);

    // In-sample pass for the residual history.
    const EtaPath in_sample = compute_eta_path_from_ilr(ilr_obs, spec, params, designs);

    Eigen::MatrixXd ilr_hist(T + h, d);
    ilr_hist.topRows(T) = ilr_obs;
    Eigen::MatrixXd resid(T + h, d);
    resid.topRows(T) = in_sample.residuals;

    DrawOutput out;
    out.path.reserve(h);
    out.params.reserve(h);
    Eigen::VectorXd eta_t(d);
    for (int j = 1; j <= h; ++j) {
        const int t = T + j - 1;
        eta_t = mean_path.row(t).transpose();
        if (t >= burn) {
            for (int p = 0; p < spec.P; ++p)
                eta_t.noalias() +=
                    params.ar[p] *
                    (ilr_hist.row(t - p - 1) - mean_path.row(t - p - 1)).transpose();
            for (int q = 0; q < spec.Q; ++q)
                eta_t.noalias() += params.ma[q] * resid.row(t - q - 1).transpose();
        }
        DirichletParams pred(ilr_inverse(eta_t, spec.contrast), phi[t]);
        Composition y = dirichlet_sample(pred, rng);
        ilr_hist.row(t) = ilr(y, spec.contrast).transpose();
        resid.row(t) = centered_ilr_residual(y, pred, spec.contrast).transpose();
        out.params.push_back(std::move(pred));
        out.path.push_back(std::move(y));
    }
    return out;
}

}  // namespace

ForecastResult forecast(const PosteriorDraws& draws, const CompositionalSeries& series,
                        const ModelSpec& spec, const DesignMatrices& designs_full,
                        const ForecastConfig& config) {
    const int h = config.horizon;
    if (h < 1) throw data_error("forecast horizon must be >= 1");
    if (!(config.lower_level > 0.0 && config.lower_level < config.upper_level &&
          config.upper_level < 1.0))
        throw data_error("interval levels must satisfy 0 < lower < upper < 1");
    const int T = series.length();
    if (designs_full.X.rows() < T + h || designs_full.Z.rows() < T + h)
        throw data_error("missing future design rows: need T + horizon");
    if (draws.draws.cols() != spec.flat_dim())
        throw data_error("posterior draws do not match model spec dimension");
    if (series.parts() != spec.C)
        throw data_error("series component count does not match model spec");

    const int S = static_cast<int>(draws.draws.rows());
    Eigen::MatrixXd ilr_obs(T, spec.ilr_dim());
    for (int t = 0; t < T; ++t)
        ilr_obs.row(t) = ilr(series.at(t), spec.contrast).transpose();

    std::vector<DrawOutput> per_draw(S);
    auto worker = [&](int begin, int end) {
        for (int s = begin; s < end; ++s) {
            per_draw[s] = simulate_one_draw(draws.draws.row(s).transpose(), spec,
                                            designs_full, ilr_obs, h,
                                            Rng(config.seed, static_cast<std::uint64_t>(s) + 1));
        }
    };
    int threads = config.threads > 0 ? config.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, S));
    if (threads == 1) {
        worker(0, S);
    } else {
        std::vector<std::thread> pool;
        const int block = (S + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int begin = t * block;
            const int end = std::min(S, begin + block);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    ForecastResult result;
    result.horizon = h;
    result.lower_level = config.lower_level;
    result.upper_level = config.upper_level;
    result.draws.resize(h);
    result.predictive_params.resize(h);
    result.lower.resize(h, spec.C);
    result.upper.resize(h, spec.C);
    result.point.reserve(h);

    std::vector<double> column(S);
    for (int j = 0; j < h; ++j) {
        result.draws[j].reserve(S);
        result.predictive_params[j].reserve(S);
        Eigen::VectorXd mean_shares = Eigen::VectorXd::Zero(spec.C);
        for (int s = 0; s < S; ++s) {
            mean_shares += per_draw[s].path[j].shares();
            result.draws[j].push_back(per_draw[s].path[j]);
            result.predictive_params[j].push_back(per_draw[s].params[j]);
        }
        result.point.emplace_back(Eigen::VectorXd(mean_shares / S));
        for (int c = 0; c < spec.C; ++c) {
            for (int s = 0; s < S; ++s) column[s] = per_draw[s].path[j][c];
            std::sort(column.begin(), column.end());
            result.lower(j, c) = sorted_quantile(column, config.lower_level);
            result.upper(j, c) = sorted_quantile(column, config.upper_level);
        }
    }
    return result;
}

double log_predictive_density(const ForecastResult& result, const Composition& actual,
                              int horizon_j) {
    if (horizon_j < 1 || horizon_j > result.horizon)
        throw data_error("horizon index out of range");
    const auto& params = result.predictive_params[horizon_j - 1];
    Eigen::VectorXd terms(static_cast<int>(params.size()));
    for (std::size_t s = 0; s < params.size(); ++s)
        terms[static_cast<int>(s)] = dirichlet_log_density(actual, params[s]);
    return log_mean_exp(terms);
}

Composition geometric_center_forecast(const ForecastResult& result, int horizon_j) {
    if (horizon_j < 1 || horizon_j > result.horizon)
        throw data_error("horizon index out of range");
    const auto& draws = result.draws[horizon_j - 1];
    Eigen::VectorXd mean_log = Eigen::VectorXd::Zero(draws.front().size());
    for (const auto& y : draws) mean_log += y.shares().array().log().matrix();
    mean_log /= static_cast<double>(draws.size());
    return closure(mean_log.array().exp().matrix());
}

}  // namespace simplexcast
