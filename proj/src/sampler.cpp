#include "simplexcast/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

#include "simplexcast/errors.hpp"
#include "simplexcast/special_functions.hpp"

namespace simplexcast {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ChainResult {
    Eigen::MatrixXd draws;
    double acceptance;
};

ChainResult run_chain(const std::function<double(const Eigen::VectorXd&)>& log_post,
                      Eigen::VectorXd x, const SamplerConfig& cfg,
                      std::uint64_t chain_index) {
    Rng rng(cfg.seed, chain_index + 1);
    const int d = static_cast<int>(x.size());
    double lp = log_post(x);
    if (!std::isfinite(lp))
        throw convergence_error("log posterior not finite at chain initialization");

    double log_lambda = std::log(2.38 * 2.38 / d);
    Eigen::MatrixXd chol = Eigen::MatrixXd::Identity(d, d) * 0.1;

    Eigen::VectorXd mean = x;
    Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(d, d);
    long count = 1;

    const int n_keep = cfg.iterations - cfg.warmup;
    Eigen::MatrixXd draws(n_keep, d);
    long accept_warm = 0;
    long accept_keep = 0;
    Eigen::VectorXd z(d), prop(d), delta(d);
    const int refresh = 25;

    for (int k = 1; k <= cfg.iterations; ++k) {
        const bool warm = k <= cfg.warmup;
        for (int i = 0; i < d; ++i) z[i] = rng.normal();
        prop = x + std::exp(0.5 * log_lambda) * (chol * z);
        const double lp_prop = log_post(prop);
        double alpha = 0.0;
        if (std::isfinite(lp_prop))
            alpha = lp_prop >= lp ? 1.0 : std::exp(lp_prop - lp);
        if (rng.uniform() < alpha) {
            x = prop;
            lp = lp_prop;
            if (warm)
                ++accept_warm;
            else
                ++accept_keep;
        }
        if (warm) {
            log_lambda += std::pow(k, -0.6) * (alpha - cfg.target_acceptance);
            ++count;
            delta = x - mean;
            mean += delta / static_cast<double>(count);
            m2.noalias() += delta * (x - mean).transpose();
            if ((k % refresh == 0 || k == cfg.warmup) && count > 2 * d + 4) {
                Eigen::MatrixXd sigma = m2 / static_cast<double>(count - 1);
                sigma.diagonal().array() += 1e-8 + 1e-6 * sigma.trace() / d;
                Eigen::LLT<Eigen::MatrixXd> llt(sigma);
                if (llt.info() == Eigen::Success) chol = llt.matrixL();
            }
        } else {
            draws.row(k - cfg.warmup - 1) = x.transpose();
        }
    }
    if (accept_warm == 0)
        throw convergence_error("sampler adaptation failed: zero acceptance in warmup");
    return ChainResult{std::move(draws),
                       static_cast<double>(accept_keep) / std::max(1, n_keep)};
}

}  // namespace

void SamplerConfig::validate() const {
    if (chains < 1) throw data_error("sampler needs at least one chain");
    if (warmup < 1 || warmup >= iterations)
        throw data_error("sampler requires 1 <= warmup < iterations");
    if (!(target_acceptance > 0.0 && target_acceptance < 1.0))
        throw data_error("target acceptance must lie in (0,1)");
}

PosteriorDraws run_sampler(const std::function<double(const Eigen::VectorXd&)>& log_posterior,
                           const std::vector<Eigen::VectorXd>& init,
                           const SamplerConfig& config) {
    config.validate();
    if (static_cast<int>(init.size()) != config.chains)
        throw data_error("need one initial vector per chain");
    const int d = static_cast<int>(init.front().size());
    for (const auto& v : init) {
        if (v.size() != d) throw data_error("initial vectors disagree on dimension");
        if (!v.allFinite()) throw data_error("initial vector has non-finite entries");
    }

    std::vector<ChainResult> results(config.chains);
    const int threads = config.threads > 0
                            ? config.threads
                            : static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || config.chains == 1) {
        for (int c = 0; c < config.chains; ++c)
            results[c] = run_chain(log_posterior, init[c], config, c);
    } else {
        std::vector<std::future<ChainResult>> futures;
        futures.reserve(config.chains);
        for (int c = 0; c < config.chains; ++c)
            futures.push_back(std::async(std::launch::async, [&, c] {
                return run_chain(log_posterior, init[c], config, c);
            }));
        for (int c = 0; c < config.chains; ++c) results[c] = futures[c].get();
    }

    const int n_keep = config.iterations - config.warmup;
    PosteriorDraws out;
    out.chains = config.chains;
    out.iterations = config.iterations;
    out.warmup = config.warmup;
    out.draws.resize(static_cast<long>(config.chains) * n_keep, d);
    out.chain_ids.resize(static_cast<std::size_t>(config.chains) * n_keep);
    for (int c = 0; c < config.chains; ++c) {
        out.draws.middleRows(static_cast<long>(c) * n_keep, n_keep) = results[c].draws;
        std::fill(out.chain_ids.begin() + static_cast<long>(c) * n_keep,
                  out.chain_ids.begin() + static_cast<long>(c + 1) * n_keep, c);
        out.acceptance_rates.push_back(results[c].acceptance);
    }
    if (!out.draws.allFinite())
        throw numerical_error("sampler produced non-finite draws");
    return out;
}

std::vector<Eigen::VectorXd> initialize_chains(const ModelSpec& spec,
                                               const CompositionalSeries& series,
                                               const DesignMatrices& designs,
                                               const SamplerConfig& config, Rng& rng,
                                               double jitter_sd) {
    PosteriorEvaluator eval(series, spec, designs);
    const Eigen::VectorXd base = pack_params(prior_mean_params(spec));
    std::vector<Eigen::VectorXd> inits;
    inits.reserve(config.chains);
    for (int c = 0; c < config.chains; ++c) {
        bool found = false;
        for (int attempt = 0; attempt < 100 && !found; ++attempt) {
            Eigen::VectorXd v = base;
            for (int i = 0; i < v.size(); ++i) v[i] += jitter_sd * rng.normal();
            if (std::isfinite(eval.log_posterior(v))) {
                inits.push_back(std::move(v));
                found = true;
            }
        }
        if (!found)
            throw convergence_error(
                "could not find a finite-posterior initialization in 100 attempts");
    }
    return inits;
}

namespace {

// Split each chain in half (dropping the middle draw when odd) and
// rank-normalize each parameter across the pooled split chains.
struct SplitChains {
    std::vector<Eigen::MatrixXd> z;  // per split chain, n_half x d
    int n_half = 0;
};

SplitChains split_and_rank_normalize(const PosteriorDraws& draws,
                                     std::vector<int>* constant_out) {
    const int d = static_cast<int>(draws.draws.cols());
    const int n = draws.draws_per_chain();
    if (n < 2) throw data_error("diagnostics need at least 2 draws per chain");
    const int n_half = n / 2;
    const int m = 2 * draws.chains;

    SplitChains out;
    out.n_half = n_half;
    out.z.assign(m, Eigen::MatrixXd(n_half, d));

    // Gather split-chain values in a fixed order.
    auto value_at = [&](int split_chain, int i, int j) {
        const int chain = split_chain / 2;
        const int offset = (split_chain % 2 == 0) ? 0 : n - n_half;
        return draws.draws(static_cast<long>(chain) * n + offset + i, j);
    };

    const long N = static_cast<long>(m) * n_half;
    std::vector<std::pair<double, long>> pool(N);
    std::vector<double> zvals(N);
    for (int j = 0; j < d; ++j) {
        for (int sc = 0; sc < m; ++sc)
            for (int i = 0; i < n_half; ++i)
                pool[static_cast<long>(sc) * n_half + i] = {value_at(sc, i, j),
                                                            static_cast<long>(sc) * n_half + i};
        std::sort(pool.begin(), pool.end());
        const bool constant = pool.front().first == pool.back().first;
        if (constant && constant_out) constant_out->push_back(j);
        // Average ranks over ties, then map through the normal quantile.
        long i = 0;
        while (i < N) {
            long k = i;
            while (k + 1 < N && pool[k + 1].first == pool[i].first) ++k;
            const double rank = 0.5 * (i + k) + 1.0;  // 1-based average rank
            const double z = constant
                                 ? kNaN
                                 : special::inverse_normal_cdf((rank - 0.375) / (N + 0.25));
            for (long t = i; t <= k; ++t) zvals[pool[t].second] = z;
            i = k + 1;
        }
        for (int sc = 0; sc < m; ++sc)
            for (int ii = 0; ii < n_half; ++ii)
                out.z[sc](ii, j) = zvals[static_cast<long>(sc) * n_half + ii];
    }
    return out;
}

}  // namespace

Eigen::VectorXd split_rhat(const PosteriorDraws& draws) {
    const int d = static_cast<int>(draws.draws.cols());
    std::vector<int> constants;
    const SplitChains sc = split_and_rank_normalize(draws, &constants);
    const int m = static_cast<int>(sc.z.size());
    const double n = sc.n_half;

    Eigen::VectorXd rhat(d);
    for (int j = 0; j < d; ++j) {
        if (std::isnan(sc.z[0](0, j))) {
            rhat[j] = kNaN;
            continue;
        }
        double w = 0.0;
        Eigen::VectorXd means(m);
        for (int c = 0; c < m; ++c) {
            const auto col = sc.z[c].col(j);
            const double mu = col.mean();
            means[c] = mu;
            w += (col.array() - mu).square().sum() / (n - 1.0);
        }
        w /= m;
        const double grand = means.mean();
        const double var_means = (means.array() - grand).square().sum() / (m - 1.0);
        const double var_plus = (n - 1.0) / n * w + var_means;
        rhat[j] = std::max(std::sqrt(var_plus / w), 1.0 - 1e-3);
    }
    return rhat;
}

Eigen::VectorXd ess_bulk(const PosteriorDraws& draws) {
    const int d = static_cast<int>(draws.draws.cols());
    const SplitChains sc = split_and_rank_normalize(draws, nullptr);
    const int m = static_cast<int>(sc.z.size());
    const int n = sc.n_half;
    const double S = static_cast<double>(draws.draws.rows());

    Eigen::VectorXd ess(d);
    for (int j = 0; j < d; ++j) {
        if (std::isnan(sc.z[0](0, j))) {
            ess[j] = kNaN;
            continue;
        }
        std::vector<Eigen::VectorXd> centered(m);
        double w = 0.0;
        Eigen::VectorXd means(m);
        for (int c = 0; c < m; ++c) {
            centered[c] = sc.z[c].col(j);
            means[c] = centered[c].mean();
            centered[c].array() -= means[c];
            w += centered[c].squaredNorm() / (n - 1.0);
        }
        w /= m;
        const double grand = means.mean();
        const double var_means =
            m > 1 ? (means.array() - grand).square().sum() / (m - 1.0) : 0.0;
        const double var_plus = (n - 1.0) / n * w + var_means;

        auto rho_at = [&](int lag) {
            double acov = 0.0;
            for (int c = 0; c < m; ++c) {
                double s = 0.0;
                for (int i = 0; i + lag < n; ++i) s += centered[c][i] * centered[c][i + lag];
                acov += s / n;
            }
            acov /= m;
            return 1.0 - (w - acov) / var_plus;
        };

        // Geyer initial monotone positive sequence over lag pairs.
        double tau = -1.0;
        double prev_pair = std::numeric_limits<double>::infinity();
        int lag = 0;
        while (lag + 1 < n) {
            const double rho_even = (lag == 0) ? 1.0 : rho_at(lag);
            const double rho_odd = rho_at(lag + 1);
            double pair = rho_even + rho_odd;
            if (pair <= 0.0) break;
            pair = std::min(pair, prev_pair);
            prev_pair = pair;
            tau += 2.0 * pair;
            lag += 2;
        }
        tau = std::max(tau, 1e-6);
        ess[j] = std::min(S, S / tau);
    }
    return ess;
}

Diagnostics compute_diagnostics(const PosteriorDraws& draws) {
    Diagnostics diag;
    diag.rhat = split_rhat(draws);
    diag.ess = ess_bulk(draws);
    for (int j = 0; j < diag.rhat.size(); ++j) {
        if (std::isnan(diag.rhat[j]))
            diag.constant_params.push_back(j);
        else if (diag.rhat[j] > 1.01)
            diag.flagged.push_back(j);
    }
    return diag;
}

FitResult fit_bdarma(const CompositionalSeries& series, const ModelSpec& spec,
                     const SamplerConfig& config) {
    const DesignMatrices designs = build_designs(spec, series.start_month(), series.length());
    PosteriorEvaluator eval(series, spec, designs);
    Rng init_rng(config.seed, 0);
    const auto inits = initialize_chains(spec, series, designs, config, init_rng);
    auto log_post = [eval](const Eigen::VectorXd& v) { return eval.log_posterior(v); };
    PosteriorDraws draws = run_sampler(log_post, inits, config);
    Diagnostics diag = compute_diagnostics(draws);
    return FitResult{spec, std::move(draws), std::move(diag)};
}

}  // namespace simplexcast
