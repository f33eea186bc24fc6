#include "simplexcast/dirichlet.hpp"

#include <cmath>
#include <limits>

#include "simplexcast/errors.hpp"
#include "simplexcast/special_functions.hpp"

namespace simplexcast {

using special::digamma;
using special::log_gamma;

DirichletParams::DirichletParams(Composition mu, double phi)
    : mean(std::move(mu)), precision(phi) {
    if (!(std::isfinite(precision) && precision > 0.0))
        throw data_error("Dirichlet precision must be positive and finite");
    if (!mean.is_interior())
        throw data_error("Dirichlet mean must be interior (all phi*mu_c > 0)");
}

double dirichlet_log_density(const Composition& y, const DirichletParams& p) {
    if (y.size() != p.mean.size())
        throw data_error("dirichlet_log_density: dimension mismatch");
    if (!y.is_interior())
        throw data_error("zero component; see zero-handling policy");
    const double phi = p.precision;
    double result = log_gamma(phi);
    for (int c = 0; c < y.size(); ++c) {
        const double alpha = phi * p.mean[c];
        result -= log_gamma(alpha);
        result += (alpha - 1.0) * std::log(y[c]);
    }
    return result;
}

Composition dirichlet_sample(const DirichletParams& p, Rng& rng) {
    const int C = p.mean.size();
    Eigen::VectorXd g(C);
    for (int c = 0; c < C; ++c) {
        // Floor at the smallest normal double so closure stays interior
        // even when tiny shapes underflow.
        g[c] = std::max(rng.gamma(p.precision * p.mean[c]),
                        std::numeric_limits<double>::min());
    }
    return closure(g);
}

double dirichlet_component_variance(double mu_c, double phi) {
    if (!(mu_c > 0.0 && mu_c < 1.0))
        throw data_error("component mean must lie in (0,1)");
    if (!(phi > 0.0)) throw data_error("precision must be positive");
    return mu_c * (1.0 - mu_c) / (1.0 + phi);
}

Eigen::VectorXd expected_log_components(const DirichletParams& p) {
    const int C = p.mean.size();
    const double psi_phi = digamma(p.precision);
    Eigen::VectorXd out(C);
    for (int c = 0; c < C; ++c)
        out[c] = digamma(p.precision * p.mean[c]) - psi_phi;
    return out;
}

Eigen::VectorXd centered_ilr_residual(const Composition& y, const DirichletParams& p,
                                      const ContrastMatrix& V) {
    if (V.parts() != y.size() || y.size() != p.mean.size())
        throw data_error("centered_ilr_residual: dimension mismatch");
    return ilr(y, V) - V.matrix().transpose() * expected_log_components(p);
}

}  // namespace simplexcast
