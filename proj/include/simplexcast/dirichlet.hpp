#pragma once

#include <Eigen/Dense>

#include "simplexcast/composition.hpp"
#include "simplexcast/rng.hpp"

namespace simplexcast {

// Mean/precision parameterization: y ~ Dirichlet(phi * mu), so
// E[y] = mu and Var(y_c) = mu_c (1 - mu_c) / (1 + phi).
struct DirichletParams {
    Composition mean;
    double precision;

    DirichletParams(Composition mu, double phi);
};

double dirichlet_log_density(const Composition& y, const DirichletParams& p);

Composition dirichlet_sample(const DirichletParams& p, Rng& rng);

double dirichlet_component_variance(double mu_c, double phi);

// E[log y_c] = psi(phi mu_c) - psi(phi) for each component.
Eigen::VectorXd expected_log_components(const DirichletParams& p);

// ilr(y) minus the exact Dirichlet expectation of ilr(Y): the mean-zero
// innovation feeding the MA terms of the recursion.
Eigen::VectorXd centered_ilr_residual(const Composition& y, const DirichletParams& p,
                                      const ContrastMatrix& V);

}  // namespace simplexcast
