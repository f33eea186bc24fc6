#pragma once

namespace simplexcast::special {

// Natural log of the gamma function for x > 0 (Lanczos approximation,
// ~1e-14 relative accuracy). Self-contained so concurrent chains never
// touch the C library's signgam global.
double log_gamma(double x);

// Digamma for x > 0: recurrence shifts the argument above 10, then the
// asymptotic Bernoulli series. Relative accuracy ~1e-13 or better.
double digamma(double x);

// Standard normal CDF and its inverse (Acklam's rational approximation
// polished with one Halley step).
double normal_cdf(double x);
double inverse_normal_cdf(double p);

// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
double incomplete_beta(double a, double b, double x);

// CDF of Student's t with df degrees of freedom.
double student_t_cdf(double t, double df);

// log N(x | mean, sd) with sd a standard deviation.
double log_normal_pdf(double x, double mean, double sd);

}  // namespace simplexcast::special
