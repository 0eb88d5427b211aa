#pragma once

#include <cstdint>

namespace frsde::core {

/// Gamma function on the positive half line (Lanczos approximation,
/// relative error below 1e-12 on [0.1, 30]). Throws std::domain_error
/// for x <= 0.
double gamma_fn(double x);

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// Regularized incomplete beta function I_x(p, q) for p, q > 0 and
/// x in [0, 1], evaluated by the standard continued fraction.
double reg_inc_beta(double p, double q, double x);

/// Complete beta function B(p, q).
double beta_fn(double p, double q);

/// Standard normal CDF.
double normal_cdf(double x);

/// Binomial coefficient as a double (exact for small arguments,
/// lgamma-based otherwise).
double binomial(int n, int k);

} // namespace frsde::core
