#pragma once

namespace co3 {

/// Regularized lower incomplete gamma function P(a, x) = gamma(a, x) / Gamma(a).
/// Series expansion for x < a + 1, continued fraction otherwise.
/// Absolute accuracy better than 1e-12 over the parameter ranges used here.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma function Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

}  // namespace co3
