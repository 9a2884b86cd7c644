#pragma once

namespace lcm {

struct SpecFunResult {
  double value;
  double est_abs_err;
};

/// log Gamma(x), x > 0.
double ln_gamma(double x);
SpecFunResult ln_gamma_r(double x);

/// Regularized incomplete gamma P(s,x) and Q(s,x) = 1 - P(s,x).
double reg_lower_inc_gamma(double s, double x);
double reg_upper_inc_gamma(double s, double x);
SpecFunResult reg_lower_inc_gamma_r(double s, double x);

namespace detail {
/// sum_{k>=0} z^k / (s (s+1) ... (s+k)), so gamma(s,z) = z^s e^{-z} * series.
double lower_series(double s, double z, int* iters = nullptr);
/// Continued fraction with Gamma(s,z) = z^s e^{-z} * cf.
double upper_cf(double s, double z, int* iters = nullptr);
}  // namespace detail

}  // namespace lcm
