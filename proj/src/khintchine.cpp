#include "lcm/khintchine.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lcm/errors.hpp"
#include "lcm/specfun.hpp"

namespace lcm {

namespace {

void check_p(double p, const char* who) {
  if (!(p > -1.0)) throw DomainError(std::string(who) + " needs p > -1");
  if (p == 0.0) throw DomainError(std::string(who) + " is undefined at p = 0");
}
void check_q(double q, const char* who) {
  if (!(q > 0.0)) throw DomainError(std::string(who) + " needs q > 0");
}

}  // namespace

double gamma_p(double p) {
  check_p(p, "gamma_p");
  return std::sqrt(2.0) * std::exp((ln_gamma((p + 1.0) / 2.0) - 0.5 * std::log(std::numbers::pi)) / p);
}

double beta_pqn(double p, double q, int n) {
  check_p(p, "beta_pqn");
  check_q(q, "beta_pqn");
  if (n < 1) throw DomainError("beta_pqn needs n >= 1");
  if (std::isinf(q)) return 1.0;
  return std::exp((ln_gamma(n / q + 1.0) - ln_gamma((n + p) / q + 1.0)) / p);
}

double y_moment(double p, double q) {
  check_p(p, "y_moment");
  check_q(q, "y_moment");
  if (std::isinf(q)) return std::exp(-std::log1p(p) / p);
  return std::exp((ln_gamma((p + 1.0) / q) - ln_gamma(1.0 / q)) / p);
}

double x_moment(double p, double q, int n) { return beta_pqn(p, q, n) * y_moment(p, q); }

KhintchineConstants constants_fixed_n(double p, double q, int n) {
  if (!(p >= 1.0)) throw DomainError("constants_fixed_n needs p >= 1");
  if (!(q >= 2.0)) throw DomainError("constants_fixed_n needs q in [2, inf]");
  if (n < 1) throw DomainError("constants_fixed_n needs n >= 1");
  KhintchineConstants k{p, q, n, 1.0, 1.0, true, true};
  if (p == 2.0) return k;
  const double edge = x_moment(p, q, n) / x_moment(2.0, q, n);
  const double gauss = beta_pqn(p, q, n) / beta_pqn(2.0, q, n) * gamma_p(p);
  if (p > 2.0) {
    k.A = edge;
    k.B = gauss;
    k.B_sharp = false;
  } else {
    k.A = gauss;
    k.B = edge;
    k.A_sharp = false;
  }
  return k;
}

KhintchineConstants constants_asymptotic(double p, double q) {
  if (!(p >= 1.0)) throw DomainError("constants_asymptotic needs p >= 1");
  if (!(q >= 2.0)) throw DomainError("constants_asymptotic needs q in [2, inf]");
  KhintchineConstants k{p, q, std::nullopt, 1.0, 1.0, true, true};
  if (p == 2.0) return k;
  const double uni = std::sqrt(3.0) * std::exp(-std::log1p(p) / p);
  const double g = gamma_p(p);
  if (p > 2.0) {
    k.A = uni;
    k.B = g;
  } else {
    k.A = g;
    k.B = uni;
  }
  return k;
}

double m_n_level(double q, int n) {
  check_q(q, "m_n_level");
  if (n < 1) throw DomainError("m_n_level needs n >= 1");
  if (std::isinf(q)) return INFINITY;
  const double nq = n / q;
  return std::exp(q / 2.0 *
                  (ln_gamma(1.0 / q) - ln_gamma(3.0 / q) + ln_gamma(nq + 1.0 + 2.0 / q) - ln_gamma(nq + 1.0)));
}

}  // namespace lcm
