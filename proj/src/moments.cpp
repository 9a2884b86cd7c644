#include "lcm/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lcm/quadrature.hpp"
#include "lcm/specfun.hpp"

namespace lcm {

// ---------------------------------------------------------------- MomentVector

MomentVector::MomentVector(std::vector<ExtReal> m) : m_(std::move(m)) {
  bool any_inf = false, any_fin = false;
  for (const auto& x : m_) (x.is_inf() ? any_inf : any_fin) = true;
  if (any_inf && any_fin)
    throw DomainError("moment vector mixes finite and INF entries; no member of L has that");
}

MomentVector::MomentVector(std::vector<double> m)
    : MomentVector(std::vector<ExtReal>(m.begin(), m.end())) {}

std::vector<double> MomentVector::as_doubles() const { return {m_.begin(), m_.end()}; }

bool MomentVector::all_zero() const {
  return std::all_of(m_.begin(), m_.end(), [](ExtReal x) { return x.is_zero(); });
}
bool MomentVector::all_inf() const {
  return !m_.empty() && std::all_of(m_.begin(), m_.end(), [](ExtReal x) { return x.is_inf(); });
}
MomentVector MomentVector::prefix(std::size_t n) const {
  if (n > m_.size()) throw DomainError("prefix longer than moment vector");
  return std::vector<ExtReal>(m_.begin(), m_.begin() + static_cast<long>(n));
}

// ---------------------------------------------------------------- segment kernel

double shifted_power_exp_integral(double p, double lam, double u, double v) {
  if (!(p > -1.0)) throw DomainError("power_exp_integral needs p > -1");
  if (!(u >= 0.0) || !(v >= u)) throw DomainError("power_exp_integral needs 0 <= u <= v");
  if (!(lam >= 0.0)) throw DomainError("power_exp_integral needs lam >= 0");
  if (v == u || std::isinf(lam)) return 0.0;
  const double s = p + 1.0;

  if (u > 0.0 && v <= 2.0 * u && lam * (v - u) <= 8.0) {
    // short segment: the two closed-form terms nearly cancel, integrate directly
    return quad::gauss25([&](double t) { return std::pow(t, p) * std::exp(-lam * (t - u)); }, u, v);
  }
  if (lam == 0.0) {
    if (std::isinf(v)) return INF;
    return (std::pow(v, s) - std::pow(u, s)) / s;
  }

  const double x = lam * u, y = lam * v;
  const double lu = u > 0.0 ? s * std::log(u) : -INF;
  auto lower_at = [&](double z, double logpow) {
    return std::exp(logpow) * detail::lower_series(s, z);
  };
  auto upper_at = [&](double z, double logpow) {
    return std::exp(logpow) * detail::upper_cf(s, z);
  };
  const bool x_small = x < s + 1.0;
  const bool y_small = !std::isinf(y) && y < s + 1.0;
  if (y_small) {
    // e^{x-y} v^s S(y) - u^s S(x)
    const double a = lower_at(y, x - y + s * std::log(v));
    const double b = u > 0.0 ? lower_at(x, lu) : 0.0;
    return a - b;
  }
  const double tail = std::isinf(v) ? 0.0 : upper_at(y, x - y + s * std::log(v));
  if (!x_small) return upper_at(x, lu) - tail;
  // mixed: lam^{-s} e^x Gamma(s) - u^s S(x) - e^{x-y} v^s C(y)
  const double full = std::exp(x + ln_gamma(s) - s * std::log(lam));
  const double b = u > 0.0 ? lower_at(x, lu) : 0.0;
  return full - b - tail;
}

ExtReal power_exp_integral(double p, ExtReal lam, double u, ExtReal v) {
  if (!(p > -1.0)) throw DomainError("power_exp_integral needs p > -1");
  if (!(u >= 0.0) || v < ExtReal(u)) throw DomainError("power_exp_integral needs 0 <= u <= v");
  if (lam.is_inf()) return 0.0;
  const double k = shifted_power_exp_integral(p, lam, u, v);
  if (std::isinf(k)) return ExtReal::inf();
  return std::exp(-lam.value() * u) * k;
}

// ---------------------------------------------------------------- moments

ExtReal moment(const Profile& pr, double p) {
  if (!(p > -1.0)) throw DomainError("moment needs p > -1, got " + std::to_string(p));
  double sum = 0.0;
  for (const Segment& sg : segments(pr)) {
    if (std::isinf(sg.hi) && sg.slope == 0.0) return ExtReal::inf();
    if (sg.log_f_lo < -745.0) continue;
    sum += std::exp(sg.log_f_lo) * shifted_power_exp_integral(p, sg.slope, sg.lo, sg.hi);
  }
  return sum;
}

ExtReal moment(const SimpleLogConcaveFn& f, double p) { return moment(f.profile(), p); }
ExtReal moment(const PotentialSpec& f, double p) { return moment(f.profile(), p); }

MomentVector moment_map(const AnyFn& f, const ExponentTuple& p, std::size_t n) {
  if (n > p.size()) throw DomainError("moment_map: n exceeds the exponent tuple");
  const Profile pr = profile_of(f);
  std::vector<ExtReal> m;
  m.reserve(n);
  for (std::size_t i = 0; i < n; ++i) m.push_back(moment(pr, p[i]));
  return m;
}

MomentVector moment_map(const AnyFn& f, const ExponentTuple& p) { return moment_map(f, p, p.size()); }

// ---------------------------------------------------------------- quadrature oracle

double moment_quadrature(const PotentialSpec& f, double p, double tol) {
  if (!(p > -1.0)) throw DomainError("moment_quadrature needs p > -1");
  if (!(tol > 0.0)) throw DomainError("moment_quadrature needs tol > 0");
  const Profile pr = f.profile();
  if (pr.is_constant_one()) throw DomainError("moment_quadrature needs a decaying function");
  if (pr.is_point_mass()) return 0.0;

  auto integrand = [&](double t) { return t == 0.0 && p < 0.0 ? 0.0 : std::pow(t, p) * eval(pr, t); };
  auto piece = [&](double a, double b) {
    if (a == 0.0 && p < 0.0) {
      const double e = 1.0 / (p + 1.0);
      auto g = [&](double s) { return eval(pr, std::pow(s, e)) * e; };
      return quad::gk(g, 0.0, std::pow(b, p + 1.0), tol, 1e-300).value;
    }
    if (a == 0.0 && p != std::floor(p)) {
      // t^p is not smooth at 0: halve towards it, then f ~ 1 on what is left
      double s = 0.0, x = b;
      for (int k = 0; k < 2000; ++k) {
        s += quad::gk(integrand, 0.5 * x, x, tol, std::max(1e-300, 1e-3 * tol * s)).value;
        x *= 0.5;
        const double rest = std::pow(x, p + 1.0) / (p + 1.0);
        if (rest <= 1e-17 * s) return s + rest * eval(pr, x);
      }
      throw NonConvergence("moment_quadrature did not resolve the origin");
    }
    return quad::gk(integrand, a, b, tol, 1e-300).value;
  };

  std::vector<double> br{0.0};
  for (double k : pr.knots)
    if (k > 0.0) br.push_back(k);
  double total = 0.0;
  const bool finite = pr.cutoff < INF;
  if (finite) br.push_back(pr.cutoff);
  for (std::size_t i = 0; i + 1 < br.size(); ++i) total += piece(br[i], br[i + 1]);
  if (finite) return total;

  // decaying tail on [T, inf): the last slope kappa > 0. Log-concavity gives
  // f(t) <= f(T)^{t/T}, so past the peak of t^p f the chunks shrink geometrically.
  double kappa = 0.0;
  for (double a : pr.incs) kappa += a;
  double T = br.back();
  const double w = (1.0 + std::abs(p)) / kappa;
  if (T == 0.0 && p < 0.0) {
    total += piece(0.0, w);
    T = w;
  }
  const double peak = std::max(0.0, p) / kappa;
  for (int chunk = 0; chunk < 100000; ++chunk) {
    const double I = piece(T, T + w);
    total += I;
    T += w;
    if (T > peak && I <= 1e-18 * total) return total;
  }
  throw NonConvergence("moment_quadrature tail did not terminate");
}

double moment_ratio_bound(double p, double q) {
  if (!(p > -1.0) || !(q > -1.0)) throw DomainError("moment_ratio_bound needs p, q > -1");
  const double t1 = std::exp(std::log(q + 1.0) / (q + 1.0) - std::log(p + 1.0) / (p + 1.0));
  const double t2 = std::exp(ln_gamma(p + 1.0) / (p + 1.0) - ln_gamma(q + 1.0) / (q + 1.0));
  return std::max(t1, t2);
}

}  // namespace lcm
