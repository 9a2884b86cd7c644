#include "lcm/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include <boost/math/special_functions/zeta.hpp>

#include "lcm/chebyshev.hpp"
#include "lcm/khintchine.hpp"
#include "lcm/moments.hpp"
#include "lcm/quadrature.hpp"
#include "lcm/rng.hpp"
#include "lcm/specfun.hpp"

namespace lcm {

namespace {

std::string fmt(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string fmt(const std::vector<double>& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + fmt(a[i]);
  return s + ")";
}

template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  for (auto& t : pool) t.join();
}

std::vector<double> unit(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  if (!(s > 0.0)) throw DomainError("coefficient vector must be nonzero");
  std::vector<double> u = a;
  for (double& x : u) x /= std::sqrt(s);
  return u;
}

int nonzero(const std::vector<double>& a) {
  return static_cast<int>(std::count_if(a.begin(), a.end(), [](double x) { return x != 0.0; }));
}

/// claim a_k <= b_k for every k (or a_k == b_k in equality mode)
struct Claim {
  double a, b, tol;
};

TestVerdict verdict(std::string name, const std::vector<Claim>& cs, bool equality, std::string detail) {
  TestVerdict v;
  v.name = std::move(name);
  v.detail = std::move(detail);
  if (equality) {
    double worst = 0.0, worst_shifted = INF;
    for (const Claim& c : cs) {
      worst = std::max(worst, std::abs(c.b - c.a) / c.tol);
      const double shifted = c.b + 1e-4 * std::max(std::abs(c.a), std::abs(c.b));
      worst_shifted = std::min(worst_shifted, std::abs(shifted - c.a) / c.tol);
    }
    v.margin = 3.0 - worst;
    v.control_rejected = 3.0 - worst_shifted < 0.0;
  } else {
    double m = INF, mr = INF;
    for (const Claim& c : cs) {
      m = std::min(m, (c.b - c.a) / c.tol);
      mr = std::min(mr, (c.a - c.b) / c.tol);
    }
    v.margin = m - 3.0;
    v.control_rejected = mr - 3.0 < 0.0;
  }
  v.pass = v.margin >= 0.0 && v.control_rejected;
  return v;
}

double c_q(double q) { return 0.5 / std::exp(ln_gamma(1.0 + 1.0 / q)); }

double overlap(double a0, double a1, double b0, double b1) { return std::max(0.0, std::min(a1, b1) - std::max(a0, b0)); }

}  // namespace

// ---------------------------------------------------------------- grid densities

double factor_radius(const Factor& f, double tail) {
  if (!(f.scale > 0.0)) throw DomainError("factor scale must be positive");
  const double L = -std::log(tail);
  if (f.potential) {
    const Profile pr = f.potential->profile();
    if (pr.is_point_mass()) throw DomainError("point-mass factor has no density");
    for (const Segment& s : segments(pr)) {
      const double v_lo = -s.log_f_lo;
      if (std::isinf(s.hi) && s.slope == 0.0) throw DomainError("factor density does not decay");
      const double v_hi = std::isinf(s.hi) ? INF : v_lo + s.slope * (s.hi - s.lo);
      if (v_hi >= L) return f.scale * (s.slope > 0.0 ? s.lo + (L - v_lo) / s.slope : s.hi);
    }
    return f.scale * pr.cutoff;
  }
  if (std::isinf(f.q)) return f.scale;
  if (!(f.q > 0.0)) throw DomainError("factor needs q > 0");
  return f.scale * std::pow(L, 1.0 / f.q);
}

GridDensity factor_density(const Factor& f, double h, double tail) {
  if (!(h > 0.0)) throw DomainError("grid step must be positive");
  const double R = factor_radius(f, tail);
  const auto m = static_cast<long>(std::ceil(R / h + 0.5)) + 1;
  if (m > 50'000'000) throw GridTooCoarse("grid would exceed 1e8 points");
  GridDensity d;
  d.step = h;
  d.origin = -static_cast<double>(m) * h;
  d.values.assign(static_cast<std::size_t>(2 * m + 1), 0.0);
  const double s = f.scale;
  if (f.potential) {
    const Profile pr = f.potential->profile();
    const double m0 = moment(pr, 0.0);
    const double norm = 1.0 / (2.0 * m0 * s);
    std::vector<double> br;
    for (double k : pr.knots) br.push_back(k * s);
    if (pr.cutoff < INF) br.push_back(pr.cutoff * s);
    auto dens = [&](double x) { return norm * eval(pr, std::abs(x) / s); };
    for (long k = 0; k <= m; ++k) {
      const double lo = (static_cast<double>(k) - 0.5) * h, hi = lo + h;
      double acc = 0.0;
      if (k == 0) {
        // symmetric cell: twice the right half
        std::vector<double> cut{0.0};
        for (double b : br)
          if (b > 0.0 && b < hi) cut.push_back(b);
        cut.push_back(hi);
        for (std::size_t i = 0; i + 1 < cut.size(); ++i) acc += 2.0 * quad::gauss25(dens, cut[i], cut[i + 1]);
      } else {
        std::vector<double> cut{lo};
        for (double b : br)
          if (b > lo && b < hi) cut.push_back(b);
        cut.push_back(hi);
        for (std::size_t i = 0; i + 1 < cut.size(); ++i) acc += quad::gauss25(dens, cut[i], cut[i + 1]);
      }
      d.values[static_cast<std::size_t>(m + k)] = d.values[static_cast<std::size_t>(m - k)] = acc / h;
    }
  } else if (std::isinf(f.q)) {
    for (long k = 0; k <= m; ++k) {
      const double lo = (static_cast<double>(k) - 0.5) * h;
      const double v = overlap(lo, lo + h, -s, s) / (2.0 * s * h);
      d.values[static_cast<std::size_t>(m + k)] = d.values[static_cast<std::size_t>(m - k)] = v;
    }
  } else {
    const double c = c_q(f.q) / s;
    for (long k = 0; k <= m; ++k) {
      const double x = static_cast<double>(k) * h / s;
      const double v = c * std::exp(-std::pow(x, f.q));
      d.values[static_cast<std::size_t>(m + k)] = d.values[static_cast<std::size_t>(m - k)] = v;
    }
  }
  double mass = 0.0;
  for (double v : d.values) mass += v;
  mass *= h;
  d.total_mass = mass;
  if (!(std::abs(mass - 1.0) <= 1e-6))
    throw GridTooCoarse("grid mass " + fmt(mass) + " drifts from 1; refine the step");
  for (double& v : d.values) v /= mass;
  return d;
}

GridDensity y_density(double q, double scale, double step) { return factor_density({q, scale, {}}, step); }

GridDensity y_density(double q, double scale, const GridSpec& g) {
  const Factor f{q, scale, {}};
  const double h = g.step > 0.0 ? g.step : 2.0 * factor_radius(f, g.tail) / g.min_points;
  return factor_density(f, h, g.tail);
}

GridDensity convolve(const GridDensity& a, const GridDensity& b) {
  if (std::abs(a.step - b.step) > 1e-12 * a.step) throw DomainError("convolve needs equal grid steps");
  const double h = a.step;
  GridDensity c;
  c.step = h;
  c.origin = a.origin + b.origin;
  c.values.assign(a.values.size() + b.values.size() - 1, 0.0);
  const std::size_t nb = b.values.size();
  const double* bv = b.values.data();
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double ai = a.values[i] * h;
    if (ai == 0.0) continue;
    double* ci = c.values.data() + i;
    for (std::size_t j = 0; j < nb; ++j) ci[j] += ai * bv[j];
  }
  double mass = 0.0;
  for (double v : c.values) mass += v;
  c.total_mass = mass * h;
  return c;
}

double abs_moment(const GridDensity& d, double p) {
  if (!(p > -1.0)) throw DomainError("abs_moment needs p > -1");
  const std::size_t c = d.centre();
  if (d.values.size() < 2 * c + 1 || c < 4) throw GridTooCoarse("density grid too short");
  const double h = d.step;
  double s = 0.0;
  for (std::size_t k = 1; c + k < d.values.size(); ++k) s += std::pow(static_cast<double>(k) * h, p) * d.values[c + k];
  s *= h;
  const double g0 = d.values[c], g1 = d.values[c + 1], g2 = d.values[c + 2], g3 = d.values[c + 3];
  const double d1 = (-3.0 * g0 + 4.0 * g1 - g2) / (2.0 * h);
  const double d2 = (2.0 * g0 - 5.0 * g1 + 4.0 * g2 - g3) / (h * h);
  namespace bm = boost::math;
  // offset trapezoid sum minus the zeta terms of the expansion at the singular endpoint
  const double corr = bm::zeta(-p) * std::pow(h, p + 1.0) * g0 + bm::zeta(-p - 1.0) * std::pow(h, p + 2.0) * d1 +
                      bm::zeta(-p - 2.0) * std::pow(h, p + 3.0) * d2 / 2.0;
  return 2.0 * (s - corr);
}

ConvolutionOracle::ConvolutionOracle(std::vector<Factor> factors, const GridSpec& g) : factors_(std::move(factors)) {
  if (factors_.empty()) throw DomainError("need at least one factor");
  closed_form_ = factors_.size() == 1 && !factors_[0].potential;
  double h = INF;
  for (const Factor& f : factors_) h = std::min(h, 2.0 * factor_radius(f, g.tail) / g.min_points);
  if (g.step > 0.0) {
    h = g.step;
  } else {
    // put density jumps on grid points when the jump positions are commensurate
    std::vector<double> jumps;
    for (const Factor& f : factors_) {
      if (f.potential) {
        const ExtReal c = f.potential->cutoff;
        if (!c.is_inf()) jumps.push_back(f.scale * c.value());
      } else if (std::isinf(f.q)) {
        jumps.push_back(f.scale);
      }
    }
    if (!jumps.empty()) {
      const double bmin = *std::min_element(jumps.begin(), jumps.end());
      for (int den = 1; den <= 200; ++den) {
        const double u = bmin / den;
        const bool ok = std::all_of(jumps.begin(), jumps.end(), [&](double b) {
          const double r = b / u;
          return std::abs(r - std::round(r)) <= 1e-9 * r;
        });
        if (ok) {
          h = u / std::ceil(u / h);
          break;
        }
      }
    }
  }
  step_ = h;
  if (closed_form_) return;
  for (int l = 0; l < 3; ++l) {
    const double hl = h / static_cast<double>(1 << l);
    GridDensity acc = factor_density(factors_[0], hl, g.tail);
    for (std::size_t i = 1; i < factors_.size(); ++i) acc = convolve(acc, factor_density(factors_[i], hl, g.tail));
    levels_[static_cast<std::size_t>(l)] = std::move(acc);
  }
}

MomentEstimate ConvolutionOracle::abs_moment(double p) const {
  if (p == 0.0) return {1.0, 0.0};
  if (closed_form_) {
    const Factor& f = factors_[0];
    return {std::pow(f.scale * y_moment(p, f.q), p), 0.0};
  }
  const double t0 = lcm::abs_moment(levels_[0], p), t1 = lcm::abs_moment(levels_[1], p),
               t2 = lcm::abs_moment(levels_[2], p);
  const double r1 = (4.0 * t1 - t0) / 3.0, r2 = (4.0 * t2 - t1) / 3.0;
  const double r3 = (16.0 * r2 - r1) / 15.0;
  return {r3, std::abs(r3 - r2) + 1e-12 * std::abs(r3)};
}

MomentEstimate ConvolutionOracle::norm(double p) const {
  if (p == 0.0) throw DomainError("the p = 0 norm is a log-moment, not supported");
  const MomentEstimate e = abs_moment(p);
  const double v = std::pow(e.value, 1.0 / p);
  return {v, v * e.error / (std::abs(p) * e.value)};
}

ConvolutionOracle linear_form_oracle(double q, const std::vector<double>& a, const GridSpec& g) {
  std::vector<Factor> fs;
  for (double x : a)
    if (x != 0.0) fs.push_back({q, std::abs(x), {}});
  if (fs.empty()) throw DomainError("linear form needs a nonzero coefficient");
  return ConvolutionOracle(std::move(fs), g);
}

MomentEstimate linear_form_moment_r(double q, const std::vector<double>& a, double p, const GridSpec& g) {
  return linear_form_oracle(q, a, g).norm(p);
}

double linear_form_moment(double q, const std::vector<double>& a, double p, const GridSpec& g) {
  return linear_form_moment_r(q, a, p, g).value;
}

// ---------------------------------------------------------------- inequality checks

TestVerdict check_edge(double q, const std::vector<double>& a, double p, const ConvolutionOracle* oracle) {
  if (!(p >= 1.0)) throw DomainError("check_edge needs p >= 1");
  if (!(q >= 2.0)) throw DomainError("check_edge needs q in [2, inf]");
  const std::vector<double> u = unit(a);
  std::optional<ConvolutionOracle> own;
  if (!oracle) oracle = &own.emplace(linear_form_oracle(q, u));
  const MomentEstimate s = oracle->norm(p);
  const double y = y_moment(p, q);
  const double tol = s.error + 1e-12 * y;
  const bool eq = q == 2.0 || p == 2.0 || nonzero(u) == 1;
  const Claim c = p >= 2.0 ? Claim{y, s.value, tol} : Claim{s.value, y, tol};
  return verdict("edge q=" + fmt(q) + " p=" + fmt(p) + " a=" + fmt(u), {c}, eq,
                 "||Y_1||_p=" + fmt(y) + " ||S||_p=" + fmt(s.value));
}

TestVerdict check_gauss_bound(double q, const std::vector<double>& a, double p, const ConvolutionOracle* oracle) {
  if (!(p >= 1.0)) throw DomainError("check_gauss_bound needs p >= 1");
  if (!(q >= 2.0)) throw DomainError("check_gauss_bound needs q in [2, inf]");
  double len = 0.0;
  for (double x : a) len += x * x;
  len = std::sqrt(len);
  std::optional<ConvolutionOracle> own;
  if (!oracle) oracle = &own.emplace(linear_form_oracle(q, a));
  const MomentEstimate s = oracle->norm(p);
  const double rhs = gamma_p(p) * len * y_moment(2.0, q);
  const double tol = s.error + 1e-12 * rhs;
  const bool eq = q == 2.0 || p == 2.0;
  const Claim c = p >= 2.0 ? Claim{s.value, rhs, tol} : Claim{rhs, s.value, tol};
  return verdict("gauss q=" + fmt(q) + " p=" + fmt(p) + " a=" + fmt(a), {c}, eq,
                 "||S||_p=" + fmt(s.value) + " gamma_p||S||_2=" + fmt(rhs));
}

TestVerdict check_monotone_psi(const std::vector<double>& q_grid, const std::vector<double>& a, double p, int which,
                               const std::vector<const ConvolutionOracle*>& oracles) {
  if (which != 1 && which != 2) throw DomainError("psi index must be 1 or 2");
  if (!(p >= 1.0)) throw DomainError("check_monotone_psi needs p >= 1");
  if (q_grid.size() < 2) throw DomainError("need at least two q values");
  for (std::size_t i = 1; i < q_grid.size(); ++i)
    if (!(q_grid[i] > q_grid[i - 1])) throw DomainError("q grid must be increasing");
  if (!oracles.empty() && oracles.size() != q_grid.size()) throw DomainError("one oracle per q value");
  const double w = which == 1 ? p : 2.0;
  std::vector<double> psi, err;
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    std::optional<ConvolutionOracle> own;
    const ConvolutionOracle* o = oracles.empty() ? &own.emplace(linear_form_oracle(q_grid[i], a)) : oracles[i];
    const MomentEstimate e = o->abs_moment(p);
    const double norm = std::pow(y_moment(w, q_grid[i]), p);
    psi.push_back(e.value / norm);
    err.push_back(e.error / norm + 1e-13 * e.value / norm);
  }
  // psi_1 rises with q for p >= 2, psi_2 falls; both flip on [1, 2]
  const bool up = (which == 1) == (p >= 2.0);
  const bool eq = p == 2.0 || (which == 1 && nonzero(a) == 1);
  std::vector<Claim> cs;
  for (std::size_t i = 0; i + 1 < psi.size(); ++i) {
    const double tol = err[i] + err[i + 1];
    cs.push_back(up ? Claim{psi[i], psi[i + 1], tol} : Claim{psi[i + 1], psi[i], tol});
  }
  std::string det = "psi=";
  for (double x : psi) det += fmt(x) + " ";
  return verdict("psi" + std::to_string(which) + " p=" + fmt(p) + " a=" + fmt(a), cs, eq, det);
}

double h1(double p, double x) {
  const double y = std::pow(x, 1.0 / p);
  return std::pow(std::abs(y + 1.0), p) + std::pow(std::abs(y - 1.0), p);
}

double h2(double p, double x) {
  auto F = [p](double u) { return std::copysign(std::pow(std::abs(u), p + 1.0), u) / (p + 1.0); };
  const double r = std::sqrt(x);
  return F(r + 1.0) - F(r - 1.0);
}

namespace {

// sign of second divided differences on a grid; sgn = 0 claims affinity
TestVerdict curvature_verdict(std::string name, const std::vector<double>& x, const std::vector<double>& f,
                              const std::vector<double>& ferr, int sgn) {
  std::vector<double> d2, tol;
  for (std::size_t k = 1; k + 1 < x.size(); ++k) {
    const double dp = x[k + 1] - x[k], dm = x[k] - x[k - 1];
    const double s = 2.0 / (dp + dm);
    d2.push_back(s * ((f[k + 1] - f[k]) / dp - (f[k] - f[k - 1]) / dm));
    tol.push_back(2.0 * s * ((ferr[k + 1] + ferr[k]) / dp + (ferr[k] + ferr[k - 1]) / dm) + 1e-300);
  }
  TestVerdict v;
  v.name = std::move(name);
  auto score = [&](int sg) {
    double lo = INF, hi = -INF;
    for (std::size_t k = 0; k < d2.size(); ++k) {
      lo = std::min(lo, sg * d2[k] / tol[k]);
      hi = std::max(hi, sg * d2[k] / tol[k]);
    }
    // no violation anywhere, and curvature visible somewhere
    return std::min(lo + 3.0, hi - 3.0);
  };
  if (sgn == 0) {
    double worst = 0.0, worst_pert = INF;
    for (std::size_t k = 0; k < d2.size(); ++k) {
      worst = std::max(worst, std::abs(d2[k]) / tol[k]);
      // adding 1e-4 * x^2 must be detected
      worst_pert = std::min(worst_pert, std::abs(d2[k] + 2e-4) / tol[k]);
    }
    v.margin = 3.0 - worst;
    v.control_rejected = 3.0 - worst_pert < 0.0;
  } else {
    v.margin = score(sgn);
    v.control_rejected = score(-sgn) < 0.0;
  }
  v.pass = v.margin >= 0.0 && v.control_rejected;
  double mn = INF, mx = -INF;
  for (double d : d2) {
    mn = std::min(mn, d);
    mx = std::max(mx, d);
  }
  v.detail = "second differences in [" + fmt(mn) + ", " + fmt(mx) + "]";
  return v;
}

}  // namespace

TestVerdict check_h_convexity(double p, int which) {
  if (which != 1 && which != 2) throw DomainError("h index must be 1 or 2");
  if (!(p >= 1.0)) throw DomainError("check_h_convexity needs p >= 1");
  constexpr double eps = 2.220446049250313e-16;
  std::vector<double> x, f, e;
  for (int k = 0; k <= 160; ++k) {
    const double xi = std::pow(10.0, -2.0 + 4.0 * k / 160.0);
    x.push_back(xi);
    if (which == 1) {
      const double v = h1(p, xi);
      f.push_back(v);
      e.push_back(8.0 * (1.0 + p) * eps * v);
    } else {
      const double r = std::sqrt(xi);
      f.push_back(h2(p, xi));
      e.push_back(8.0 * (1.0 + p) * eps * (std::pow(r + 1.0, p + 1.0) + std::pow(std::abs(r - 1.0), p + 1.0)) /
                  (p + 1.0));
    }
  }
  // h_1 convex on [1,2], concave beyond; h_2 the other way round
  int sgn = p == 2.0 ? 0 : ((p < 2.0) == (which == 1) ? 1 : -1);
  return curvature_verdict("h" + std::to_string(which) + " p=" + fmt(p), x, f, e, sgn);
}

TestVerdict check_phi_criterion(const PhiSpec& phi, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("check_phi_criterion needs a, b > 0");
  if (phi.third_derivative_sign < -1 || phi.third_derivative_sign > 1) throw DomainError("sign must be -1, 0 or 1");
  std::vector<double> x, f, e;
  for (int k = 0; k <= 40; ++k) {
    const double xi = 0.1 * k, r = std::sqrt(xi);
    double inner_err = 0.0;
    auto outer = [&](double v) {
      const quad::QuadResult in = quad::gk([&](double u) { return phi.phi(u + r * v); }, -a, a, 1e-12, 1e-300);
      inner_err = std::max(inner_err, in.error);
      return in.value;
    };
    const quad::QuadResult out = quad::gk(outer, -b, b, 1e-11, 1e-300);
    x.push_back(xi);
    f.push_back(out.value);
    e.push_back(out.error + 2.0 * b * inner_err + 1e-14 * out.l1);
  }
  return curvature_verdict("phi " + phi.name + " a=" + fmt(a) + " b=" + fmt(b), x, f, e, phi.third_derivative_sign);
}

MomentEstimate schur_moment(double lam, double p, const std::optional<PotentialSpec>& v) {
  if (!(lam > 0.0) || !(lam < 1.0)) throw DomainError("schur_moment needs lam in (0, 1)");
  std::vector<Factor> fs{{INF, std::sqrt(lam), {}}, {INF, std::sqrt(1.0 - lam), {}}};
  if (v && !v->profile().is_point_mass()) fs.push_back({INF, 1.0, *v});
  return ConvolutionOracle(std::move(fs)).abs_moment(p);
}

TestVerdict check_schur_step(double lam, double lam2, double p, const std::optional<PotentialSpec>& v) {
  if (!(lam > 0.0) || !(lam <= lam2) || !(lam2 <= 0.5)) throw DomainError("check_schur_step needs 0 < lam <= lam' <= 1/2");
  if (!(p >= 1.0)) throw DomainError("check_schur_step needs p >= 1");
  const MomentEstimate e1 = schur_moment(lam, p, v);
  const MomentEstimate e2 = lam2 == lam ? e1 : schur_moment(lam2, p, v);
  const double tol = e1.error + e2.error + 1e-12 * std::max(e1.value, e2.value);
  const bool eq = lam == lam2 || p == 2.0;
  const Claim c = p >= 2.0 ? Claim{e1.value, e2.value, tol} : Claim{e2.value, e1.value, tol};
  return verdict("schur lam=" + fmt(lam) + " lam'=" + fmt(lam2) + " p=" + fmt(p) + (v ? " with V" : ""), {c}, eq,
                 "E|X_lam+V|^p=" + fmt(e1.value) + " E|X_lam'+V|^p=" + fmt(e2.value));
}

// ---------------------------------------------------------------- Monte Carlo

namespace {

struct Acc {
  double n = 0.0, mean = 0.0, m2 = 0.0;
  void add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  void merge(const Acc& o) {
    if (o.n == 0.0) return;
    const double tot = n + o.n, d = o.mean - mean;
    mean += d * o.n / tot;
    m2 += o.m2 + d * d * n * o.n / tot;
    n = tot;
  }
};

std::uint64_t chunk_size(std::uint64_t count, int c) {
  return count / kMcChunks + (static_cast<std::uint64_t>(c) < count % kMcChunks ? 1 : 0);
}

template <class Draw>
McEstimate run_mc(std::uint64_t count, std::uint64_t seed, std::uint64_t stream0, unsigned workers, Draw&& draw) {
  if (count < 2) throw DomainError("Monte Carlo needs at least two samples");
  std::vector<Acc> acc(kMcChunks);
  parallel_for(kMcChunks, workers, [&](std::size_t c) {
    Rng rng(seed, stream0 + c);
    const std::uint64_t m = chunk_size(count, static_cast<int>(c));
    for (std::uint64_t i = 0; i < m; ++i) acc[c].add(draw(rng));
  });
  Acc tot;
  for (const Acc& a : acc) tot.merge(a);
  return {tot.mean, std::sqrt(tot.m2 / (tot.n - 1.0) / tot.n), count, seed};
}

constexpr std::uint64_t kXStream = 0, kYStream = 1000;

}  // namespace

std::vector<double> mc_ball_sample(double q, int n, std::uint64_t count, std::uint64_t seed) {
  if (n < 1) throw DomainError("mc_ball_sample needs n >= 1");
  if (!(q > 0.0)) throw DomainError("mc_ball_sample needs q > 0");
  std::vector<double> out;
  out.reserve(count * static_cast<std::uint64_t>(n));
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int c = 0; c < kMcChunks; ++c) {
    Rng rng(seed, kXStream + static_cast<std::uint64_t>(c));
    const std::uint64_t m = chunk_size(count, c);
    for (std::uint64_t i = 0; i < m; ++i) {
      rng.ball_point(q, x);
      out.insert(out.end(), x.begin(), x.end());
    }
  }
  return out;
}

McEstimate mc_x_moment(double q, const std::vector<double>& a, double p, std::uint64_t count, std::uint64_t seed,
                       unsigned workers) {
  if (a.empty()) throw DomainError("mc_x_moment needs coefficients");
  if (!(q > 0.0) || !(p > -1.0)) throw DomainError("mc_x_moment needs q > 0 and p > -1");
  return run_mc(count, seed, kXStream, workers, [&](Rng& rng) {
    thread_local std::vector<double> x;  // workers share the draw
    x.resize(a.size());
    rng.ball_point(q, x);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
    return std::pow(std::abs(s), p);
  });
}

McEstimate mc_y_moment(double q, const std::vector<double>& a, double p, std::uint64_t count, std::uint64_t seed,
                       unsigned workers) {
  if (a.empty()) throw DomainError("mc_y_moment needs coefficients");
  if (!(q > 0.0) || !(p > -1.0)) throw DomainError("mc_y_moment needs q > 0 and p > -1");
  return run_mc(count, seed, kYStream, workers, [&](Rng& rng) {
    double s = 0.0;
    for (double ai : a) s += ai * rng.y_variate(q);
    return std::pow(std::abs(s), p);
  });
}

TestVerdict mc_identity_check(double p, double q, int n, const std::vector<double>& a, std::uint64_t count,
                              std::uint64_t seed, unsigned workers) {
  if (static_cast<int>(a.size()) != n) throw DomainError("mc_identity_check needs n coefficients");
  const McEstimate ex = mc_x_moment(q, a, p, count, seed, workers);
  const McEstimate ey = mc_y_moment(q, a, p, count, seed, workers);
  const double b = std::pow(beta_pqn(p, q, n), p);
  const double sigma = std::hypot(ex.std_err, b * ey.std_err);
  TestVerdict v = verdict("mc_identity q=" + fmt(q) + " n=" + std::to_string(n) + " p=" + fmt(p) + " a=" + fmt(a),
                          {{ex.mean, b * ey.mean, sigma}}, true,
                          "E|S_X|^p=" + fmt(ex.mean) + " beta^p E|S_Y|^p=" + fmt(b * ey.mean) + " sigma=" +
                              fmt(sigma));
  // a 5% error in the scaling must show up
  v.control_rejected = std::abs(ex.mean - 1.05 * b * ey.mean) > 3.0 * std::hypot(ex.std_err, 1.05 * b * ey.std_err);
  v.pass = v.margin >= 0.0 && v.control_rejected;
  return v;
}

TestVerdict check_conv_vs_mc(double q, const std::vector<double>& a, double p, std::uint64_t count,
                             std::uint64_t seed, unsigned workers) {
  const MomentEstimate c = linear_form_oracle(q, a).abs_moment(p);
  const McEstimate m = mc_y_moment(q, a, p, count, seed, workers);
  const double sigma = std::hypot(m.std_err, c.error);
  TestVerdict v = verdict("conv_mc q=" + fmt(q) + " p=" + fmt(p) + " a=" + fmt(a), {{m.mean, c.value, sigma}}, true,
                          "conv=" + fmt(c.value) + " mc=" + fmt(m.mean) + " se=" + fmt(m.std_err));
  v.control_rejected = std::abs(m.mean - 1.05 * c.value) > 3.0 * sigma;
  v.pass = v.margin >= 0.0 && v.control_rejected;
  return v;
}

TestVerdict check_uniform_small_p(double p, const std::vector<double>& a, std::uint64_t seed,
                                  std::uint64_t mc_samples) {
  if (!(p > -1.0) || !(p <= 2.0) || p == 0.0) throw DomainError("check_uniform_small_p needs p in (-1, 2], p != 0");
  const std::vector<double> u = unit(a);
  const ConvolutionOracle o = linear_form_oracle(INF, u);
  const MomentEstimate s = o.norm(p);
  const double y = y_moment(p, INF);
  const bool eq = p == 2.0 || nonzero(u) == 1;
  TestVerdict v = verdict("small_p p=" + fmt(p) + " a=" + fmt(u), {{s.value, y, s.error + 1e-12 * y}}, eq,
                          "||S||_p=" + fmt(s.value) + " ||U||_p=" + fmt(y));
  if (mc_samples > 0) {
    const MomentEstimate e = o.abs_moment(p);
    const McEstimate m = mc_y_moment(INF, u, p, mc_samples, seed);
    const double sigma = std::hypot(m.std_err, e.error);
    const double mc_margin = 3.0 - std::abs(m.mean - e.value) / sigma;
    v.detail += " mc=" + fmt(m.mean) + " (" + fmt(mc_margin) + " sigma to spare)";
    if (mc_margin < 0.0) {
      v.pass = false;
      v.margin = std::min(v.margin, mc_margin);
    }
  }
  return v;
}

// ---------------------------------------------------------------- interlacing

double normalized_density(double s, double p, double x) {
  const double ny = y_moment(p, s);
  const double y = std::abs(x * ny);
  if (std::isinf(s)) return ny * (y < 1.0 ? 0.5 : (y == 1.0 ? 0.25 : 0.0));
  return ny * c_q(s) * std::exp(-std::pow(y, s));
}

TestVerdict check_density_interlace(double q, double r, double p) {
  if (!(q > 0.0) || !(r >= q)) throw DomainError("check_density_interlace needs 0 < q <= r");
  if (!(p > 0.0)) throw DomainError("check_density_interlace needs p > 0");
  auto reach = [p](double s) {
    return std::isinf(s) ? 1.0 / y_moment(p, s) : std::pow(std::log(1e8), 1.0 / s) / y_moment(p, s);
  };
  const double bound = std::max(reach(q), reach(r));
  auto F = [&](double x) { return normalized_density(q, p, x) - normalized_density(r, p, x); };
  const SignScan sc = scan_signs(F, bound, 1e-12);
  const std::size_t expected = q < r ? 2 : 0;
  TestVerdict v;
  v.name = "interlace q=" + fmt(q) + " r=" + fmt(r) + " p=" + fmt(p);
  v.pass = sc.crossings.size() == expected;
  v.margin = v.pass ? 1.0 : -1.0;
  std::string pat;
  for (int sg : sc.signs) pat += sg > 0 ? '+' : (sg < 0 ? '-' : '0');
  const bool reversed = sc.signs == std::vector<int>{-1, 1, -1};
  v.control_rejected = !reversed && !(expected == 0 && sc.crossings.size() == 2);
  v.pass = v.pass && v.control_rejected;
  v.detail = std::to_string(sc.crossings.size()) + " crossings, pattern " + pat;
  for (double c : sc.crossings) v.detail += " " + fmt(c);
  return v;
}

// ---------------------------------------------------------------- suite

const std::vector<double>& default_q_grid() {
  static const std::vector<double> g{2.0, 2.5, 3.0, 4.0, 6.0, INF};
  return g;
}
const std::vector<double>& default_p_grid() {
  static const std::vector<double> g{1.0, 1.5, 3.0, 4.0};
  return g;
}
const std::vector<std::vector<double>>& default_vectors() {
  static const std::vector<std::vector<double>> v{
      {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2},
      {0.6, 0.8},
      {std::numbers::inv_sqrt3, std::numbers::inv_sqrt3, std::numbers::inv_sqrt3},
      {0.5, 0.5, 0.5, 0.5},
      {0.8, 0.48, 0.36}};
  return v;
}

std::vector<std::string> check_names() {
  return {"edge", "gauss", "psi1", "psi2", "h1", "h2", "phi", "schur", "small_p", "interlace", "mc_identity", "conv_mc"};
}

namespace {

struct OracleTable {
  std::vector<std::optional<ConvolutionOracle>> o;  // [vector][q]
  const ConvolutionOracle* at(std::size_t ai, std::size_t qi) const {
    return &*o[ai * default_q_grid().size() + qi];
  }
};

OracleTable build_oracles(unsigned workers) {
  const auto& vs = default_vectors();
  const auto& qs = default_q_grid();
  OracleTable t;
  t.o.resize(vs.size() * qs.size());
  parallel_for(t.o.size(), workers,
               [&](std::size_t i) { t.o[i].emplace(linear_form_oracle(qs[i % qs.size()], vs[i / qs.size()])); });
  return t;
}

std::vector<TestVerdict> run_check_with(const std::string& name, const SuiteOptions& opt, const OracleTable* shared) {
  const auto& qs = default_q_grid();
  const auto& ps = default_p_grid();
  const auto& vs = default_vectors();
  std::vector<TestVerdict> out;

  if (name == "edge" || name == "gauss" || name == "psi1" || name == "psi2") {
    std::optional<OracleTable> own;
    const OracleTable& t = shared ? *shared : own.emplace(build_oracles(opt.workers));
    for (std::size_t ai = 0; ai < vs.size(); ++ai)
      for (double p : ps) {
        if (name == "psi1" || name == "psi2") {
          std::vector<const ConvolutionOracle*> os;
          for (std::size_t qi = 0; qi < qs.size(); ++qi) os.push_back(t.at(ai, qi));
          out.push_back(check_monotone_psi(qs, vs[ai], p, name == "psi1" ? 1 : 2, os));
          continue;
        }
        for (std::size_t qi = 0; qi < qs.size(); ++qi)
          out.push_back(name == "edge" ? check_edge(qs[qi], vs[ai], p, t.at(ai, qi))
                                       : check_gauss_bound(qs[qi], vs[ai], p, t.at(ai, qi)));
      }
    return out;
  }
  if (name == "h1" || name == "h2") {
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0}) out.push_back(check_h_convexity(p, name == "h1" ? 1 : 2));
    return out;
  }
  if (name == "phi") {
    const std::vector<PhiSpec> specs{
        {[](double x) { return std::pow(x, 4); }, 1, "x^4"},
        {[](double x) { return -std::pow(x, 4); }, -1, "-x^4"},
        {[](double x) { return x * x; }, 0, "x^2"},
        {[](double x) { return std::pow(std::abs(x), 3); }, 1, "|x|^3"},
        {[](double x) { return std::cosh(x); }, 1, "cosh"}};
    for (const PhiSpec& s : specs)
      for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}}) out.push_back(check_phi_criterion(s, a, b));
    return out;
  }
  if (name == "schur") {
    const PotentialSpec laplace({{4.0, 0.0}}, ExtReal::inf());
    const PotentialSpec bent({{1.0, 0.0}, {3.0, 0.5}}, 2.0);
    const PotentialSpec box({}, 1.0);
    const std::vector<std::tuple<double, double, double, std::optional<PotentialSpec>>> cases{
        {0.1, 0.5, 4.0, {}},  {0.1, 0.5, 1.5, {}},     {0.1, 0.5, 3.0, {}},  {0.2, 0.3, 4.0, {}},
        {0.3, 0.3, 4.0, {}},  {0.1, 0.5, 2.0, {}},     {0.1, 0.4, 3.0, laplace},
        {0.1, 0.4, 1.5, bent}, {0.1, 0.5, 4.0, box}};
    std::vector<TestVerdict> r(cases.size());
    parallel_for(cases.size(), opt.workers, [&](std::size_t i) {
      const auto& [l1, l2, p, v] = cases[i];
      r[i] = check_schur_step(l1, l2, p, v);
    });
    return r;
  }
  if (name == "small_p") {
    const std::vector<std::vector<double>> as{vs[0], vs[1], vs[3]};
    for (std::size_t ai = 0; ai < as.size(); ++ai)
      for (double p : {-0.5, 0.5, 1.0, 1.5, 2.0})
        out.push_back(check_uniform_small_p(p, as[ai], opt.seed + 7 * ai, opt.mc_samples));
    return out;
  }
  if (name == "interlace") {
    for (auto [q, r] : {std::pair{2.0, 3.0}, std::pair{2.0, 4.0}, std::pair{3.0, 6.0}, std::pair{2.0, INF},
                        std::pair{3.0, 3.0}})
      for (double p : {1.0, 2.0}) out.push_back(check_density_interlace(q, r, p));
    return out;
  }
  if (name == "mc_identity") {
    for (double q : {3.0, 4.0})
      for (int n : {2, 3})
        for (double p : {1.0, 3.0}) {
          const std::vector<double>& a = n == 2 ? vs[1] : vs[4];
          out.push_back(mc_identity_check(p, q, n, a, opt.mc_samples, opt.seed, opt.workers));
        }
    out.push_back(mc_identity_check(2.0, 3.0, 1, {1.0}, opt.mc_samples, opt.seed, opt.workers));
    return out;
  }
  if (name == "conv_mc") {
    Rng rng(opt.seed, 5000);
    for (int k = 0; k < 6; ++k) {
      const double q = std::vector<double>{2.5, 3.0, 4.0, 6.0, INF, 2.0}[static_cast<std::size_t>(k)];
      const int n = 2 + k % 2;
      std::vector<double> a(static_cast<std::size_t>(n));
      for (double& x : a) x = 0.2 + 0.8 * rng.uniform();
      const double p = 0.5 + 3.5 * rng.uniform();
      out.push_back(check_conv_vs_mc(q, unit(a), p, opt.mc_samples, opt.seed + static_cast<std::uint64_t>(k),
                                     opt.workers));
    }
    return out;
  }
  throw DomainError("unknown check '" + name + "'");
}

}  // namespace

std::vector<TestVerdict> run_check(const std::string& name, const SuiteOptions& opt) {
  return run_check_with(name, opt, nullptr);
}

std::vector<TestVerdict> run_suite(const SuiteOptions& opt) {
  const OracleTable t = build_oracles(opt.workers);
  std::vector<TestVerdict> all;
  for (const std::string& n : check_names()) {
    std::vector<TestVerdict> v = run_check_with(n, opt, &t);
    all.insert(all.end(), v.begin(), v.end());
  }
  return all;
}

}  // namespace lcm
