#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lcm/core.hpp"
#include "lcm/moments.hpp"

namespace lcm::testing {

using Engine = std::mt19937_64;

inline double uniform(Engine& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

/// f(t / s): knots times s, slopes over s.
inline SimpleLogConcaveFn dilate(const SimpleLogConcaveFn& f, double s) {
  std::vector<ExtReal> slopes, knots;
  for (ExtReal a : f.slopes()) slopes.push_back(a.is_inf() ? a : ExtReal(a.value() / s));
  for (ExtReal b : f.knots()) knots.push_back(b.is_inf() ? b : ExtReal(b.value() * s));
  return SimpleLogConcaveFn(f.cls(), slopes, knots);
}

/// Member of L_n^sign with every parameter strictly inside its range, dilated to unit mass.
/// d(f, g) is an absolute integral against t^{p_hi}; without a fixed scale a slowly decaying
/// member makes it large from rounding alone.
inline SimpleLogConcaveFn random_member(Engine& g, int order, Sign sign) {
  const SimpleClass cls{order, sign};
  const Layout L = layout(cls);
  std::vector<ExtReal> slopes, knots;
  for (int i = 0; i < L.n_slopes(); ++i) slopes.emplace_back(uniform(g, 0.3, 2.5));
  double b = 0.0;
  for (int i = 0; i < L.n_knots(); ++i) {
    b += uniform(g, 0.2, 1.2);
    knots.emplace_back(b);
  }
  const SimpleLogConcaveFn f(cls, slopes, knots);
  return dilate(f, 1.0 / moment(f, 0.0).value());
}

/// Distinct exponents in (lo, hi), pairwise at least `gap` apart, in random order.
inline std::vector<double> random_exponents(Engine& g, std::size_t n, double lo = -0.9, double hi = 8.0,
                                            double gap = 0.35) {
  std::vector<double> p;
  while (p.size() < n) {
    const double x = uniform(g, lo, hi);
    if (std::all_of(p.begin(), p.end(), [&](double y) { return std::abs(x - y) >= gap; })) p.push_back(x);
  }
  return p;
}

/// exp(-V) 1_{[0,cut]}, V convex with nondecreasing slopes.
inline PotentialSpec random_potential(Engine& g, int pieces, bool cutoff) {
  std::vector<PotentialSpec::Piece> ps;
  double slope = 0.0, knot = 0.0;
  for (int i = 0; i < pieces; ++i) {
    slope += uniform(g, i == 0 ? 0.2 : 0.05, 1.5);
    ps.push_back({slope, knot});
    knot += uniform(g, 0.1, 1.5);
  }
  return PotentialSpec(ps, cutoff ? ExtReal(knot + uniform(g, 0.1, 2.0)) : ExtReal::inf());
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double max_rel_err(const MomentVector& a, const MomentVector& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, rel_err(a[i].value(), b[i].value()));
  return e;
}

}  // namespace lcm::testing
