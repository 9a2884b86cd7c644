#include "lcm/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lcm/core.hpp"
#include "lcm/errors.hpp"

namespace lcm::quad {

namespace {

struct Piece {
  double a, b, value, error, l1;
  unsigned depth;
  bool operator<(const Piece& o) const { return error < o.error; }
};

}  // namespace

// Global adaptive bisection (largest error first). Boost supplies the fixed 31-point rule;
// its own recursive driver uses a per-interval relative tolerance that never terminates on
// noisy integrands.
QuadResult gk(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_tol,
              unsigned max_depth, bool strict) {
  QuadResult r{0.0, 0.0, 0.0};
  if (a == b) return r;
  if (b < a) {
    r = gk(f, b, a, rel_tol, abs_tol, max_depth, strict);
    r.value = -r.value;
    return r;
  }
  std::function<double(double)> g = f;
  double lo = a, hi = b;
  if (std::isinf(b)) {
    // x = a + t / (1 - t)
    g = [&f, a](double t) {
      if (t >= 1.0) return 0.0;
      const double s = 1.0 - t;
      return f(a + t / s) / (s * s);
    };
    lo = 0.0;
    hi = 1.0;
  }
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto rule = [&](double x0, double x1, unsigned depth) {
    Piece p{x0, x1, 0.0, 0.0, 0.0, depth};
    p.value = GK::integrate(g, x0, x1, 0, 0.0, &p.error, &p.l1);
    p.error *= 0.5 * (x1 - x0);  // boost leaves it on the [-1, 1] scale at depth 0
    return p;
  };
  constexpr std::size_t kMaxPieces = 4000;
  std::priority_queue<Piece> heap;
  heap.push(rule(lo, hi, 0));
  double value = heap.top().value, error = heap.top().error, l1 = heap.top().l1;
  std::vector<Piece> done;
  double unresolved = 0.0;
  while (!heap.empty() && error > std::max(abs_tol, rel_tol * l1) && heap.size() + done.size() < kMaxPieces) {
    Piece p = heap.top();
    heap.pop();
    if (p.depth >= max_depth) {
      done.push_back(p);
      continue;
    }
    if (!(p.b - p.a > 8.0 * std::max(std::abs(p.a), std::abs(p.b)) * 2.2e-16)) {
      // at floating-point resolution: the estimate cannot improve and is not held against the result
      unresolved += p.error;
      error -= p.error;
      p.error = 0.0;
      done.push_back(p);
      continue;
    }
    const double mid = 0.5 * (p.a + p.b);
    const Piece left = rule(p.a, mid, p.depth + 1), right = rule(mid, p.b, p.depth + 1);
    value += left.value + right.value - p.value;
    error += left.error + right.error - p.error;
    l1 += left.l1 + right.l1 - p.l1;
    heap.push(left);
    heap.push(right);
  }
  // resum to shed the drift of the running totals
  value = error = l1 = 0.0;
  for (; !heap.empty(); heap.pop()) done.push_back(heap.top());
  for (const Piece& p : done) {
    value += p.value;
    error += p.error;
    l1 += p.l1;
  }
  r = {value, error + unresolved, l1};
  if (!std::isfinite(r.value) || (strict && error > std::max(abs_tol, 4.0 * rel_tol * r.l1))) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "adaptive quadrature did not reach tolerance on [%.17g, %.17g], error estimate %.3g",
                  a, b, r.error);
    throw NonConvergence(msg);
  }
  return r;
}

double rough(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0);
}

}  // namespace lcm::quad
