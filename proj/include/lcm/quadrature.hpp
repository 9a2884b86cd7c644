#pragma once

#include <functional>

#include <boost/math/quadrature/gauss.hpp>

namespace lcm::quad {

/// Fixed 25-point Gauss-Legendre on [a, b].
template <class F>
double gauss25(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 25>::integrate(f, a, b);
}

struct QuadResult {
  double value;
  double error;
  double l1;
};

/// Adaptive Gauss-Kronrod (31 points, global bisection) on [a, b], b may be INF.
/// Throws NonConvergence when the error estimate stays above
/// max(abs_tol, rel_tol * L1) after max_depth bisection levels, unless strict is false.
QuadResult gk(const std::function<double(double)>& f, double a, double b, double rel_tol,
              double abs_tol = 0.0, unsigned max_depth = 60, bool strict = true);

/// Single 31-point rule, b may be INF: a magnitude estimate, never throws.
double rough(const std::function<double(double)>& f, double a, double b);

}  // namespace lcm::quad
