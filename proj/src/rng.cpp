#include "lcm/rng.hpp"

#include <cmath>

namespace lcm {

std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double Rng::exponential() { return -std::log(uniform()); }

double Rng::gamma(double shape) {
  if (shape < 1.0) {
    // G(a) = G(a+1) U^{1/a}
    const double g = gamma(shape + 1.0);
    return g * std::exp(std::log(uniform()) / shape);
  }
  const double d = shape - 1.0 / 3.0, c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::y_variate(double q) {
  if (std::isinf(q)) return 2.0 * uniform() - 1.0;
  const double w = gamma(1.0 / q);
  return sign() * std::pow(w, 1.0 / q);
}

void Rng::ball_point(double q, std::vector<double>& x) {
  if (std::isinf(q)) {
    for (double& xi : x) xi = 2.0 * uniform() - 1.0;
    return;
  }
  double s = 0.0;
  for (double& xi : x) {
    xi = y_variate(q);
    s += std::pow(std::abs(xi), q);
  }
  s += exponential();
  const double r = std::pow(s, -1.0 / q);
  for (double& xi : x) xi *= r;
}

}  // namespace lcm
