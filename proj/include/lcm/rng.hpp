#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace lcm {

/// Counter-based seed derivation: independent engine seeds for (seed, stream).
std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : eng_(splitmix64(seed, stream)) {}

  /// Uniform on (0, 1), never 0 or 1.
  double uniform() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53; }
  double normal();
  double exponential();
  /// Gamma(shape, 1).
  double gamma(double shape);
  double sign() { return (eng_() >> 63) ? -1.0 : 1.0; }

  /// Y with density proportional to exp(-|y|^q); q = INF gives uniform on [-1,1].
  double y_variate(double q);
  /// Uniform point of B_q^n.
  void ball_point(double q, std::vector<double>& x);

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lcm
