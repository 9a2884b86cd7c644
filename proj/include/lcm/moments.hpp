#pragma once

#include <cstddef>
#include <vector>

#include "lcm/core.hpp"

namespace lcm {

/// Moments (m_1, ..., m_n). Mixed finite / INF entries are rejected.
class MomentVector {
 public:
  MomentVector() = default;
  MomentVector(std::vector<ExtReal> m);  // NOLINT
  MomentVector(std::vector<double> m);   // NOLINT
  MomentVector(std::initializer_list<double> m) : MomentVector(std::vector<double>(m)) {}

  std::size_t size() const { return m_.size(); }
  ExtReal operator[](std::size_t i) const { return m_[i]; }
  const std::vector<ExtReal>& values() const { return m_; }
  std::vector<double> as_doubles() const;
  bool all_zero() const;
  bool all_inf() const;
  MomentVector prefix(std::size_t n) const;

 private:
  std::vector<ExtReal> m_;
};

/// int_u^v t^p e^{-lam t} dt.
ExtReal power_exp_integral(double p, ExtReal lam, double u, ExtReal v);

/// int_u^v t^p e^{-lam (t-u)} dt, finite lam, v may be INF. Stays finite where the
/// unshifted value would underflow.
double shifted_power_exp_integral(double p, double lam, double u, double v);

ExtReal moment(const Profile& pr, double p);
ExtReal moment(const SimpleLogConcaveFn& f, double p);
ExtReal moment(const PotentialSpec& f, double p);

MomentVector moment_map(const AnyFn& f, const ExponentTuple& p, std::size_t n);
MomentVector moment_map(const AnyFn& f, const ExponentTuple& p);

/// Independent oracle: adaptive Gauss-Kronrod, no closed forms.
double moment_quadrature(const PotentialSpec& f, double p, double tol);

/// C_{p,q} with m_p^{1/(p+1)} <= C_{p,q} m_q^{1/(q+1)} on L.
double moment_ratio_bound(double p, double q);

}  // namespace lcm
