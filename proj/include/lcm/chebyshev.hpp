#pragma once

#include <functional>
#include <vector>

#include "lcm/core.hpp"

namespace lcm {

/// Strictly increasing positive nodes.
class NodeVector {
 public:
  NodeVector(std::vector<double> t);  // NOLINT
  NodeVector(std::initializer_list<double> t) : NodeVector(std::vector<double>(t)) {}
  std::size_t size() const { return t_.size(); }
  double operator[](std::size_t i) const { return t_[i]; }
  const std::vector<double>& values() const { return t_; }

 private:
  std::vector<double> t_;
};

struct LogDet {
  int sign;       // -1, 0, +1
  double logabs;  // log |det|
  int precision;  // bits of the arithmetic that produced it (53, 166, 332)
};

/// det(t_i^{p_j}) for increasing p. Row scaling, column equilibration, pivoted LU;
/// falls back to 50- then 100-digit arithmetic when double keeps < 3 digits.
LogDet gen_vandermonde_logdet(const NodeVector& t, const std::vector<double>& p);
double gen_vandermonde_det(const NodeVector& t, const std::vector<double>& p);

struct SeparatorCoeffs {
  double p_target;
  std::vector<double> base;
  std::vector<double> coeffs;
  int max_coeff_sign;        // sign of the coefficient of the largest exponent (numeric)
  int max_coeff_sign_cramer; // the same sign from the determinant parity argument
  double operator()(double t) const;
};

/// h(t) = t^{p_target} + sum c_i t^{base_i} with h(nodes) = 0.
SeparatorCoeffs separator(const std::vector<double>& base_p, double p_target, const NodeVector& nodes);

struct SignScan {
  std::vector<double> crossings;
  std::vector<int> signs;  // sign on each of the crossings.size()+1 intervals
};

/// Sign changes of F on (0, hint_bound]. If cap >= 0 and more than cap crossings are
/// found, the scan is repeated once on a 4x finer grid. A zero band at the lower end of the grid
/// throws UnresolvedBand unless skip_end_bands is set.
SignScan scan_signs(const std::function<double(double)>& F, double hint_bound, double tol, int cap = -1,
                    bool skip_end_bands = false);
std::vector<double> sign_changes(const std::function<double(double)>& F, double hint_bound, double tol,
                                 int cap = -1, bool skip_end_bands = false);

enum class Parity { MaxIsPlus, MaxIsMinus };
Parity parity_rule(const ExponentTuple& p);

}  // namespace lcm
