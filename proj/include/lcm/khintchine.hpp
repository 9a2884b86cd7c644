#pragma once

#include <optional>

namespace lcm {

/// Moment comparison constants for linear forms of X uniform on B_q^n:
/// A ||S||_2 <= ||S||_p <= B ||S||_2. n empty means the supremum over n.
struct KhintchineConstants {
  double p, q;
  std::optional<int> n;
  double A, B;
  bool A_sharp, B_sharp;
};

/// ||G||_p for a standard Gaussian G.
double gamma_p(double p);
/// ||X_1||_p / ||Y_1||_p, q may be INF.
double beta_pqn(double p, double q, int n);
/// ||Y||_p for density proportional to exp(-|x|^q); q = INF is uniform on [-1,1].
double y_moment(double p, double q);
/// ||X_1||_p for X uniform on B_q^n.
double x_moment(double p, double q, int n);

KhintchineConstants constants_fixed_n(double p, double q, int n);
KhintchineConstants constants_asymptotic(double p, double q);

/// 1 / E X_1^2 raised to q/2, equal to x_moment(2, q, n)^{-q}.
double m_n_level(double q, int n);

}  // namespace lcm
