#include "lcm/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace lcm {

namespace mp = boost::multiprecision;

NodeVector::NodeVector(std::vector<double> t) : t_(std::move(t)) {
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!(t_[i] > 0.0) || !std::isfinite(t_[i])) throw DomainError("nodes must be finite and positive");
    if (i > 0 && !(t_[i] > t_[i - 1])) throw DomainError("nodes must be strictly increasing");
  }
}

namespace {

template <class T>
using Mat = std::vector<std::vector<T>>;

template <class T>
struct Lu {
  Mat<T> a;
  std::vector<std::size_t> perm;
  int sign = 1;
  T logabs = 0;
  double digits = 0.0;
};

template <class T>
Lu<T> lu_factor(Mat<T> a) {
  using std::abs;
  using std::log;
  const std::size_t n = a.size();
  Lu<T> r;
  r.perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (abs(a[i][k]) > abs(a[piv][k])) piv = i;
    if (a[piv][k] == 0) {
      r.sign = 0;
      r.a = std::move(a);
      return r;
    }
    if (piv != k) {
      std::swap(a[piv], a[k]);
      std::swap(r.perm[piv], r.perm[k]);
      r.sign = -r.sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const T f = a[i][k] / a[k][k];
      a[i][k] = f;
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  T maxu = 0, minpiv = abs(a[0][0]);
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] < 0) r.sign = -r.sign;
    r.logabs += log(abs(a[k][k]));
    minpiv = std::min<T>(minpiv, abs(a[k][k]));
    for (std::size_t j = k; j < n; ++j) maxu = std::max<T>(maxu, abs(a[k][j]));
  }
  const double eps = static_cast<double>(std::numeric_limits<T>::epsilon());
  const double cond = static_cast<double>(n) * static_cast<double>(maxu / minpiv);
  r.digits = -std::log10(eps * cond);
  r.a = std::move(a);
  return r;
}

template <class T>
std::vector<T> lu_solve(const Lu<T>& lu, const std::vector<T>& b) {
  const std::size_t n = b.size();
  std::vector<T> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    T s = b[lu.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu.a[i][j] * y[j];
    y[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    T s = y[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu.a[i][j] * y[j];
    y[i] = s / lu.a[i][i];
  }
  return y;
}

template <class T>
bool vandermonde_attempt(const NodeVector& t, const std::vector<double>& p, LogDet& out, int bits) {
  using std::abs;
  using std::exp;
  using std::log;
  const std::size_t k = p.size();
  Mat<T> a(k, std::vector<T>(k));
  std::vector<T> lt(k);
  for (std::size_t i = 0; i < k; ++i) lt[i] = log(T(t[i]));
  T logscale = 0;
  for (std::size_t i = 0; i < k; ++i) {
    logscale += T(p[0]) * lt[i];
    for (std::size_t j = 0; j < k; ++j) a[i][j] = exp((T(p[j]) - T(p[0])) * lt[i]);
  }
  for (std::size_t j = 0; j < k; ++j) {
    T cmax = 0;
    for (std::size_t i = 0; i < k; ++i) cmax = std::max<T>(cmax, abs(a[i][j]));
    for (std::size_t i = 0; i < k; ++i) a[i][j] /= cmax;
    logscale += log(cmax);
  }
  const Lu<T> lu = lu_factor(std::move(a));
  if (lu.sign == 0 || lu.digits < 3.0) return false;
  out = {lu.sign, static_cast<double>(lu.logabs + logscale), bits};
  return true;
}

int inversion_parity(const std::vector<double>& v) {
  int inv = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] > v[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

template <class T>
bool separator_attempt(const std::vector<double>& base, double pt, const NodeVector& t,
                       std::vector<double>& c) {
  using std::abs;
  using std::exp;
  using std::log;
  const std::size_t k = base.size();
  Mat<T> a(k, std::vector<T>(k));
  std::vector<T> b(k);
  for (std::size_t i = 0; i < k; ++i) {
    const T lt = log(T(t[i]));
    T rmax = exp(T(pt) * lt);
    for (std::size_t j = 0; j < k; ++j) {
      a[i][j] = exp(T(base[j]) * lt);
      rmax = std::max<T>(rmax, a[i][j]);
    }
    b[i] = -exp(T(pt) * lt) / rmax;
    for (std::size_t j = 0; j < k; ++j) a[i][j] /= rmax;
  }
  std::vector<T> cs(k);
  for (std::size_t j = 0; j < k; ++j) {
    T cmax = 0;
    for (std::size_t i = 0; i < k; ++i) cmax = std::max<T>(cmax, abs(a[i][j]));
    cs[j] = 1 / cmax;
    for (std::size_t i = 0; i < k; ++i) a[i][j] *= cs[j];
  }
  const Lu<T> lu = lu_factor(std::move(a));
  if (lu.sign == 0 || lu.digits < 3.0) return false;
  const std::vector<T> y = lu_solve(lu, b);
  c.resize(k);
  for (std::size_t j = 0; j < k; ++j) c[j] = static_cast<double>(y[j] * cs[j]);
  return true;
}

}  // namespace

LogDet gen_vandermonde_logdet(const NodeVector& t, const std::vector<double>& p) {
  if (t.size() != p.size() || p.empty()) throw DomainError("gen_vandermonde_det needs equal nonzero lengths");
  for (std::size_t j = 1; j < p.size(); ++j)
    if (!(p[j] > p[j - 1])) throw DomainError("gen_vandermonde_det needs strictly increasing exponents");
  LogDet out{0, 0.0, 0};
  if (vandermonde_attempt<double>(t, p, out, 53)) return out;
  if (vandermonde_attempt<mp::cpp_bin_float_50>(t, p, out, 166)) return out;
  if (vandermonde_attempt<mp::cpp_bin_float_100>(t, p, out, 332)) return out;
  throw IllConditioned("generalized Vandermonde determinant has < 3 trustworthy digits at 100 digits");
}

double gen_vandermonde_det(const NodeVector& t, const std::vector<double>& p) {
  const LogDet d = gen_vandermonde_logdet(t, p);
  return d.sign * std::exp(d.logabs);
}

double SeparatorCoeffs::operator()(double t) const {
  double h = std::pow(t, p_target);
  for (std::size_t i = 0; i < base.size(); ++i) h += coeffs[i] * std::pow(t, base[i]);
  return h;
}

SeparatorCoeffs separator(const std::vector<double>& base_p, double p_target, const NodeVector& nodes) {
  if (base_p.size() != nodes.size() || base_p.empty())
    throw DomainError("separator needs as many nodes as base exponents");
  if (!(p_target > -1.0)) throw DomainError("separator exponents must be > -1");
  for (std::size_t i = 0; i < base_p.size(); ++i) {
    if (!(base_p[i] > -1.0)) throw DomainError("separator exponents must be > -1");
    if (base_p[i] == p_target) throw DomainError("target exponent repeats a base exponent");
    for (std::size_t j = 0; j < i; ++j)
      if (base_p[j] == base_p[i]) throw DomainError("base exponents must be distinct");
  }
  SeparatorCoeffs out{p_target, base_p, {}, 1, 1};
  if (!separator_attempt<double>(base_p, p_target, nodes, out.coeffs) &&
      !separator_attempt<mp::cpp_bin_float_50>(base_p, p_target, nodes, out.coeffs) &&
      !separator_attempt<mp::cpp_bin_float_100>(base_p, p_target, nodes, out.coeffs))
    throw IllConditioned("separator system has < 3 trustworthy digits at 100 digits");

  const auto s = static_cast<std::size_t>(std::max_element(base_p.begin(), base_p.end()) - base_p.begin());
  if (base_p[s] > p_target) {
    out.max_coeff_sign = out.coeffs[s] > 0 ? 1 : (out.coeffs[s] < 0 ? -1 : 0);
    std::vector<double> swapped = base_p;
    swapped[s] = p_target;
    out.max_coeff_sign_cramer = -inversion_parity(swapped) * inversion_parity(base_p);
  }
  return out;
}

// ---------------------------------------------------------------- sign changes

namespace {

std::vector<double> hybrid_grid(double bound, int cells) {
  const int half = cells / 2;
  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(cells) + 2);
  for (int k = 0; k <= half; ++k) ts.push_back(bound * std::pow(10.0, -12.0 + 12.0 * k / half));
  for (int k = 1; k <= half; ++k) ts.push_back(bound * k / half);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

SignScan scan_once(const std::function<double(double)>& F, double bound, double tol, int cells, bool skip_end_bands) {
  const std::vector<double> ts = hybrid_grid(bound, cells);
  std::vector<double> fs(ts.size());
  std::map<int, double> scale;
  double gmax = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    fs[i] = F(ts[i]);
    if (std::isnan(fs[i])) throw DomainError("sign_changes: F returned NaN");
    const int d = static_cast<int>(std::floor(std::log10(ts[i])));
    scale[d] = std::max(scale[d], std::abs(fs[i]));
    gmax = std::max(gmax, std::abs(fs[i]));
  }
  auto classify = [&](double t, double f) {
    const int d = static_cast<int>(std::floor(std::log10(t)));
    const auto it = scale.find(d);
    const double sc = it == scale.end() ? gmax : it->second;
    if (std::abs(f) <= tol * sc) return 0;
    return f > 0 ? 1 : -1;
  };
  std::vector<int> sg(ts.size());
  bool any = false;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sg[i] = classify(ts[i], fs[i]);
    any = any || sg[i] != 0;
  }
  SignScan out;
  if (!any) {
    out.signs = {0};
    return out;
  }
  // a zero band at the bottom of the grid hides whether F crossed before it; callers that know
  // (members agreeing near 0) skip it. A trailing band is decay, never a crossing.
  if (!skip_end_bands && sg.front() == 0)
    throw UnresolvedBand("sign_changes: a zero band touches the lower end of the grid");
  std::size_t ip = 0;
  while (sg[ip] == 0) ++ip;
  out.signs.push_back(sg[ip]);
  for (std::size_t i = ip + 1; i < ts.size(); ++i) {
    if (sg[i] == 0) continue;
    if (sg[i] != sg[ip]) {
      // bisect on the raw sign; inside the tolerance band it is noisy but still brackets a crossing
      double lo = ts[ip], hi = ts[i];
      double x = 0.5 * (lo + hi);
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        x = 0.5 * (lo + hi);
        const double fx = F(x);
        if (fx == 0.0) break;
        ((fx > 0) == (sg[ip] > 0) ? lo : hi) = x;
        x = 0.5 * (lo + hi);
      }
      out.crossings.push_back(x);
      out.signs.push_back(sg[i]);
    }
    ip = i;
  }
  return out;
}

}  // namespace

SignScan scan_signs(const std::function<double(double)>& F, double hint_bound, double tol, int cap,
                    bool skip_end_bands) {
  if (!(hint_bound > 0.0) || !std::isfinite(hint_bound)) throw DomainError("sign_changes needs a finite positive bound");
  if (!(tol > 0.0)) throw DomainError("sign_changes needs tol > 0");
  constexpr int cells = 1 << 12;
  SignScan s = scan_once(F, hint_bound, tol, cells, skip_end_bands);
  if (cap >= 0 && static_cast<int>(s.crossings.size()) > cap)
    s = scan_once(F, hint_bound, tol, 4 * cells, skip_end_bands);
  return s;
}

std::vector<double> sign_changes(const std::function<double(double)>& F, double hint_bound, double tol, int cap,
                                 bool skip_end_bands) {
  return scan_signs(F, hint_bound, tol, cap, skip_end_bands).crossings;
}

Parity parity_rule(const ExponentTuple& p) {
  if (p.size() == 0) throw DomainError("parity_rule needs a nonempty tuple");
  const std::size_t k = p.rank(p.size() - 1);
  return (p.size() - k) % 2 == 0 ? Parity::MaxIsPlus : Parity::MaxIsMinus;
}

}  // namespace lcm
