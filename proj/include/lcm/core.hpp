#pragma once

#include <cstddef>
#include <limits>
#include <variant>
#include <vector>

#include "lcm/errors.hpp"

namespace lcm {

inline constexpr double INF = std::numeric_limits<double>::infinity();

/// Element of [0, INF]. Multiplication follows INF * 0 = 0.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  ExtReal(double v);  // NOLINT: implicit on purpose, throws on negative/NaN
  static ExtReal inf() { return ExtReal(INF); }

  double value() const { return v_; }
  operator double() const { return v_; }  // NOLINT
  bool is_inf() const { return v_ == INF; }
  bool is_zero() const { return v_ == 0.0; }

  friend ExtReal operator*(ExtReal a, ExtReal b) {
    if (a.is_zero() || b.is_zero()) return ExtReal();
    return ExtReal(a.v_ * b.v_);
  }
  friend ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(a.v_ + b.v_); }

 private:
  double v_ = 0.0;
};

/// Distinct exponents, each > -1.
class ExponentTuple {
 public:
  ExponentTuple() = default;
  ExponentTuple(std::vector<double> p);  // NOLINT
  ExponentTuple(std::initializer_list<double> p) : ExponentTuple(std::vector<double>(p)) {}

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& values() const { return p_; }
  /// 1-based position of p_i in the increasing rearrangement.
  std::size_t rank(std::size_t i) const;
  ExponentTuple prefix(std::size_t n) const;
  double min() const;
  double max() const;

 private:
  std::vector<double> p_;
};

enum class Sign { Plus, Minus };

struct SimpleClass {
  int order = 0;
  Sign sign = Sign::Plus;
  friend bool operator==(const SimpleClass&, const SimpleClass&) = default;
};

/// Parameter layout of a class template.
struct Layout {
  int pieces = 0;          // number of slopes
  bool first_knot_fixed = false;  // b_1 = 0 is implicit
  bool has_cutoff = false;
  int n_slopes() const { return pieces; }
  int n_knots() const { return pieces - (first_knot_fixed ? 1 : 0) + (has_cutoff ? 1 : 0); }
};
Layout layout(SimpleClass cls);

/// Normalized potential: V(t) = sum incs_i (t - knots_i)_+, f = exp(-V) on [0, cutoff].
/// Knots strictly increasing and < cutoff, increments finite and > 0.
struct Profile {
  std::vector<double> knots;
  std::vector<double> incs;
  double cutoff = INF;
  bool is_constant_one() const { return knots.empty() && cutoff == INF; }
  bool is_point_mass() const { return cutoff == 0.0; }
};

/// f(t) = exp(log_f_lo - slope (t - lo)) on [lo, hi].
struct Segment {
  double lo;
  double hi;
  double log_f_lo;
  double slope;
};
std::vector<Segment> segments(const Profile& pr);
double eval(const Profile& pr, double t);

/// Member of L_n^+ or L_n^-.
/// Knot list holds the free knots of the template followed by the cutoff (if any).
/// Order 0 is stored with a single knot: 0 for the point mass 1_{0}, INF for the constant 1.
class SimpleLogConcaveFn {
 public:
  SimpleLogConcaveFn(SimpleClass cls, std::vector<ExtReal> slopes, std::vector<ExtReal> knots);

  static SimpleLogConcaveFn point_mass();
  static SimpleLogConcaveFn constant_one();
  static SimpleLogConcaveFn exponential(double a);
  static SimpleLogConcaveFn indicator(double b);

  const SimpleClass& cls() const { return cls_; }
  const std::vector<ExtReal>& slopes() const { return slopes_; }
  const std::vector<ExtReal>& knots() const { return knots_; }
  /// b_1..b_P including an implicit zero.
  std::vector<ExtReal> piece_knots() const;
  /// Template cutoff, INF for templates without one.
  ExtReal template_cutoff() const;
  Profile profile() const;

  friend bool operator==(const SimpleLogConcaveFn&, const SimpleLogConcaveFn&) = default;

 private:
  SimpleClass cls_;
  std::vector<ExtReal> slopes_;
  std::vector<ExtReal> knots_;
};

/// exp(-V) 1_{[0,cutoff]} with V convex piecewise linear, V(0) = 0.
/// pieces[i] = (slope, knot): V has slope `slope` from `knot` on.
struct PotentialSpec {
  struct Piece {
    double slope;
    double knot;
  };
  std::vector<Piece> pieces;
  ExtReal cutoff = ExtReal::inf();

  PotentialSpec() = default;
  PotentialSpec(std::vector<Piece> pieces, ExtReal cutoff);
  Profile profile() const;
};

using AnyFn = std::variant<SimpleLogConcaveFn, PotentialSpec>;
Profile profile_of(const AnyFn& f);

double eval(const SimpleLogConcaveFn& f, double t);
double eval(const PotentialSpec& f, double t);
ExtReal support_bound(const SimpleLogConcaveFn& f);

SimpleLogConcaveFn canonical(const SimpleLogConcaveFn& f);
SimpleLogConcaveFn canonical(const Profile& pr);
SimpleLogConcaveFn embed(const SimpleLogConcaveFn& f, SimpleClass target);

/// d(f,g) = int_0^inf |f-g| (t^p_lo + t^p_hi) dt.
double distance(const AnyFn& f, const AnyFn& g, double p_lo, double p_hi);

}  // namespace lcm
