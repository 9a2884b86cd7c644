#include <gtest/gtest.h>

#include <cmath>

#include "lcm/moments.hpp"
#include "support.hpp"

using namespace lcm;
using lcm::testing::Engine;
using lcm::testing::random_exponents;
using lcm::testing::random_member;
using lcm::testing::random_potential;
using lcm::testing::rel_err;
using lcm::testing::uniform;

namespace {

PotentialSpec as_potential(const Profile& pr) {
  std::vector<PotentialSpec::Piece> ps;
  double s = 0.0;
  for (std::size_t i = 0; i < pr.knots.size(); ++i) {
    s += pr.incs[i];
    ps.push_back({s, pr.knots[i]});
  }
  return PotentialSpec(ps, pr.cutoff);
}

double ratio(const AnyFn& f, double p, double q) {
  const Profile pr = profile_of(f);
  return std::pow(moment(pr, p).value(), 1.0 / (p + 1.0)) / std::pow(moment(pr, q).value(), 1.0 / (q + 1.0));
}

}  // namespace

TEST(MomentVector, MixedFiniteAndInfRejected) {
  EXPECT_THROW(MomentVector({1.0, INF}), DomainError);
  EXPECT_TRUE(MomentVector({INF, INF}).all_inf());
  EXPECT_TRUE(MomentVector({0.0, 0.0}).all_zero());
  EXPECT_THROW(MomentVector({-1.0}), DomainError);
}

TEST(PowerExpIntegral, Examples) {
  EXPECT_NEAR(power_exp_integral(0.0, 1.0, 0.0, ExtReal::inf()).value(), 1.0, 1e-15);
  EXPECT_NEAR(power_exp_integral(2.0, 0.0, 0.0, 1.0).value(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(power_exp_integral(1.0, 1.0, 0.0, 1.0).value(), 1.0 - 2.0 / std::exp(1.0), 1e-15);
  EXPECT_TRUE(power_exp_integral(1.0, 0.0, 0.0, ExtReal::inf()).is_inf());
  EXPECT_EQ(power_exp_integral(1.0, ExtReal::inf(), 0.0, 5.0).value(), 0.0);
  EXPECT_THROW(power_exp_integral(-1.0, 1.0, 0.0, 1.0), DomainError);
}

TEST(PowerExpIntegral, ShiftedStaysFinite) {
  // e^{-lam u} underflows, the shifted form does not
  const double v = shifted_power_exp_integral(0.0, 1000.0, 10.0, INF);
  EXPECT_NEAR(v, 1.0 / 1000.0, 1e-15);
}

TEST(Moment, Examples) {
  EXPECT_NEAR(moment(SimpleLogConcaveFn::indicator(1.0), 2.0).value(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(moment(SimpleLogConcaveFn::indicator(3.0), 0.5).value(), std::pow(3.0, 1.5) / 1.5, 1e-14);
  EXPECT_NEAR(moment(SimpleLogConcaveFn::exponential(1.0), 2.0).value(), 2.0, 1e-14);
  const SimpleLogConcaveFn ecut({2, Sign::Minus}, {1.0}, {1.0});
  EXPECT_NEAR(moment(ecut, 1.0).value(), 1.0 - 2.0 / std::exp(1.0), 1e-15);
}

TEST(MomentMap, Examples) {
  const ExponentTuple p{0.0, 2.0};
  const auto a = moment_map(SimpleLogConcaveFn::indicator(1.0), p);
  EXPECT_NEAR(a[0].value(), 1.0, 1e-15);
  EXPECT_NEAR(a[1].value(), 1.0 / 3.0, 1e-15);
  const auto b = moment_map(SimpleLogConcaveFn::exponential(1.0), p);
  EXPECT_NEAR(b[0].value(), 1.0, 1e-15);
  EXPECT_NEAR(b[1].value(), 2.0, 1e-14);
  const auto c = moment_map(SimpleLogConcaveFn::constant_one(), p);
  EXPECT_TRUE(c.all_inf());
  EXPECT_TRUE(moment_map(SimpleLogConcaveFn::point_mass(), p).all_zero());
  EXPECT_EQ(moment_map(SimpleLogConcaveFn::exponential(1.0), p, 1).size(), 1u);
}

TEST(MomentQuadrature, Examples) {
  const PotentialSpec e({{1.0, 0.0}}, ExtReal::inf());
  EXPECT_NEAR(moment_quadrature(e, 3.0, 1e-12), 6.0, 1e-10);
  const PotentialSpec ind({}, ExtReal(2.0));
  EXPECT_NEAR(moment_quadrature(ind, 0.5, 1e-12), std::pow(2.0, 1.5) / 1.5, 1e-10);
  // singular weight near zero
  EXPECT_NEAR(moment_quadrature(e, -0.5, 1e-12), std::sqrt(M_PI), 1e-10);
}

TEST(MomentRatioBound, Examples) {
  EXPECT_NEAR(moment_ratio_bound(1.7, 1.7), 1.0, 1e-15);
  EXPECT_NEAR(moment_ratio_bound(0.0, 2.0), std::cbrt(3.0), 1e-14);
  EXPECT_NEAR(moment_ratio_bound(2.0, 0.0), std::cbrt(2.0), 1e-14);
}

// ---------------------------------------------------------------- properties

TEST(MomentProperty, ClosedFormMatchesQuadrature) {
  Engine g(21);
  double worst = 0.0;
  for (int it = 0; it < 500; ++it) {
    const auto f = random_member(g, 1 + it % 6, it % 2 ? Sign::Plus : Sign::Minus);
    const double p = uniform(g, -0.9, 8.0);
    const double a = moment(f, p).value();
    const double b = moment_quadrature(as_potential(f.profile()), p, 1e-12);
    worst = std::max(worst, rel_err(a, b));
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(MomentProperty, PotentialClosedFormMatchesQuadrature) {
  Engine g(22);
  for (int it = 0; it < 200; ++it) {
    const auto f = random_potential(g, 1 + it % 5, it % 3 == 0);
    const double p = uniform(g, -0.9, 8.0);
    EXPECT_LE(rel_err(moment(f, p).value(), moment_quadrature(f, p, 1e-12)), 1e-9);
  }
}

TEST(MomentProperty, ComparisonConstantInequality) {
  Engine g(23);
  for (int it = 0; it < 400; ++it) {
    const auto f = random_potential(g, 1 + it % 5, it % 2 == 0);
    const double p = uniform(g, -0.9, 8.0), q = uniform(g, -0.9, 8.0);
    EXPECT_LE(ratio(f, p, q), moment_ratio_bound(p, q) * (1.0 + 1e-12)) << p << " " << q;
  }
}

TEST(MomentProperty, ComparisonConstantAttainedAtExtremals) {
  Engine g(24);
  for (int it = 0; it < 100; ++it) {
    const double p = uniform(g, -0.9, 8.0), q = uniform(g, -0.9, 8.0);
    const double c = moment_ratio_bound(p, q);
    const double re = ratio(SimpleLogConcaveFn::exponential(uniform(g, 0.1, 3.0)), p, q);
    const double ri = ratio(SimpleLogConcaveFn::indicator(uniform(g, 0.1, 3.0)), p, q);
    EXPECT_LE(re, c * (1.0 + 1e-12));
    EXPECT_LE(ri, c * (1.0 + 1e-12));
    EXPECT_NEAR(std::max(re, ri), c, 1e-9 * c);
  }
}

TEST(MomentProperty, MonotoneInCutoffAndSlopes) {
  Engine g(25);
  for (int it = 0; it < 200; ++it) {
    const auto f = random_member(g, 1 + it % 6, it % 2 ? Sign::Plus : Sign::Minus);
    const double p = uniform(g, -0.9, 8.0);
    const double m = moment(f, p).value();
    for (std::size_t i = 0; i < f.slopes().size(); ++i) {
      auto s = f.slopes();
      s[i] = ExtReal(s[i].value() * (1.0 + 1e-4));
      EXPECT_LT(moment(SimpleLogConcaveFn(f.cls(), s, f.knots()), p).value(), m) << "slope " << i;
    }
    if (layout(f.cls()).has_cutoff) {
      auto k = f.knots();
      k.back() = ExtReal(k.back().value() * (1.0 + 1e-4));
      EXPECT_GT(moment(SimpleLogConcaveFn(f.cls(), f.slopes(), k), p).value(), m);
    }
  }
}

TEST(MomentProperty, DilationCovariance) {
  Engine g(26);
  for (int it = 0; it < 100; ++it) {
    const auto f = random_member(g, 1 + it % 5, it % 2 ? Sign::Plus : Sign::Minus);
    const double s = uniform(g, 0.1, 10.0);
    const auto p = random_exponents(g, 3);
    const auto a = moment_map(f, p), b = moment_map(lcm::testing::dilate(f, s), p);
    for (std::size_t i = 0; i < 3; ++i)
      EXPECT_LE(rel_err(b[i].value(), std::pow(s, p[i] + 1.0) * a[i].value()), 1e-12);
  }
}
