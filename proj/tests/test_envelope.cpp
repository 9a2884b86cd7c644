#include <gtest/gtest.h>

#include <cmath>

#include "lcm/envelope.hpp"
#include "support.hpp"

using namespace lcm;
using lcm::testing::Engine;
using lcm::testing::random_exponents;
using lcm::testing::random_member;
using lcm::testing::random_potential;
using lcm::testing::rel_err;
using lcm::testing::uniform;

TEST(Envelope, ExamplesEvenParity) {
  const auto r = envelope({0.0, 2.0}, {1.0});
  EXPECT_NEAR(r.lo.value(), 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(r.hi.value(), 2.0, 1e-9);
  EXPECT_EQ(r.parity, Parity::MaxIsPlus);
  EXPECT_EQ(r.status, Feasibility::Interior);
  EXPECT_LE(distance(r.argmin, SimpleLogConcaveFn::indicator(1.0), 0.0, 2.0), 1e-8);
  EXPECT_LE(distance(r.argmax, SimpleLogConcaveFn::exponential(1.0), 0.0, 2.0), 1e-8);
}

TEST(Envelope, ExamplesOddParity) {
  const auto r = envelope({2.0, 0.0}, {1.0 / 3.0});
  EXPECT_NEAR(r.lo.value(), std::pow(6.0, -1.0 / 3.0), 1e-9);
  EXPECT_NEAR(r.hi.value(), 1.0, 1e-9);
  EXPECT_EQ(r.parity, Parity::MaxIsMinus);
  EXPECT_EQ(r.argmax.cls().sign, Sign::Minus);
  EXPECT_LE(distance(r.argmax, SimpleLogConcaveFn::indicator(1.0), 0.0, 2.0), 1e-8);
}

TEST(Envelope, BoundaryCollapses) {
  // e^{-t} has m_0 = m_1 = 1, m_2 = 2
  const auto r = envelope({0.0, 1.0, 2.0}, {1.0, 1.0});
  EXPECT_EQ(r.status, Feasibility::Boundary);
  EXPECT_NEAR(r.lo.value(), 2.0, 1e-9);
  EXPECT_NEAR(r.hi.value(), 2.0, 1e-9);
  EXPECT_EQ(canonical(r.argmin), SimpleLogConcaveFn::exponential(1.0));
  EXPECT_EQ(canonical(r.argmax), SimpleLogConcaveFn::exponential(1.0));
}

TEST(Envelope, Errors) {
  EXPECT_THROW(envelope({0.0, 2.0}, {1.0, 1.0}), DomainError);
  EXPECT_THROW(envelope({0.0, 1.0, 2.0}, {1.0, 3.0}), InfeasibleError);
}

TEST(Body, Examples) {
  EXPECT_EQ(body_contains({0.0, 2.0}, {1.0, 1.0}).status, Feasibility::Interior);
  const auto b = body_contains({0.0, 2.0}, {1.0, 1.0 / 3.0});
  EXPECT_EQ(b.status, Feasibility::Boundary);
  ASSERT_TRUE(b.realizer);
  EXPECT_EQ(b.realizer->cls(), (SimpleClass{1, Sign::Minus}));
  EXPECT_NEAR(b.realizer->knots()[0].value(), 1.0, 1e-9);
  const auto v = body_contains({0.0}, {0.0});
  EXPECT_EQ(v.status, Feasibility::Boundary);
  ASSERT_TRUE(v.realizer);
  EXPECT_EQ(*v.realizer, SimpleLogConcaveFn::point_mass());
  EXPECT_EQ(body_contains({0.0, 2.0}, {1.0, 3.0}).status, Feasibility::Infeasible);
}

TEST(Grid, ScalingExample) {
  const auto rows = envelope_grid({0.0, 2.0}, 0, axis_grid({1.0}, 0, {0.5, 1.0, 2.0}), {}, 1);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[0].lo, 1.0 / 24.0, 1e-10);
  EXPECT_NEAR(rows[0].hi, 0.25, 1e-10);
  for (const auto& r : rows) {
    const double m = r.constraints[0].value();
    EXPECT_NEAR(r.lo, m * m * m / 3.0, 1e-9 * m * m * m);
    EXPECT_NEAR(r.hi, 2.0 * m * m * m, 1e-9 * m * m * m);
    EXPECT_EQ(r.status, "Interior");
  }
}

TEST(Grid, EmptyAndInfeasibleRows) {
  EXPECT_TRUE(envelope_grid({0.0, 2.0}, 0, {}).empty());
  const auto rows = envelope_grid({0.0, 1.0, 2.0}, 1, axis_grid({1.0, 0.7}, 1, {0.7, 3.0, 0.8}), {}, 2);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].status, "Interior");
  EXPECT_EQ(rows[1].status, "Infeasible");
  EXPECT_TRUE(std::isnan(rows[1].lo));
  EXPECT_EQ(rows[2].status, "Interior");
  const auto one = envelope({0.0, 1.0, 2.0}, {1.0, 0.8});
  EXPECT_EQ(rows[2].lo, one.lo.value());
  EXPECT_EQ(rows[2].hi, one.hi.value());
  const std::string csv = grid_csv(rows, 2);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "m_1,m_2,lo,hi,status");
  EXPECT_NE(csv.find("1,3,,,Infeasible"), std::string::npos);
}

// ---------------------------------------------------------------- properties

TEST(EnvelopeProperty, DilationCovariance) {
  Engine g(51);
  for (int it = 0; it < 25; ++it) {
    const std::size_t n = 1 + it % 3;
    const auto p = random_exponents(g, n + 1, -0.5, 6.0, 0.5);
    const ExponentTuple pn(std::vector<double>(p.begin(), p.end() - 1));
    const auto f = random_potential(g, 3, it % 2 == 0);
    const auto m = moment_map(f, pn);
    const double s = std::exp(uniform(g, std::log(0.1), std::log(10.0)));
    std::vector<double> ms;
    for (std::size_t i = 0; i < n; ++i) ms.push_back(std::pow(s, p[i] + 1.0) * m[i].value());
    const auto a = envelope(p, m), b = envelope(p, ms);
    const double k = std::pow(s, p.back() + 1.0);
    EXPECT_LE(rel_err(b.lo.value(), k * a.lo.value()), 1e-8);
    EXPECT_LE(rel_err(b.hi.value(), k * a.hi.value()), 1e-8);
  }
}

TEST(EnvelopeProperty, InteriorStrictBoundaryCollapsed) {
  Engine g(52);
  for (int it = 0; it < 25; ++it) {
    const std::size_t n = 1 + it % 3;
    const auto p = random_exponents(g, n + 1, -0.5, 6.0, 0.5);
    const ExponentTuple pn(std::vector<double>(p.begin(), p.end() - 1));
    // interior: a member of order n+1 has interior moments
    const auto fi = random_member(g, static_cast<int>(n) + 1, it % 2 ? Sign::Plus : Sign::Minus);
    const auto ri = envelope(p, moment_map(fi, pn));
    EXPECT_EQ(ri.status, Feasibility::Interior);
    EXPECT_LT(ri.lo.value(), ri.hi.value());
    EXPECT_LE(ri.lo.value(), ri.hi.value());
    // boundary: order n-1 members sit on the boundary of the n-constraint body
    if (n < 2) continue;
    const auto fb = random_member(g, static_cast<int>(n) - 1, it % 2 ? Sign::Plus : Sign::Minus);
    const auto rb = envelope(p, moment_map(fb, pn));
    EXPECT_EQ(rb.status, Feasibility::Boundary);
    const double mb = moment(fb, p.back()).value();
    EXPECT_LE(std::abs(rb.hi.value() - rb.lo.value()), 1e-8 * mb);
    EXPECT_LE(rel_err(rb.hi.value(), mb), 1e-8);
  }
}

TEST(EnvelopeProperty, FeasibleSetIsSegment) {
  Engine g(53);
  for (int it = 0; it < 4; ++it) {
    const std::size_t n = 2 + it % 2;
    const auto p = random_exponents(g, n, -0.5, 5.0, 0.6);
    const ExponentTuple pn1(std::vector<double>(p.begin(), p.end() - 1));
    const auto f = random_potential(g, 3, true);
    const auto m = moment_map(f, pn1);
    const auto e = envelope(p, m);
    int transitions = 0;
    bool prev = false;
    for (int i = 0; i < 50; ++i) {
      const double x = e.lo.value() * 0.6 + (e.hi.value() * 1.4 - e.lo.value() * 0.6) * i / 49.0;
      std::vector<double> mm = m.as_doubles();
      mm.push_back(x);
      const Feasibility fs = feasibility(p, mm);
      const bool inside = fs != Feasibility::Infeasible;
      const bool expect = x >= e.lo.value() * (1 - 1e-9) && x <= e.hi.value() * (1 + 1e-9);
      EXPECT_EQ(inside, expect) << "x=" << x << " lo=" << e.lo.value() << " hi=" << e.hi.value();
      if (i > 0 && inside != prev) ++transitions;
      prev = inside;
    }
    EXPECT_EQ(transitions, 2);
  }
}

TEST(EnvelopeProperty, ExtremizersAreTheSimpleMembers) {
  Engine g(54);
  for (int it = 0; it < 20; ++it) {
    const int n = 1 + it % 3;
    const Sign s = it % 2 ? Sign::Plus : Sign::Minus;
    const auto p = random_exponents(g, static_cast<std::size_t>(n) + 1, -0.5, 6.0, 0.5);
    const ExponentTuple pn(std::vector<double>(p.begin(), p.end() - 1));
    const auto f = random_member(g, n, s);
    const auto e = envelope(p, moment_map(f, pn));
    const bool f_is_max = (s == Sign::Plus) == (e.parity == Parity::MaxIsPlus);
    const auto& ext = f_is_max ? e.argmax : e.argmin;
    const double target = f_is_max ? e.hi.value() : e.lo.value();
    EXPECT_LE(rel_err(moment(f, p.back()).value(), target), 1e-8);
    EXPECT_LE(distance(f, ext, std::min(p.back(), pn.min()), std::max(p.back(), pn.max())), 1e-6);
    // a generic member of L does not reach the endpoint
    const auto h = random_potential(g, 4, true);
    const auto eh = envelope(p, moment_map(h, pn));
    const double mh = moment(h, p.back()).value();
    EXPECT_GT(eh.hi.value() - mh, 1e-9 * eh.hi.value());
    EXPECT_GT(mh - eh.lo.value(), 1e-9 * eh.hi.value());
  }
}

TEST(EnvelopeProperty, ParityMatchesObservedOrder) {
  Engine g(55);
  for (int it = 0; it < 30; ++it) {
    const std::size_t n = 1 + it % 3;
    const auto p = random_exponents(g, n + 1, -0.5, 6.0, 0.5);
    const ExponentTuple pn(std::vector<double>(p.begin(), p.end() - 1));
    const auto m = moment_map(random_potential(g, 3, it % 2 == 0), pn);
    const auto cp = match_moments(Sign::Plus, pn, m), cm = match_moments(Sign::Minus, pn, m);
    ASSERT_TRUE(cp.solution && cm.solution);
    const bool plus_bigger = moment(*cp.solution, p.back()).value() > moment(*cm.solution, p.back()).value();
    EXPECT_EQ(plus_bigger, parity_rule(p) == Parity::MaxIsPlus);
  }
}
