#include <gtest/gtest.h>

#include <cmath>

#include "lcm/chebyshev.hpp"
#include "lcm/core.hpp"
#include "lcm/moments.hpp"
#include "support.hpp"

using namespace lcm;
using lcm::testing::Engine;
using lcm::testing::random_member;
using lcm::testing::uniform;

namespace {

SimpleLogConcaveFn fn(int order, Sign s, std::vector<ExtReal> slopes, std::vector<ExtReal> knots) {
  return SimpleLogConcaveFn({order, s}, std::move(slopes), std::move(knots));
}

}  // namespace

TEST(ExtReal, RejectsNegativeAndNan) {
  EXPECT_THROW(ExtReal(-1.0), DomainError);
  EXPECT_THROW(ExtReal(std::nan("")), DomainError);
  EXPECT_TRUE(ExtReal::inf().is_inf());
  EXPECT_EQ((ExtReal::inf() * ExtReal(0.0)).value(), 0.0);
}

TEST(ExponentTuple, Validation) {
  EXPECT_THROW(ExponentTuple({-1.0}), DomainError);
  EXPECT_THROW(ExponentTuple({1.0, 1.0}), DomainError);
  EXPECT_THROW(ExponentTuple({INF}), DomainError);
  const ExponentTuple p{3.0, -0.5, 1.0};
  EXPECT_EQ(p.rank(0), 3u);
  EXPECT_EQ(p.rank(1), 1u);
  EXPECT_EQ(p.rank(2), 2u);
}

TEST(SimpleFn, TemplateCountsAreChecked) {
  EXPECT_THROW(fn(2, Sign::Plus, {1.0, 1.0}, {1.0}), DomainError);
  EXPECT_THROW(fn(3, Sign::Minus, {1.0}, {2.0, 1.0}), DomainError);
  EXPECT_THROW(fn(0, Sign::Plus, {}, {1.0}), DomainError);
}

TEST(Eval, Examples) {
  EXPECT_EQ(eval(SimpleLogConcaveFn::indicator(1.0), 0.5), 1.0);
  EXPECT_NEAR(eval(SimpleLogConcaveFn::exponential(1.0), 1.0), std::exp(-1.0), 1e-16);
  EXPECT_NEAR(eval(fn(2, Sign::Plus, {2.0}, {1.0}), 1.5), std::exp(-1.0), 1e-16);
}

TEST(Eval, CutoffIsLeftLimit) {
  const auto f = fn(3, Sign::Minus, {1.0}, {0.0, 3.0});
  EXPECT_NEAR(eval(f, 3.0), std::exp(-3.0), 1e-16);
  EXPECT_EQ(eval(f, 3.0000001), 0.0);
  EXPECT_EQ(eval(SimpleLogConcaveFn::point_mass(), 0.0), 1.0);
  EXPECT_EQ(eval(SimpleLogConcaveFn::point_mass(), 1e-300), 0.0);
  EXPECT_EQ(eval(SimpleLogConcaveFn::constant_one(), 1e300), 1.0);
}

TEST(SupportBound, Examples) {
  EXPECT_EQ(support_bound(SimpleLogConcaveFn::indicator(2.0)).value(), 2.0);
  EXPECT_TRUE(support_bound(SimpleLogConcaveFn::exponential(1.0)).is_inf());
  EXPECT_EQ(support_bound(fn(3, Sign::Minus, {1.0}, {0.0, 3.0})).value(), 3.0);
}

TEST(Embed, Examples) {
  const auto e = SimpleLogConcaveFn::exponential(1.0);
  const auto a = embed(e, {2, Sign::Plus});
  EXPECT_EQ(a, fn(2, Sign::Plus, {1.0}, {0.0}));
  const auto b = embed(e, {2, Sign::Minus});
  EXPECT_EQ(b, fn(2, Sign::Minus, {1.0}, {ExtReal::inf()}));
  const auto c = embed(SimpleLogConcaveFn::indicator(1.0), {2, Sign::Minus});
  EXPECT_EQ(c, fn(2, Sign::Minus, {0.0}, {1.0}));
}

TEST(Embed, LowerOrderTargetRejected) {
  const auto f = fn(3, Sign::Plus, {1.0, 2.0}, {1.0});
  EXPECT_THROW(embed(f, {2, Sign::Plus}), NotEmbeddable);
}

TEST(Distance, Examples) {
  const auto e = SimpleLogConcaveFn::exponential(1.0);
  EXPECT_EQ(distance(e, e, 0.0, 3.0), 0.0);
  EXPECT_NEAR(distance(SimpleLogConcaveFn::indicator(1.0), SimpleLogConcaveFn::indicator(2.0), 0.0, 1.0), 2.5, 1e-12);
  // int_0^1 (1 - e^-t) + int_1^inf e^-t, weight 2
  EXPECT_NEAR(distance(e, SimpleLogConcaveFn::indicator(1.0), 0.0, 0.0), 4.0 / std::exp(1.0), 1e-10);
}

TEST(Distance, ConstantOneDiverges) {
  EXPECT_THROW(distance(SimpleLogConcaveFn::constant_one(), SimpleLogConcaveFn::exponential(1.0), 0.0, 1.0), Diverges);
  EXPECT_EQ(distance(SimpleLogConcaveFn::constant_one(), SimpleLogConcaveFn::constant_one(), 0.0, 1.0), 0.0);
}

TEST(Distance, PotentialSpecAgainstSimple) {
  const PotentialSpec v({{1.0, 0.0}}, ExtReal::inf());
  EXPECT_EQ(distance(v, SimpleLogConcaveFn::exponential(1.0), -0.5, 4.0), 0.0);
}

// ---------------------------------------------------------------- properties

TEST(CoreProperty, NonincreasingAndLogConcave) {
  Engine g(101);
  for (int it = 0; it < 300; ++it) {
    const int n = 1 + it % 6;
    const auto f = random_member(g, n, it % 2 ? Sign::Plus : Sign::Minus);
    const double bound = std::isinf(support_bound(f).value()) ? 30.0 : support_bound(f).value();
    for (int k = 0; k < 20; ++k) {
      double s = uniform(g, 0.0, bound), t = uniform(g, 0.0, bound), u = uniform(g, 0.0, bound);
      if (s > t) std::swap(s, t);
      if (t > u) std::swap(t, u);
      if (s > t) std::swap(s, t);
      if (!(s < t && t < u)) continue;
      EXPECT_GE(eval(f, s), eval(f, t));
      EXPECT_GE(eval(f, t), eval(f, u));
      const double fs = eval(f, s), ft = eval(f, t), fu = eval(f, u);
      if (fu <= 0.0) continue;
      const double lam = (u - t) / (u - s);
      EXPECT_GE(std::log(ft), lam * std::log(fs) + (1 - lam) * std::log(fu) - 1e-12);
    }
  }
}

TEST(CoreProperty, EmbedPreservesEvalExactly) {
  Engine g(202);
  for (int it = 0; it < 100; ++it) {
    const int n = 1 + it % 5;
    const auto f = random_member(g, n, it % 2 ? Sign::Plus : Sign::Minus);
    for (int m = n + 1; m <= n + 2; ++m)
      for (Sign s : {Sign::Plus, Sign::Minus}) {
        const auto h = embed(f, {m, s});
        EXPECT_EQ(h.cls().order, m);
        for (int i = 0; i < 1000; ++i) {
          const double t = 0.01 * i;
          ASSERT_EQ(eval(h, t), eval(f, t)) << "order " << n << " -> " << m << " at t=" << t;
        }
      }
  }
}

TEST(CoreProperty, CanonicalIdempotentAndEvalPreserving) {
  Engine g(303);
  for (int it = 0; it < 200; ++it) {
    const int n = 1 + it % 5;
    auto f = random_member(g, n, it % 2 ? Sign::Plus : Sign::Minus);
    if (it % 3 == 0) f = embed(f, {n + 2, it % 4 ? Sign::Plus : Sign::Minus});
    const auto c = canonical(f);
    EXPECT_EQ(canonical(c), c);
    EXPECT_LE(c.cls().order, f.cls().order);
    for (int i = 0; i < 200; ++i) {
      const double t = 0.05 * i;
      EXPECT_NEAR(eval(c, t), eval(f, t), 1e-14 * std::max(1.0, eval(f, t)));
    }
  }
}

TEST(CoreProperty, CanonicalCollapsesDegenerateParameters) {
  // zero slope on the second piece and a merged knot
  const auto f = fn(4, Sign::Plus, {1.0, 0.0}, {0.0, 3.0});
  const auto c = canonical(f);
  EXPECT_EQ(c, SimpleLogConcaveFn::exponential(1.0));
  EXPECT_EQ(canonical(fn(2, Sign::Minus, {0.0}, {1.0})), SimpleLogConcaveFn::indicator(1.0));
}

TEST(CoreProperty, SameClassDifferenceHasFewSignChanges) {
  Engine g(404);
  for (int it = 0; it < 150; ++it) {
    const int n = 1 + it % 5;
    const Sign s = it % 2 ? Sign::Plus : Sign::Minus;
    const auto f = random_member(g, n, s), h = random_member(g, n, s);
    const double bf = support_bound(f).value(), bh = support_bound(h).value();
    const double bound = std::isinf(std::max(bf, bh)) ? 80.0 : std::max(bf, bh) * 1.01;
    const auto x = sign_changes([&](double t) { return eval(f, t) - eval(h, t); }, bound, 1e-12, -1, true);
    EXPECT_LE(static_cast<int>(x.size()), n - 1) << "order " << n;
  }
}
