#include <gtest/gtest.h>

#include <cmath>

#include "maxbound/maximal.hpp"
#include "maxbound/random.hpp"
#include "oracles.hpp"

namespace mb = maxbound;
using mb::MaximalKind;
using mb::Rational;

namespace {

mb::StepFunction chi() { return mb::make_step({0, 1}, {1}); }

std::vector<double> to_doubles(const std::vector<Rational>& xs) {
  std::vector<double> out;
  for (const auto& x : xs) out.push_back(mb::to_double(x));
  return out;
}

TEST(EvalPoint, IndicatorExamples) {
  auto f = chi();
  EXPECT_EQ(mb::eval_point(f, Rational(2), MaximalKind::Centered), Rational(1, 4));
  EXPECT_EQ(mb::eval_point(f, Rational(2), MaximalKind::Left), Rational(1, 2));
  EXPECT_EQ(mb::eval_point(f, Rational(2), MaximalKind::Uncentered), Rational(1, 2));
  EXPECT_EQ(mb::eval_point(f, Rational(1, 2), MaximalKind::Centered), 1);
  EXPECT_EQ(mb::eval_point(f, Rational(1, 2), MaximalKind::Left), 1);
  EXPECT_EQ(mb::eval_point(f, Rational(-1), MaximalKind::Centered), Rational(1, 4));
  EXPECT_EQ(mb::eval_point(f, Rational(-1), MaximalKind::Uncentered), Rational(1, 2));
  EXPECT_EQ(mb::eval_point(f, Rational(-1), MaximalKind::Left), 0);
}

TEST(EvalPoint, BreakpointsTakeTheSupremumOverRadii) {
  auto f = chi();
  EXPECT_EQ(mb::eval_point(f, Rational(0), MaximalKind::Centered), Rational(1, 2));
  EXPECT_EQ(mb::eval_point(f, Rational(1), MaximalKind::Centered), Rational(1, 2));
  EXPECT_EQ(mb::eval_point(f, Rational(0), MaximalKind::Uncentered), 1);
  EXPECT_EQ(mb::eval_point(f, Rational(1), MaximalKind::Left), 1);
}

TEST(EvalPoint, MatchesIndicatorOracle) {
  auto f = chi();
  for (int k = -200; k <= 300; ++k) {
    Rational x = mb::ratio(k, 64);
    long double xl = mb::to_long_double(x);
    for (auto kind : {MaximalKind::Centered, MaximalKind::Left, MaximalKind::Uncentered}) {
      ASSERT_NEAR(static_cast<double>(mb::to_long_double(mb::eval_point(f, x, kind))),
                  static_cast<double>(mb::indicator_oracle(xl, kind)), 1e-15)
          << "x=" << x << " kind=" << mb::to_string(kind);
    }
  }
}

TEST(EvalPoint, ZeroFunctionIsZero) {
  mb::StepFunction zero;
  EXPECT_EQ(mb::eval_point(zero, Rational(3), MaximalKind::Centered), 0);
  EXPECT_EQ(mb::eval_point(zero, Rational(3), MaximalKind::Uncentered), 0);
}

// 500 random functions, 20 points each; 10^4 sampled radii per point.
TEST(EvalPoint, DominatesAndAttainsSampledSupremum) {
  mb::Rng rng(42);
  std::vector<double> radii;
  for (int i = 0; i < 10000; ++i) radii.push_back(1e-6 * std::pow(1e8, (i + 0.5) / 10000));
  int attained = 0, total = 0;
  for (int trial = 0; trial < 500; ++trial) {
    auto f = mb::random_step(rng, {});
    auto bp = to_doubles(f.breakpoints());
    auto v = to_doubles(f.values());
    mb::MaximalEvaluator<Rational> ev(f);
    Rational span = f.support_hi() - f.support_lo();
    auto xs = mb::sample_points(rng, f.support_lo() - span, f.support_hi() + span, 20);
    for (const auto& x : xs) {
      double xd = mb::to_double(x);
      double exact = mb::to_double(ev.centered(x));
      ASSERT_LE(mb::testing::sampled_centered(bp, v, xd, radii), exact + 1e-12);
      double dense = mb::testing::densified_centered(bp, v, xd, 2000);
      ASSERT_LE(dense, exact + 1e-12);
      ++total;
      if (exact - dense <= 1e-9) ++attained;
    }
  }
  EXPECT_EQ(attained, total);
}

TEST(EvalPoint, KindsAreOrdered) {
  mb::Rng rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    auto f = mb::random_step(rng, {});
    mb::MaximalEvaluator<Rational> ev(f);
    Rational span = f.support_hi() - f.support_lo();
    for (const auto& x : mb::sample_points(rng, f.support_lo() - span, f.support_hi() + span, 20)) {
      Rational c = ev.centered(x), l = ev.left(x), u = ev.uncentered(x);
      ASSERT_GE(u, c);
      ASSERT_GE(c, l / 2);
      ASSERT_GE(u, l);
    }
  }
}

TEST(EvalPoint, CovariantUnderDilationAndTranslation) {
  mb::Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = mb::random_step(rng, {});
    Rational s = mb::ratio(mb::uniform_int(rng, 1, 20), mb::uniform_int(rng, 1, 7));
    Rational t = mb::ratio(mb::uniform_int(rng, -50, 50), 3);
    // g(y) = f(s y + t)
    std::vector<Rational> bp;
    for (const auto& b : f.breakpoints()) bp.push_back((b - t) / s);
    mb::StepFunction g(bp, f.values());
    mb::MaximalEvaluator<Rational> ef(f), eg(g);
    for (const auto& y : mb::sample_points(rng, g.support_lo() - 3, g.support_hi() + 3, 10)) {
      for (auto kind : {MaximalKind::Centered, MaximalKind::Left, MaximalKind::Uncentered})
        ASSERT_EQ(eg(y, kind), ef(s * y + t, kind));
    }
  }
}

TEST(CertifiedLower, IndicatorEnvelopeIsTightAndSound) {
  auto f = chi();
  auto grid = mb::uniform_grid(Rational(-4), Rational(5), mb::ratio(1, 64));
  auto step = mb::certified_lower(f, grid);
  EXPECT_EQ(step.order, 1);
  for (int k = 0; k < 9 * 64 * 8; ++k) {
    Rational x = Rational(-4) + mb::ratio(2 * k + 1, 1024);
    if (!(x < Rational(5))) break;
    double oracle = static_cast<double>(mb::indicator_oracle(mb::to_long_double(x), MaximalKind::Centered));
    double env = mb::to_double(step.envelope.right_limit(x));
    ASSERT_LE(env, oracle + 1e-15) << x;
    if (Rational(-2) <= x && x <= Rational(3)) {
      ASSERT_GE(env, oracle - 0.1) << x;
    }
  }
}

TEST(CertifiedLower, TwoNodeGridGivesOneCell) {
  auto step = mb::certified_lower(chi(), mb::Grid{0, 1});
  ASSERT_EQ(step.envelope.pieces(), 1u);
  Rational v = step.envelope.values()[0];
  EXPECT_GE(v, Rational(1, 2));
  EXPECT_LE(v, 1);

  // A single piece over a single cell keeps its value under iteration.
  auto two = mb::make_step({0, 1}, {2});
  auto chain = mb::certified_chain(two, 3, mb::Grid{0, 1});
  for (const auto& s : chain) EXPECT_EQ(s.envelope, two);
}

TEST(CertifiedLower, ZeroFunctionGivesZeroEnvelope) {
  auto step = mb::certified_lower(mb::StepFunction{}, mb::uniform_grid(Rational(0), Rational(1), mb::ratio(1, 4)));
  EXPECT_TRUE(step.envelope.is_zero());
}

TEST(CertifiedLower, RejectsBadGrids) {
  auto f = mb::make_step({0, mb::ratio(1, 3), 1}, {1, 2});
  EXPECT_THROW(mb::certified_lower(f, mb::Grid{0, 1}), std::invalid_argument);
  EXPECT_THROW(mb::certified_lower(f, mb::Grid{}), std::invalid_argument);
  EXPECT_THROW(mb::certified_lower(chi(), mb::Grid{0, mb::ratio(1, 2)}), std::invalid_argument);
  EXPECT_THROW(mb::certified_lower(chi(), mb::Grid{1, 0}), std::invalid_argument);
  EXPECT_THROW(mb::iterate_certified(chi(), 0, mb::Grid{0, 1}), std::invalid_argument);
  EXPECT_THROW(mb::make_grid(mb::StepFunction{}, {}), std::invalid_argument);
}

TEST(CertifiedLower, EnvelopeBelowExactAtInteriorPoints) {
  mb::Rng rng(45);
  for (int trial = 0; trial < 60; ++trial) {
    auto f = mb::random_step(rng, {});
    auto grid = mb::make_grid(f, {});
    auto step = mb::certified_lower(f, grid);
    mb::MaximalEvaluator<Rational> ev(f);
    for (const auto& x : mb::sample_points(rng, grid.front(), grid.back(), 1000))
      ASSERT_LE(step.envelope.right_limit(x), ev.centered(x)) << x;
  }
}

TEST(CertifiedLower, RefiningTheGridDoesNotLowerTheEnvelope) {
  mb::Rng rng(46);
  for (int trial = 0; trial < 30; ++trial) {
    auto f = mb::random_step(rng, {});
    mb::GridSpec spec;
    spec.width = mb::ratio(1, 64);
    auto coarse = mb::certified_chain(f, 2, mb::make_grid(f, spec));
    auto fine = mb::certified_chain(f, 2, mb::make_grid(f, spec.refined()));
    for (const auto& x : mb::sample_points(rng, coarse[0].grid.front(), coarse[0].grid.back(), 400)) {
      for (int k = 0; k < 2; ++k)
        ASSERT_GE(mb::to_double(fine[k].envelope.right_limit(x)), mb::to_double(coarse[k].envelope.right_limit(x)) - 1e-12);
    }
  }
}

TEST(CertifiedLower, IteratesAreNonDecreasing) {
  mb::Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    auto f = mb::random_step(rng, {});
    auto chain = mb::certified_chain(f, 3, mb::make_grid(f, {}));
    ASSERT_EQ(chain.size(), 3u);
    for (const auto& x : mb::sample_points(rng, chain[0].grid.front(), chain[0].grid.back(), 400)) {
      ASSERT_GE(chain[0].envelope.right_limit(x), f.right_limit(x));
      for (int k = 1; k < 3; ++k) ASSERT_GE(chain[k].envelope.right_limit(x), chain[k - 1].envelope.right_limit(x));
    }
    EXPECT_EQ(mb::iterate_certified(f, 3, chain[0].grid).envelope, chain[2].envelope);
  }
}

TEST(CertifiedLower, LowerBoundAtNodesFallsBackToExactPredecessor) {
  auto f = chi();
  auto grid = mb::uniform_grid(Rational(-2), Rational(3), mb::ratio(1, 8));
  auto chain = mb::certified_chain(f, 2, grid);
  // At a node the bound is M applied to the order-1 envelope, itself <= M f.
  Rational at_node = chain[1].lower_bound_at(Rational(2));
  EXPECT_LE(at_node, mb::eval_point(f, Rational(2), MaximalKind::Centered) + 1);
  EXPECT_EQ(chain[0].lower_bound_at(Rational(2)), Rational(1, 4));
  EXPECT_GT(at_node, Rational(1, 4));
}

TEST(Grid, NestedUnderRefinement) {
  auto f = mb::make_step({0, mb::ratio(3, 16), 1}, {1, 2});
  mb::GridSpec spec;
  auto coarse = mb::make_grid(f, spec);
  auto fine = mb::make_grid(f, spec.refined());
  EXPECT_TRUE(std::includes(fine.begin(), fine.end(), coarse.begin(), coarse.end()));
  EXPECT_LE(coarse.front(), Rational(-1) * 64);
  EXPECT_GE(coarse.back(), Rational(65));
}

}  // namespace

namespace {

TEST(CertifiedNorm, BelowTheClosedFormAndClose) {
  // ||M chi||_p^p = 1 + 2^{1-p}/(p-1).
  auto grid = mb::make_grid(chi(), {});
  auto step = mb::certified_lower(chi(), grid);
  for (long double p : {1.25L, 1.5L, 2.0L, 3.0L}) {
    long double exact = 1 + std::pow(2.0L, 1 - p) / (p - 1);
    long double got = mb::certified_lp_norm_pow(step, p);
    EXPECT_LE(got, exact) << static_cast<double>(p);
    EXPECT_GT(got, 0.97L * exact) << static_cast<double>(p);
    EXPECT_GT(got, mb::lp_norm_pow(step.envelope, p));
  }
}

TEST(CertifiedNorm, TailOnlyAddsWhatTheBallBoundGives) {
  // Grid ending at the support: the whole norm beyond it is the tail term.
  auto f = mb::make_step({0, 2}, {3});
  auto step = mb::certified_lower(f, mb::Grid{0, 2});
  long double p = 2;
  // Tails: 2 * (6/2)^2 * 2^{-1} / 1 = 9; inner: 3^2 * 2 = 18.
  EXPECT_NEAR(static_cast<double>(mb::certified_lp_norm_pow(step, p)), 27.0, 1e-12);
}

}  // namespace
