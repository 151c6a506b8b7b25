#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "maxbound/random.hpp"
#include "maxbound/stepfn.hpp"
#include "oracles.hpp"

namespace mb = maxbound;
using mb::Rational;

namespace {

mb::StepFunction chi() { return mb::make_step({0, 1}, {1}); }
// 2 on [0,1], 1 on [1,3].
mb::StepFunction two_level() { return mb::make_step({0, 1, 3}, {2, 1}); }

TEST(StepFunction, IndicatorIsSinglePiece) {
  auto f = chi();
  EXPECT_EQ(f.pieces(), 1u);
  EXPECT_EQ(f.support_lo(), 0);
  EXPECT_EQ(f.support_hi(), 1);
  EXPECT_EQ(f.right_limit(Rational(1, 2)), 1);
  EXPECT_EQ(f.right_limit(Rational(1)), 0);
  EXPECT_EQ(f.left_limit(Rational(1)), 1);
}

TEST(StepFunction, RejectsInvariantViolations) {
  EXPECT_THROW(mb::make_step({0, 1, 1, 2}, {1, 1, 1}), std::invalid_argument);
  EXPECT_THROW(mb::make_step({0, 2, 1}, {1, 1}), std::invalid_argument);
  EXPECT_THROW(mb::make_step({0, 1}, {-1}), std::invalid_argument);
  EXPECT_THROW(mb::make_step({0, 1, 2}, {1}), std::invalid_argument);
}

TEST(StepFunction, CanonicalizesEqualNeighboursAndZeroEnds) {
  auto f = mb::make_step({0, 1, 2}, {1, 1});
  EXPECT_EQ(f.breakpoints(), (std::vector<Rational>{0, 2}));
  EXPECT_EQ(f.values(), (std::vector<Rational>{1}));

  auto g = mb::make_step({-1, 0, 1, 2, 3, 4}, {0, 1, 0, 1, 0});
  EXPECT_EQ(g.breakpoints(), (std::vector<Rational>{0, 1, 2, 3}));
  EXPECT_EQ(g.values(), (std::vector<Rational>{1, 0, 1}));

  EXPECT_TRUE(mb::make_step({0, 1, 2}, {0, 0}).is_zero());
}

TEST(Average, Examples) {
  EXPECT_EQ(mb::average(chi(), Rational(-1), Rational(3)), Rational(1, 4));
  EXPECT_EQ(mb::average(chi(), Rational(0), Rational(1)), Rational(1));
  EXPECT_EQ(mb::average(two_level(), Rational(0), Rational(3)), Rational(4, 3));
  EXPECT_THROW(mb::average(chi(), Rational(1), Rational(1)), std::invalid_argument);
  EXPECT_THROW(mb::average(chi(), Rational(2), Rational(1)), std::invalid_argument);
}

TEST(Average, MatchesDirectPieceSummation) {
  mb::Rng rng(7);
  mb::RandomStepConfig cfg;
  for (int trial = 0; trial < 1000; ++trial) {
    auto f = mb::random_step(rng, cfg);
    Rational a = mb::ratio(mb::uniform_int(rng, -600, 600), 37);
    Rational b = a + mb::ratio(mb::uniform_int(rng, 1, 900), 41);
    Rational avg = mb::average(f, a, b);
    ASSERT_EQ(avg, mb::testing::direct_average(f, a, b));
    // Bounded by the piece values met, together with 0 outside the support.
    Rational lo = 0, hi = 0;
    bool first = true;
    const auto& bp = f.breakpoints();
    for (std::size_t i = 0; i < f.pieces(); ++i) {
      if (!(bp[i] < b && a < bp[i + 1])) continue;
      if (first || f.values()[i] < lo) lo = f.values()[i];
      if (first || f.values()[i] > hi) hi = f.values()[i];
      first = false;
    }
    if (a < f.support_lo() || f.support_hi() < b) lo = 0;
    ASSERT_LE(lo, avg);
    ASSERT_LE(avg, hi);
  }
}

TEST(LpNorm, Examples) {
  EXPECT_NEAR(static_cast<double>(mb::lp_norm_p(chi(), 2)), 1.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(mb::lp_norm_p(mb::scale(chi(), 2), 2)), 2.0, 1e-15);
  auto two_bumps = mb::make_step({0, 1, 2, 3}, {1, 0, 1});
  EXPECT_NEAR(static_cast<double>(mb::lp_norm_p(two_bumps, 3)), std::cbrt(2.0), 1e-15);
  EXPECT_THROW(mb::lp_norm_p(chi(), 1), std::invalid_argument);
  EXPECT_THROW(mb::lp_norm_p(chi(), 0.5), std::invalid_argument);
}

TEST(LpNorm, Homogeneous) {
  mb::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto f = mb::random_step(rng, {});
    Rational c = mb::ratio(mb::uniform_int(rng, 1, 100), mb::uniform_int(rng, 1, 30));
    long double p = 1.05L + 4 * mb::uniform01(rng);
    long double lhs = mb::lp_norm_p(mb::scale(f, c), p);
    long double rhs = mb::to_long_double(c) * mb::lp_norm_p(f, p);
    ASSERT_NEAR(static_cast<double>(lhs / rhs), 1.0, 1e-12);
  }
}

TEST(LevelSets, Examples) {
  EXPECT_EQ(mb::level_measure(chi(), Rational(1, 2)), 1);
  EXPECT_EQ(mb::level_measure(chi(), Rational(1)), 0);
  EXPECT_EQ(mb::level_measure(two_level(), Rational(3, 2)), 1);
  EXPECT_EQ(mb::integral_over_superlevel(chi(), Rational(1, 2)), 1);
  EXPECT_EQ(mb::integral_over_superlevel(chi(), Rational(2)), 0);
  EXPECT_EQ(mb::integral_over_superlevel(two_level(), Rational(3, 2)), 2);
  EXPECT_THROW(mb::level_measure(chi(), Rational(-1)), std::invalid_argument);
  EXPECT_THROW(mb::integral_over_superlevel(chi(), Rational(-1, 3)), std::invalid_argument);
}

TEST(LevelSets, NonIncreasingInLambda) {
  mb::Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    auto f = mb::random_step(rng, {});
    EXPECT_EQ(mb::integral_over_superlevel(f, Rational(0)), mb::PrefixIntegral(f).total());
    Rational prev_m = mb::level_measure(f, Rational(0));
    Rational prev_i = mb::integral_over_superlevel(f, Rational(0));
    for (int k = 1; k <= 40; ++k) {
      Rational lambda = mb::ratio(k, 8);
      Rational m = mb::level_measure(f, lambda);
      Rational i = mb::integral_over_superlevel(f, lambda);
      ASSERT_LE(m, prev_m);
      ASSERT_LE(i, prev_i);
      prev_m = m;
      prev_i = i;
    }
  }
}

TEST(PrefixIntegral, ConstantOutsideSupport) {
  mb::PrefixIntegral I(two_level());
  EXPECT_EQ(I(Rational(-5)), 0);
  EXPECT_EQ(I(Rational(1, 2)), 1);
  EXPECT_EQ(I(Rational(2)), 3);
  EXPECT_EQ(I(Rational(100)), 4);
  EXPECT_EQ(I.total(), 4);
}

TEST(TextFormat, RoundTripsRandomFunctions) {
  mb::Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = mb::random_step(rng, {});
    ASSERT_EQ(mb::parse_stepfn(mb::format_stepfn(f)), f);
  }
  EXPECT_EQ(mb::format_stepfn(two_level()), "stepfn v1\n0 1 3\n2 1\n");
  EXPECT_TRUE(mb::parse_stepfn("stepfn v1\n\n\n").is_zero());
}

TEST(TextFormat, ParsesRationalsAndRejectsGarbage) {
  auto f = mb::parse_stepfn("stepfn v1\n-1/2 3/4 2\n5/3 1\n");
  EXPECT_EQ(f.breakpoints()[0], Rational(-1, 2));
  EXPECT_EQ(f.values()[0], Rational(5, 3));
  EXPECT_THROW(mb::parse_stepfn("stepfn v2\n0 1\n1\n"), std::invalid_argument);
  EXPECT_THROW(mb::parse_stepfn("stepfn v1\n0 1\n"), std::invalid_argument);
  EXPECT_THROW(mb::parse_stepfn("stepfn v1\n0 x\n1\n"), std::invalid_argument);
  EXPECT_THROW(mb::parse_stepfn("stepfn v1\n0 1/0\n1\n"), std::invalid_argument);
  EXPECT_THROW(mb::parse_rational("1.5"), std::invalid_argument);
  EXPECT_EQ(mb::parse_rational("+6/4"), Rational(3, 2));
}

TEST(Rational, FloorDyadic) {
  EXPECT_EQ(mb::floor_dyadic(Rational(1, 3), 2), Rational(1, 4));
  EXPECT_EQ(mb::floor_dyadic(Rational(-1, 3), 2), Rational(-1, 2));
  EXPECT_EQ(mb::floor_dyadic(Rational(3, 8), 3), Rational(3, 8));
}

}  // namespace
