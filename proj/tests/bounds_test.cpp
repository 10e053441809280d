#include <gtest/gtest.h>

#include <random>

#include "eedecide/bounds.hpp"
#include "oracles.hpp"

namespace eedecide {
namespace {

EeBounds hm0() { return {"horowitz-manski", 0.0, 5.4, 10.7, 6.1, 12.0}; }
EeBounds lee0() { return {"lee", 0.0, 7.9, 7.9, 7.5, 8.7}; }
EeBounds cf0() { return {"chen-flores", 0.0, 7.9, 7.9, 8.3, 8.7}; }
EeBounds hm2() { return {"horowitz-manski", 2.0, 4.1, 9.0, 3.8, 8.6}; }
EeBounds lee2() { return {"lee", 2.0, 6.6, 6.6, 6.5, 7.7}; }
EeBounds cf2() { return {"chen-flores", 2.0, 6.6, 6.6, 6.8, 7.7}; }

TEST(Bounds, Validation) {
  EXPECT_THROW(assign_from_bounds({"x", 0.0, 5.0, 4.0, 1.0, 2.0}), ArgumentError);
  EXPECT_THROW(assign_from_bounds({"x", -1.0, 1.0, 2.0, 1.0, 2.0}), ArgumentError);
  EXPECT_THROW(assign_from_bounds({"x", 0.0, 0.0, 2.0, 1.0, 2.0}), ArgumentError);
}

TEST(BoundsToStates, Examples) {
  const auto hm = bounds_to_states(hm0());
  ASSERT_EQ(hm.size(), 2u);
  EXPECT_EQ(hm[0].ee_a, 10.7);
  EXPECT_EQ(hm[0].ee_b, 6.1);
  EXPECT_EQ(hm[1].ee_a, 5.4);
  EXPECT_EQ(hm[1].ee_b, 12.0);
  const auto ext = extreme_states(hm);
  EXPECT_EQ(ext.worst.ee_a, 5.4);
  EXPECT_EQ(ext.worst.ee_b, 6.1);
  const auto lee = bounds_to_states(lee2());
  EXPECT_EQ(lee[0].ee_a, 6.6);
  EXPECT_EQ(lee[0].ee_b, 6.5);
  EXPECT_EQ(lee[1].ee_b, 7.7);
  const auto flat = bounds_to_states({"x", 1.0, 3.0, 3.0, 4.0, 4.0});
  EXPECT_EQ(flat[0].ee_a, flat[1].ee_a);
  EXPECT_EQ(flat[0].ee_b, flat[1].ee_b);
}

// Exact regret equalization on the two-decimal bounds. The reference table
// rounds some cells differently (0.66 for 2/3, 0.42 and 0.95 below).
TEST(AssignFromBounds, ReferenceCells) {
  EXPECT_NEAR(assign_from_bounds(hm0()).delta, 0.59, 0.005);
  EXPECT_NEAR(assign_from_bounds(hm0()).delta, 0.5892857142857143, 1e-10);
  EXPECT_NEAR(assign_from_bounds(lee0()).delta, 2.0 / 3.0, 1e-10);
  EXPECT_EQ(assign_from_bounds(cf0()).delta, 1.0);
  EXPECT_NEAR(assign_from_bounds(hm2()).delta, 0.4271, 5e-5);
  EXPECT_NEAR(assign_from_bounds(lee2()).delta, 0.9268, 5e-5);
  EXPECT_EQ(assign_from_bounds(cf2()).delta, 1.0);
}

TEST(AssignFromBounds, MatchesGridOracle) {
  for (const auto& b : {hm0(), lee0(), hm2(), lee2()}) {
    const double grid = oracle::grid_minimax_regret(
        b.gamma, {{b.ee_a_high, b.ee_b_low}, {b.ee_a_low, b.ee_b_high}});
    EXPECT_NEAR(assign_from_bounds(b).delta, grid, 2e-6) << b.scheme << " " << b.gamma;
  }
}

TEST(AssignAll, KeepsRowOrder) {
  const auto results = assign_all({hm0(), cf2()});
  ASSERT_EQ(results.size(), 2u);
  EXPECT_LT(results[0].delta, 1.0);
  EXPECT_EQ(results[1].delta, 1.0);
}

TEST(WorstRegret, Decomposition) {
  const auto [ra0, rb0] = worst_regret_decomposition(hm0());
  EXPECT_NEAR(ra0, 4.6, 0.05);
  EXPECT_NEAR(rb0, 6.6, 0.05);
  const auto [ra2, rb2] = worst_regret_decomposition(hm2());
  EXPECT_NEAR(ra2, 5.2, 0.05);
  EXPECT_NEAR(rb2, 4.5, 0.05);
  const auto [rz_a, rz_b] = worst_regret_decomposition({"x", 1.0, 3.0, 3.0, 3.0, 3.0});
  EXPECT_EQ(rz_a, 0.0);
  EXPECT_EQ(rz_b, 0.0);
}

TEST(WorstRegret, EndpointsOfRegretCurves) {
  for (const auto& b : {hm0(), hm2()}) {
    const auto rows = regret_profile(WelfareSpec(b.gamma), bounds_to_states(b), 2);
    const auto [ra, rb] = worst_regret_decomposition(b);
    EXPECT_NEAR(rows[1].regret_a, ra, 1e-12);
    EXPECT_NEAR(rows[0].regret_b, rb, 1e-12);
  }
}

class BoundsProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{1618};
  std::uniform_real_distribution<double> level{1.0, 20.0};
  std::uniform_real_distribution<double> gamma_dist{0.0, 5.0};

  EeBounds random_bounds() {
    double a_lo = level(rng), a_hi = level(rng), b_lo = level(rng), b_hi = level(rng);
    if (a_lo > a_hi) std::swap(a_lo, a_hi);
    if (b_lo > b_hi) std::swap(b_lo, b_hi);
    return {"r", gamma_dist(rng), a_lo, a_hi, b_lo, b_hi};
  }
};

TEST_F(BoundsProperties, SameSignShortcut) {
  for (int i = 0; i < 500; ++i) {
    auto b = random_bounds();
    const double width = b.ee_b_high - b.ee_b_low;
    b.ee_b_low = b.ee_a_high + 0.01 + level(rng) / 10;
    b.ee_b_high = b.ee_b_low + width;
    for (double g : {0.0, 0.5, 1.0, 2.0, 5.0}) {
      b.gamma = g;
      EXPECT_EQ(assign_from_bounds(b).delta, 1.0);
    }
    b.ee_b_high = b.ee_a_low * 0.99;
    b.ee_b_low = b.ee_b_high * 0.5;
    for (double g : {0.0, 0.5, 1.0, 2.0, 5.0}) {
      b.gamma = g;
      EXPECT_EQ(assign_from_bounds(b).delta, 0.0);
    }
  }
}

TEST_F(BoundsProperties, MonotoneResponse) {
  for (int i = 0; i < 1000; ++i) {
    const auto b = random_bounds();
    const double d = assign_from_bounds(b).delta;
    auto up_b = b;
    up_b.ee_b_low = b.ee_b_low + (b.ee_b_high - b.ee_b_low) * 0.5;
    EXPECT_GE(assign_from_bounds(up_b).delta, d - 1e-12) << "case " << i;
    auto up_a = b;
    up_a.ee_a_high = b.ee_a_high + level(rng) / 4;
    EXPECT_LE(assign_from_bounds(up_a).delta, d + 1e-12) << "case " << i;
  }
}

// Strict concavity of the mixture rules out parallel regret curves: whenever
// the bounds overlap the solution is interior and the regrets are equal.
TEST_F(BoundsProperties, InteriorSolutionsEqualizeRegret) {
  for (int i = 0; i < 500; ++i) {
    const auto b = random_bounds();
    if (b.ee_b_high <= b.ee_a_low || b.ee_b_low >= b.ee_a_high) continue;
    const auto r = assign_from_bounds(b);
    EXPECT_GT(r.delta, 0.0);
    EXPECT_LT(r.delta, 1.0);
    const auto ss = bounds_to_states(b);
    const WelfareSpec spec(b.gamma);
    EXPECT_NEAR(regret_a(spec, ss[0], r.delta), regret_b(spec, ss[1], r.delta),
                1e-10 * b.ee_b_high);
  }
}

}  // namespace
}  // namespace eedecide
