#include <gtest/gtest.h>

#include <cmath>

#include "dunkl/grid.hpp"
#include "dunkl/report.hpp"
#include "dunkl/thinsets.hpp"

using namespace dunkl;

TEST(Rho, Examples) {
  EXPECT_EQ(rho(0.0), 1.0);
  EXPECT_EQ(rho(0.5), 1.0);
  EXPECT_EQ(rho(4.0), 0.25);
  EXPECT_EQ(rho(-4.0), 0.25);
}

TEST(SetUnion, ConstructionAndValidation) {
  const SetUnion s = SetUnion::intervals({{5.0, 6.0}, {1.0, 2.0}});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.pieces()[0].lo[0], 1.0);
  EXPECT_TRUE(s.contains(1.5));
  EXPECT_FALSE(s.contains(3.0));
  EXPECT_THROW(SetUnion::intervals({{2.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(SetUnion::intervals({{0.0, 2.0}, {1.0, 3.0}}), std::invalid_argument);
}

TEST(SetUnion, MeasureMatchesAntiderivative) {
  const SetUnion s = SetUnion::intervals({{-2.0, -1.0}, {1.0, 3.0}});
  // 2 int_1^2 x^2 + 2 int_1^3 x^2 at k = 1.
  EXPECT_NEAR(s.measure(RootSystemConfig::rank_one(1.0)), 2.0 * (7.0 / 3.0) + 2.0 * (26.0 / 3.0), 1e-12);
  EXPECT_NEAR(s.measure(RootSystemConfig::rank_one(0.0)), 3.0, 1e-15);
}

TEST(SetUnion, JsonRoundTrip) {
  const SetUnion s = SetUnion::intervals({{-2.0, -1.0}, {1.0, 3.0}});
  EXPECT_EQ(SetUnion::from_json(s.to_json()).pieces(), s.pieces());
}

TEST(Dilate, Examples) {
  const SetUnion s = SetUnion::intervals({{1.0, 2.0}, {5.0, 6.0}});
  EXPECT_EQ(dilate(s, 1.0).pieces(), s.pieces());
  EXPECT_EQ(dilate(s, 2.0).pieces(), SetUnion::intervals({{2.0, 4.0}, {10.0, 12.0}}).pieces());
  EXPECT_THROW(dilate(s, 0.0), std::invalid_argument);
}

TEST(ThinnessCheck, EmptyAndFullSets) {
  const RootSystemConfig cfg = RootSystemConfig::rank_one(1.0);
  EXPECT_EQ(thinness_check(SetUnion::empty(), cfg, 10.0).epsilon_hat, 0.0);
  EXPECT_NEAR(thinness_check(SetUnion::intervals({{-12.0, 12.0}}), cfg, 10.0).epsilon_hat, 1.0, 1e-12);
}

// Lebesgue density of [-1/4, 1/4] in B(x, rho(x)) is 1/4 on the plateau |x| <= 3/4 and smaller elsewhere.
TEST(ThinnessCheck, ExactOnSingleInterval) {
  const SetUnion s = SetUnion::intervals({{-0.25, 0.25}});
  EXPECT_NEAR(thinness_check(s, RootSystemConfig::rank_one(0.0), 5.0).epsilon_hat, 0.25, 1e-12);
  // k = 1 at x = 0: (2/3)(1/4)^3 / ((2/3) 1^3).
  EXPECT_NEAR(density_ratio(s, 0.0, 1.0), 0.015625, 1e-15);
  EXPECT_NEAR(density_ratio(s, 10.0, 1.0), 0.0, 0.0);
}

TEST(ThinnessCheck, ReflectionInvariant) {
  const RootSystemConfig cfg = RootSystemConfig::rank_one(1.0);
  const SetUnion s = SetUnion::intervals({{0.9, 1.1}, {3.95, 4.02}});
  EXPECT_NEAR(thinness_check(s, cfg, 10.0).epsilon_hat, thinness_check(s.reflected(), cfg, 10.0).epsilon_hat, 1e-14);
}

TEST(GenerateComb, CertifiesTargets) {
  const CombResult k0 = generate_comb(0.1, 50, RootSystemConfig::rank_one(0.0), 0xD01C);
  EXPECT_LE(k0.report.epsilon_hat, 0.1);
  for (double eps : {0.025, 0.05, 0.1}) {
    const CombResult r = generate_comb(eps, 11, RootSystemConfig::rank_one(1.0), 0xD01C);
    EXPECT_LE(r.report.epsilon_hat, eps);
    EXPECT_GT(r.report.epsilon_hat, 0.0);
    EXPECT_EQ(r.set.size(), 22u);
    // Symmetric by construction; the independent checker sees the same density.
    EXPECT_EQ(r.set.reflected().pieces(), r.set.pieces());
  }
}

TEST(GenerateComb, DeterministicForSeed) {
  const RootSystemConfig cfg = RootSystemConfig::rank_one(1.0);
  EXPECT_EQ(generate_comb(0.05, 11, cfg, 7).set.pieces(), generate_comb(0.05, 11, cfg, 7).set.pieces());
  EXPECT_NE(generate_comb(0.05, 11, cfg, 7).set.pieces(), generate_comb(0.05, 11, cfg, 8).set.pieces());
}

TEST(GenerateComb, ErrorsAreReported) {
  const RootSystemConfig cfg = RootSystemConfig::rank_one(1.0);
  EXPECT_THROW(generate_comb(0.0, 11, cfg, 1), std::invalid_argument);
  EXPECT_THROW(generate_comb(0.05, 0, cfg, 1), std::invalid_argument);
  CombOptions stuck;
  stuck.width_scale = 50.0;
  stuck.max_iterations = 1;
  EXPECT_THROW(generate_comb(0.01, 11, cfg, 1, stuck), ConvergenceError);
}

TEST(NodeMask, MarksMembers) {
  const GridPtr g = QuadratureGrid::build(4.0, 128, RootSystemConfig::rank_one(1.0));
  const SetUnion s = SetUnion::intervals({{1.0, 2.0}});
  const Eigen::VectorXd m = node_mask(*g, s);
  for (int i = 0; i < g->size(); ++i) EXPECT_EQ(m[i], s.contains(g->x(i)) ? 1.0 : 0.0);
}
