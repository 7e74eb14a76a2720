#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "dunkl/grid.hpp"
#include "dunkl/measure.hpp"

using namespace dunkl;

namespace {

// c_h^{-1} = prod_j 2^{2k_j + 1/2} Gamma(k_j + 1/2).
double normalization_oracle(const std::vector<double>& ks) {
  double inv = 1.0;
  for (double k : ks) inv *= std::pow(2.0, 2.0 * k + 0.5) * std::tgamma(k + 0.5);
  return 1.0 / inv;
}

// mu_k([a, b]) for a single axis by the power antiderivative of 2^k |t|^{2k}.
double interval_oracle(double a, double b, double k) {
  auto F = [k](double t) { return std::copysign(std::pow(2.0, k) * std::pow(std::abs(t), 2 * k + 1) / (2 * k + 1), t); };
  return F(b) - F(a);
}

}  // namespace

TEST(Measure, WeightDensityExamples) {
  const std::vector<double> x1{3.7};
  EXPECT_DOUBLE_EQ(weight_density(x1, RootSystemConfig::rank_one(0.0)), 1.0);
  const std::vector<double> x2{2.0};
  EXPECT_NEAR(weight_density(x2, RootSystemConfig::rank_one(1.0)), 8.0, 1e-14);
  const std::vector<double> x3{1.0, 1.0};
  EXPECT_NEAR(weight_density(x3, RootSystemConfig({1.0, 0.5})), 2.0 * std::sqrt(2.0), 1e-14);
}

TEST(Measure, NormalizationConstantMatchesClosedForm) {
  EXPECT_NEAR(normalization_constant(RootSystemConfig::rank_one(0.0)), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-15);
  for (double k : {0.0, 0.5, 1.0, 2.5, 3.0}) {
    const RootSystemConfig cfg = RootSystemConfig::rank_one(k);
    EXPECT_NEAR(normalization_constant(cfg), normalization_oracle({k}), 1e-14) << "k=" << k;
    EXPECT_NEAR(normalization_constant_quadrature(cfg), normalization_oracle({k}), 1e-10) << "k=" << k;
  }
  EXPECT_NEAR(normalization_constant(RootSystemConfig({1.0, 0.5})), normalization_oracle({1.0, 0.5}), 1e-14);
}

TEST(Measure, IntervalMeasureMatchesAntiderivative) {
  for (double k : {0.0, 0.5, 1.0, 2.5}) {
    EXPECT_NEAR(interval_measure(-1.0, 2.0, k), interval_oracle(-1.0, 2.0, k), 1e-12);
    EXPECT_NEAR(interval_measure(9.0, 11.0, k), interval_oracle(9.0, 11.0, k), 1e-9 * interval_oracle(9.0, 11.0, k));
  }
}

TEST(Measure, BallMeasureExamples) {
  const std::vector<double> zero{0.0};
  const std::vector<double> ten{10.0};
  EXPECT_NEAR(ball_measure(zero, 1.0, RootSystemConfig::rank_one(0.0)), 2.0, 1e-14);
  EXPECT_NEAR(ball_measure(zero, 1.0, RootSystemConfig::rank_one(1.0)), 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(ball_measure(ten, 1.0, RootSystemConfig::rank_one(1.0)), 2.0 * (1331.0 - 729.0) / 3.0, 1e-10);
}

TEST(Measure, BallComparabilityIsLebesgueAtKZero) {
  for (double x : {0.0, 1.0, 7.5}) {
    const std::vector<double> p{x};
    const BallComparability b = ball_measure_bound(p, 0.7, RootSystemConfig::rank_one(0.0));
    EXPECT_NEAR(b.measure / 0.7, 2.0, 1e-13);
  }
}

TEST(Measure, BallComparabilityRatioBoundedForPositiveK) {
  double lo = 1e300;
  double hi = 0.0;
  for (double x : {0.0, 0.3, 1.0, 4.0, 20.0}) {
    for (double r : {0.01, 0.5, 1.0, 10.0}) {
      const std::vector<double> p{x};
      const double ratio = ball_measure_bound(p, r, RootSystemConfig::rank_one(1.5)).ratio;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi / lo, 100.0);
}

TEST(Grid, GaussLegendreMatchesBoost) {
  using Rule = boost::math::quadrature::gauss<double, 16>;
  const auto& gl = gauss_legendre(16);
  // Boost stores the non-negative half of the symmetric rule.
  for (std::size_t i = 0; i < Rule::abscissa().size(); ++i) {
    const double a = Rule::abscissa()[i];
    const double w = Rule::weights()[i];
    bool found = false;
    for (int q = 0; q < 16; ++q) {
      if (std::abs(gl.nodes[q] - a) < 1e-15) {
        EXPECT_NEAR(gl.weights[q], w, 1e-15);
        found = true;
      }
    }
    EXPECT_TRUE(found) << "abscissa " << a;
  }
}

TEST(Grid, WeightSumsMatchMeasure) {
  const GridPtr g0 = QuadratureGrid::build(1.0, 64, RootSystemConfig::rank_one(0.0));
  EXPECT_NEAR(g0->weights().sum(), 2.0, 1e-12);
  const GridPtr g1 = QuadratureGrid::build(1.0, 256, RootSystemConfig::rank_one(1.0));
  EXPECT_NEAR(g1->weights().sum(), 4.0 / 3.0, 1e-8);
}

TEST(Grid, MirrorSymmetricNodes) {
  const GridPtr g = QuadratureGrid::build(12.0, 1024, RootSystemConfig::rank_one(1.0));
  for (int i = 0; i < g->size(); ++i) {
    EXPECT_EQ(g->x(g->size() - 1 - i), -g->x(i));
    EXPECT_EQ(g->weight(g->size() - 1 - i), g->weight(i));
  }
}

TEST(Grid, DeterministicBuild) {
  const RootSystemConfig cfg = RootSystemConfig::rank_one(1.0);
  const GridPtr a = QuadratureGrid::build(12.0, 512, cfg);
  const GridPtr b = QuadratureGrid::build(12.0, 512, cfg);
  ASSERT_EQ(a->size(), b->size());
  for (int i = 0; i < a->size(); ++i) {
    EXPECT_EQ(a->x(i), b->x(i));
    EXPECT_EQ(a->weight(i), b->weight(i));
  }
  EXPECT_TRUE(same_grid(a, b));
}

TEST(Grid, JsonRoundTrip) {
  GridOptions opt;
  opt.breakpoints = {1.5, 3.25};
  const GridPtr a = QuadratureGrid::build(12.0, 512, RootSystemConfig::rank_one(0.5), opt);
  const GridPtr b = QuadratureGrid::from_json(a->to_json());
  EXPECT_TRUE(*a == *b);
}

TEST(Grid, RejectsBadSizes) {
  const RootSystemConfig cfg = RootSystemConfig::rank_one(1.0);
  EXPECT_THROW(QuadratureGrid::build(12.0, 100, cfg), std::invalid_argument);
  EXPECT_THROW(QuadratureGrid::build(-1.0, 128, cfg), std::invalid_argument);
  EXPECT_THROW(QuadratureGrid::build(12.0, 0, cfg), std::invalid_argument);
}
