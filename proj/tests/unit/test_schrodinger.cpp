#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "dunkl/grid.hpp"
#include "dunkl/schrodinger.hpp"

using namespace dunkl;
using namespace std::complex_literals;

namespace {

GridPtr make_grid(double k, int n = 1024) { return QuadratureGrid::build(12.0, n, RootSystemConfig::rank_one(k)); }

SampledFunction gaussian(const GridPtr& g) {
  return SampledFunction::sample_1d(g, [](double x) { return cplx(std::exp(-0.5 * x * x), 0.0); });
}

// Solution from u0 = e^{-x^2/2}: (1 + 2it)^{-(gamma + 1/2)} e^{-x^2 / (2 (1 + 2it))}.
SampledFunction exact(const GridPtr& g, double t) {
  const double gamma = g->config().gamma();
  const std::complex<double> den = 1.0 + 2i * t;
  return SampledFunction::sample_1d(
      g, [&](double x) { return std::pow(den, -(gamma + 0.5)) * std::exp(-0.5 * x * x / den); });
}

}  // namespace

TEST(Schrodinger, MultiplierAtTimeZeroIsIdentity) {
  const GridPtr g = make_grid(1.0);
  const SampledFunction u0 = gaussian(g);
  EXPECT_LT((propagate_multiplier(u0, 0.0) - u0).max_abs(), 1e-9);
}

TEST(Schrodinger, ClassicalModulusAtKZero) {
  const GridPtr g = make_grid(0.0);
  const SampledFunction u0 = gaussian(g);
  const TransformPtr op = TransformOperator::build(g);
  for (double t : {0.25, 0.5, 1.0}) {
    const SampledFunction u = propagate_multiplier(u0, t, op);
    for (int i = 0; i < g->size(); ++i) {
      const double x = g->x(i);
      const double expect = std::exp(-x * x / (1 + 4 * t * t)) / std::sqrt(1 + 4 * t * t);
      EXPECT_NEAR(std::norm(u[i]), expect, 1e-6);
    }
  }
}

TEST(Schrodinger, BothRoutesMatchExactGaussian) {
  for (double k : {0.0, 1.0}) {
    const GridPtr g = make_grid(k);
    const SampledFunction u0 = gaussian(g);
    const TransformPtr op = TransformOperator::build(g);
    for (double t : {0.3, 1.0}) {
      const SampledFunction ref = exact(g, t);
      EXPECT_LT((propagate_multiplier(u0, t, op) - ref).norm() / u0.norm(), 1e-6) << "k=" << k << " t=" << t;
      EXPECT_LT((propagate_explicit(u0, t) - ref).norm() / u0.norm(), 1e-6) << "k=" << k << " t=" << t;
    }
  }
}

TEST(Schrodinger, NormConservation) {
  const GridPtr g = make_grid(1.0);
  const SampledFunction u0 = SampledFunction::sample_1d(g, [](double x) { return (1.0 + 0.3 * x) * std::exp(-0.4 * x * x); });
  for (PropagatorMethod m : {PropagatorMethod::explicit_formula, PropagatorMethod::multiplier}) {
    const PropagatorState s = propagate(u0, 0.7, m);
    EXPECT_EQ(s.method, m);
    EXPECT_NEAR(s.u.norm_squared() / u0.norm_squared(), 1.0, 1e-8) << to_string(m);
  }
}

TEST(Schrodinger, SmallTimeContinuityIsMonotone) {
  const GridPtr g = make_grid(1.0, 512);
  const TransformPtr op = TransformOperator::build(g);
  const SampledFunction u0 = gaussian(g);
  double prev = 1e300;
  for (int m = 1; m <= 8; ++m) {
    const double d = (propagate_multiplier(u0, std::ldexp(1.0, -m), op) - u0).norm();
    EXPECT_LT(d, prev) << "m=" << m;
    prev = d;
  }
}

TEST(Schrodinger, ExplicitRejectsTimesBelowFloor) {
  const GridPtr g = make_grid(1.0, 256);
  const SampledFunction u0 = gaussian(g);
  EXPECT_NEAR(explicit_time_floor(*g), 4.0 * 12.0 / (256 * std::numbers::pi), 1e-15);
  EXPECT_THROW(propagate_explicit(u0, 0.0), std::invalid_argument);
  EXPECT_THROW(propagate_explicit(u0, 0.5 * explicit_time_floor(*g)), std::invalid_argument);
}

TEST(Schrodinger, ChirpAliasingFlagAtSmallTime) {
  const GridPtr g = make_grid(1.0, 1024);
  EXPECT_TRUE(chirp_aliasing(*g, 0.03));
  EXPECT_FALSE(chirp_aliasing(*g, 2.0));
}
