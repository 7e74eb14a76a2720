#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "dunkl/bessel.hpp"
#include "dunkl/kernel.hpp"

using namespace dunkl;
using namespace std::complex_literals;

namespace {

// j_nu(w) = Gamma(nu + 1) (2 / w)^nu J_nu(w).
double bessel_oracle(double nu, double w) {
  if (w == 0.0) return 1.0;
  return std::tgamma(nu + 1.0) * std::pow(2.0 / w, nu) * boost::math::cyl_bessel_j(nu, w);
}

}  // namespace

TEST(Bessel, HalfIntegerClosedForms) {
  EXPECT_NEAR(bessel_j_normalized(0.5, 1.0), std::sin(1.0), 1e-15);
  EXPECT_NEAR(bessel_j_normalized(-0.5, 2.0), std::cos(2.0), 1e-15);
  EXPECT_NEAR(bessel_j_normalized(1.5, 1.0), 3.0 * (std::sin(1.0) - std::cos(1.0)), 1e-14);
}

// The power series below the regime switch cancels terms of size e^w / w, which costs a few digits near w = 20.
TEST(Bessel, MatchesBoostOverBothRegimes) {
  for (double nu : {-0.5, 0.0, 0.5, 1.0, 1.5, 2.5, 3.5}) {
    for (double w : {0.0, 0.1, 1.0, 5.0, 12.0, 19.9, 20.1, 35.0, 80.0, 200.0}) {
      const double ref = bessel_oracle(nu, w);
      EXPECT_NEAR(bessel_j_normalized(nu, w), ref, 1e-11 * std::max(1.0, std::abs(ref))) << "nu=" << nu << " w=" << w;
    }
  }
}

TEST(Bessel, ModifiedMatchesBoost) {
  for (double nu : {-0.5, 0.5, 1.5}) {
    for (double w : {0.0, 1.0, 5.0, 15.0}) {
      const double ref = w == 0.0 ? 1.0 : std::tgamma(nu + 1.0) * std::pow(2.0 / w, nu) * boost::math::cyl_bessel_i(nu, w);
      EXPECT_NEAR(bessel_i_normalized(nu, w), ref, 1e-13 * ref);
    }
  }
}

TEST(Bessel, RejectsOrderBelowMinusHalf) {
  EXPECT_THROW(NormalizedBessel(-0.6), std::invalid_argument);
}

TEST(KernelSeries, Examples) {
  EXPECT_NEAR(dunkl_kernel_series_converged(1.0, 1.0, 0.0).value.real(), std::numbers::e, 1e-15);
  EXPECT_NEAR(dunkl_kernel_series_converged(0.0, 3.0 + 2i, 1.7).value.real(), 1.0, 0.0);
  // 1 + 1/3 + 1/6 + 1/30 + 1/120 + ...
  EXPECT_NEAR(dunkl_kernel_series_converged(1.0, 1.0, 1.0).value.real(), 1.5430806348152437, 1e-15);
}

TEST(KernelSeries, TruncationBoundIsHonest) {
  const auto full = dunkl_kernel_series_converged(2.0, -3i, 1.0);
  const auto partial = dunkl_kernel_series(2.0, -3i, 1.0, 20);
  EXPECT_LE(std::abs(full.value - partial.value), partial.truncation_bound * (1 + 1e-12) + 1e-16);
}

TEST(Kernel, Examples) {
  const RootSystemConfig k0 = RootSystemConfig::rank_one(0.0);
  const RootSystemConfig k1 = RootSystemConfig::rank_one(1.0);
  const std::vector<double> pi{std::numbers::pi}, one{1.0};
  EXPECT_NEAR(std::abs(dunkl_kernel(pi, one, k0, KernelMode::minus_i) + 1.0), 0.0, 1e-15);
  EXPECT_NEAR(dunkl_kernel(one, one, k1, KernelMode::plain).real(), 1.5430806348152437, 1e-14);
  const std::vector<double> x{1.0, 2.0}, y{3.0, 4.0};
  EXPECT_NEAR(std::abs(dunkl_kernel(x, y, RootSystemConfig({0.0, 0.0}), KernelMode::minus_i) - std::exp(-11i)),
              0.0, 1e-14);
}

TEST(Kernel, ClosedFormMatchesSeriesOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0), kk(0.0, 3.0);
  for (int s = 0; s < 500; ++s) {
    const double k = kk(rng);
    const double x = 4.5 * u(rng);
    const double y = u(rng) * std::min(4.5, 20.0 / std::abs(x));
    const Rank1Kernel K(k);
    const auto ref = dunkl_kernel_series_converged(x, -1i * y, k).value;
    EXPECT_NEAR(std::abs(K.minus_i(x, y) - ref), 0.0, 1e-10) << x << " " << y << " " << k;
    const double plain_ref = dunkl_kernel_series_converged(x, y, k).value.real();
    EXPECT_NEAR(K.plain(x, y), plain_ref, 1e-10 * std::max(1.0, std::abs(plain_ref)));
  }
}

TEST(Kernel, EvenOddPartsRecombine) {
  const Rank1Kernel K(1.3);
  double even = 0.0, odd = 0.0;
  K.minus_i_parts(2.1, -0.7, even, odd);
  EXPECT_NEAR(std::abs(std::complex<double>(even, -odd) - K.minus_i(2.1, -0.7)), 0.0, 1e-15);
}

TEST(Kernel, SymmetryScalingReflection) {
  const RootSystemConfig cfg = RootSystemConfig::rank_one(0.8);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int s = 0; s < 200; ++s) {
    const std::vector<double> x{u(rng)}, y{u(rng)};
    const std::vector<double> mx{-x[0]}, lx{1.7 * x[0]}, ly{1.7 * y[0]};
    const auto e = dunkl_kernel(x, y, cfg, KernelMode::minus_i);
    EXPECT_NEAR(std::abs(dunkl_kernel(y, x, cfg, KernelMode::minus_i) - e), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(dunkl_kernel(lx, y, cfg, KernelMode::minus_i) - dunkl_kernel(x, ly, cfg, KernelMode::minus_i)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(dunkl_kernel(mx, y, cfg, KernelMode::minus_i) - std::conj(e)), 0.0, 1e-12);
    EXPECT_LE(std::abs(e), 1.0 + 1e-14);
  }
}

TEST(Kernel, RegimeReportedAtLargeArgument) {
  const RootSystemConfig cfg = RootSystemConfig::rank_one(1.0);
  const std::vector<double> small{0.5}, big{40.0};
  EXPECT_EQ(evaluate_kernel(small, small, cfg, KernelMode::minus_i).regime, KernelRegime::closed_form);
  EXPECT_EQ(evaluate_kernel(big, big, cfg, KernelMode::minus_i).regime, KernelRegime::asymptotic);
}

// Dunkl operator T f(x) = f'(x) + k (f(x) - f(-x)) / x; T E(., y) = y E(., y).
TEST(Kernel, DefiningEquationResidualIsFourthOrder) {
  const double k = 1.0, x = 0.7, y = 1.3;
  const Rank1Kernel K(k);
  auto residual = [&](double h) {
    auto E = [&](double t) { return K.plain(t, y); };
    const double d = (-E(x + 2 * h) + 8 * E(x + h) - 8 * E(x - h) + E(x - 2 * h)) / (12 * h);
    return std::abs(d + k * (E(x) - E(-x)) / x - y * E(x));
  };
  const double r1 = residual(0.04);
  const double r2 = residual(0.02);
  EXPECT_LT(r1, 1e-5);
  EXPECT_NEAR(std::log2(r1 / r2), 4.0, 0.3);
}

TEST(Kernel, ModeParsing) {
  EXPECT_EQ(kernel_mode_from_string("plain"), KernelMode::plain);
  EXPECT_EQ(kernel_mode_from_string("minus_i"), KernelMode::minus_i);
  EXPECT_THROW(kernel_mode_from_string("bogus"), std::invalid_argument);
}
