#pragma once

#include <array>

namespace dunkl {

/// Normalized Bessel function j_nu(w) = 2^nu Gamma(nu+1) J_nu(w) / w^nu,
/// j_nu(0) = 1, for nu >= -1/2.
///
/// |w| <= 20: the power series sum_m (-w^2/4)^m / (m! (nu+1)_m) summed in
/// extended precision (the alternating terms reach ~1e7 at |w| = 20).
/// |w| > 20: Hankel's large-argument expansion truncated after 12 terms.
class NormalizedBessel {
 public:
  static constexpr double kCrossover = 20.0;
  static constexpr int kAsymptoticTerms = 12;

  explicit NormalizedBessel(double nu);

  double nu() const { return nu_; }
  double operator()(double w) const;
  double series(double w) const;
  double asymptotic(double w) const;

 private:
  double nu_;
  double prefactor_;  // 2^nu Gamma(nu+1) sqrt(2/pi)
  std::array<double, kAsymptoticTerms> hankel_{};
};

/// Normalized modified Bessel function i_nu(w) = j_nu(i w)
/// = sum_m (w^2/4)^m / (m! (nu+1)_m). Positive-term series; no cancellation.
class NormalizedModifiedBessel {
 public:
  explicit NormalizedModifiedBessel(double nu);
  double operator()(double w) const;

 private:
  double nu_;
};

double bessel_j_normalized(double nu, double w);
double bessel_i_normalized(double nu, double w);

}  // namespace dunkl
