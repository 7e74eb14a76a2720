#include "dunkl/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dunkl {

NormalizedBessel::NormalizedBessel(double nu) : nu_(nu) {
  if (!(nu >= -0.5)) throw std::invalid_argument("NormalizedBessel: nu must be >= -1/2");
  prefactor_ = std::pow(2.0, nu) * std::tgamma(nu + 1.0) * std::sqrt(2.0 / std::numbers::pi);
  // a_m(nu) = prod_{j<=m} (4 nu^2 - (2j-1)^2) / (m! 8^m)
  const double mu = 4.0 * nu * nu;
  double a = 1.0;
  hankel_[0] = 1.0;
  for (int m = 1; m < kAsymptoticTerms; ++m) {
    const double odd = 2.0 * m - 1.0;
    a *= (mu - odd * odd) / (8.0 * m);
    hankel_[m] = a;
  }
}

double NormalizedBessel::series(double w) const {
  const long double q = -0.25L * static_cast<long double>(w) * w;
  long double term = 1.0L;
  long double sum = 1.0L;
  long double biggest = 1.0L;
  for (int m = 1; m < 400; ++m) {
    term *= q / (m * (static_cast<long double>(nu_) + m));
    sum += term;
    const long double mag = std::abs(term);
    if (mag > biggest) biggest = mag;
    if (mag < 1e-22L * biggest && m > std::abs(w) / 2) break;
  }
  return static_cast<double>(sum);
}

double NormalizedBessel::asymptotic(double w) const {
  const double aw = std::abs(w);
  const double inv = 1.0 / aw;
  double p = 0.0;
  double q = 0.0;
  double pw = 1.0;
  for (int m = 0; m < kAsymptoticTerms; ++m) {
    const double term = hankel_[m] * pw;
    // Signs: P = a0 - a2/w^2 + a4/w^4 ...,  Q = a1/w - a3/w^3 + ...
    const int s = (m / 2) % 2 == 0 ? 1 : -1;
    if (m % 2 == 0) {
      p += s * term;
    } else {
      q += s * term;
    }
    pw *= inv;
  }
  const double chi = aw - (0.5 * nu_ + 0.25) * std::numbers::pi;
  const double bessel_part = p * std::cos(chi) - q * std::sin(chi);
  return prefactor_ * std::pow(aw, -nu_ - 0.5) * bessel_part;
}

double NormalizedBessel::operator()(double w) const {
  return std::abs(w) <= kCrossover ? series(w) : asymptotic(w);
}

NormalizedModifiedBessel::NormalizedModifiedBessel(double nu) : nu_(nu) {
  if (!(nu >= -0.5)) throw std::invalid_argument("NormalizedModifiedBessel: nu must be >= -1/2");
}

double NormalizedModifiedBessel::operator()(double w) const {
  const long double q = 0.25L * static_cast<long double>(w) * w;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int m = 1; m < 100000; ++m) {
    term *= q / (m * (static_cast<long double>(nu_) + m));
    sum += term;
    if (term < 1e-20L * sum && m > std::abs(w) / 2) break;
  }
  return static_cast<double>(sum);
}

double bessel_j_normalized(double nu, double w) { return NormalizedBessel(nu)(w); }
double bessel_i_normalized(double nu, double w) { return NormalizedModifiedBessel(nu)(w); }

}  // namespace dunkl
