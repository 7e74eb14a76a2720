#include "dunkl/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dunkl {

std::string to_string(KernelRegime r) {
  switch (r) {
    case KernelRegime::series: return "series";
    case KernelRegime::closed_form: return "closed-form";
    case KernelRegime::asymptotic: return "asymptotic";
  }
  return "unknown";
}

std::string to_string(KernelMode m) { return m == KernelMode::plain ? "plain" : "minus_i"; }

KernelMode kernel_mode_from_string(const std::string& s) {
  if (s == "plain") return KernelMode::plain;
  if (s == "minus_i" || s == "minus-i") return KernelMode::minus_i;
  throw std::invalid_argument("unknown kernel mode '" + s + "'");
}

namespace {

// Smallest N with |xy|^N / N! < 1e-12 and |xy|/(N+1) < 1/2. The ratio
// |a_n x^n| / |a_{n-1} x^{n-1}| never exceeds |xy|/n, so this bounds the
// terms any accurate partial sum needs.
int required_terms(double z) {
  if (z == 0.0) return 1;
  const double target = std::log(1e-12);
  const double lz = std::log(z);
  for (int n = 1; n <= kMaxSeriesTerms; ++n) {
    if (z / (n + 1) < 0.5 && n * lz - std::lgamma(n + 1.0) < target) return n;
  }
  return kMaxSeriesTerms + 1;
}

}  // namespace

SeriesResult dunkl_kernel_series(double x, std::complex<double> y, double k, int terms) {
  if (terms < 1) throw std::invalid_argument("dunkl_kernel_series: terms must be >= 1");
  if (k < 0.0) throw std::invalid_argument("dunkl_kernel_series: k must be >= 0");
  const double z = std::abs(x) * std::abs(y);
  if (required_terms(z) > kMaxSeriesTerms) {
    throw std::invalid_argument("dunkl_kernel_series: |xy| too large for the series; use the closed form");
  }
  using lcplx = std::complex<long double>;
  const lcplx yl(y.real(), y.imag());
  const long double xl = x;
  lcplx term(1.0L, 0.0L);
  lcplx sum = term;
  for (int n = 1; n <= terms; ++n) {
    const long double denom = n + (n % 2 == 1 ? 2.0L * k : 0.0L);
    term *= yl * xl / denom;
    sum += term;
  }
  SeriesResult out;
  out.value = {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
  const double r = z / (terms + 1);
  out.truncation_bound = r < 1.0 ? static_cast<double>(std::abs(term)) * r / (1.0 - r)
                                 : std::numeric_limits<double>::infinity();
  return out;
}

SeriesResult dunkl_kernel_series_converged(double x, std::complex<double> y, double k, double tol) {
  const double z = std::abs(x) * std::abs(y);
  int terms = std::max(8, required_terms(z));
  SeriesResult res = dunkl_kernel_series(x, y, k, terms);
  while (res.truncation_bound > tol * std::max(1.0, std::abs(res.value)) && terms < kMaxSeriesTerms) {
    terms = std::min(kMaxSeriesTerms, terms * 2);
    res = dunkl_kernel_series(x, y, k, terms);
  }
  return res;
}

Rank1Kernel::Rank1Kernel(double k)
    : k_(k), j_lo_(k - 0.5), j_hi_(k + 0.5), i_lo_(k - 0.5), i_hi_(k + 0.5) {
  if (k < 0.0) throw std::invalid_argument("Rank1Kernel: k must be >= 0");
}

void Rank1Kernel::minus_i_parts(double x, double y, double& even, double& odd) const {
  const double w = x * y;
  even = j_lo_(w);
  odd = w / (2.0 * k_ + 1.0) * j_hi_(w);
}

std::complex<double> Rank1Kernel::minus_i(double x, double y) const {
  double even = 0.0;
  double odd = 0.0;
  minus_i_parts(x, y, even, odd);
  return {even, -odd};
}

double Rank1Kernel::plain(double x, double y) const {
  const double w = x * y;
  return i_lo_(w) + w / (2.0 * k_ + 1.0) * i_hi_(w);
}

std::complex<double> dunkl_kernel(std::span<const double> x, std::span<const double> y,
                                  const RootSystemConfig& cfg, KernelMode mode) {
  if (static_cast<int>(x.size()) != cfg.dim() || static_cast<int>(y.size()) != cfg.dim()) {
    throw std::invalid_argument("dunkl_kernel: point dimension does not match the config");
  }
  std::complex<double> v(1.0, 0.0);
  for (int j = 0; j < cfg.dim(); ++j) {
    const Rank1Kernel kern(cfg.multiplicity(j));
    if (mode == KernelMode::minus_i) {
      v *= kern.minus_i(x[j], y[j]);
    } else {
      v *= kern.plain(x[j], y[j]);
    }
  }
  return v;
}

KernelValue evaluate_kernel(std::span<const double> x, std::span<const double> y,
                            const RootSystemConfig& cfg, KernelMode mode) {
  KernelValue out;
  out.value = dunkl_kernel(x, y, cfg, mode);
  out.x.assign(x.begin(), x.end());
  out.y.assign(y.begin(), y.end());
  out.regime = KernelRegime::closed_form;
  if (mode == KernelMode::minus_i) {
    for (int j = 0; j < cfg.dim(); ++j) {
      if (std::abs(x[j] * y[j]) > NormalizedBessel::kCrossover) out.regime = KernelRegime::asymptotic;
    }
  }
  return out;
}

}  // namespace dunkl
