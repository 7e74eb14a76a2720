#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "dunkl/bessel.hpp"
#include "dunkl/measure.hpp"

namespace dunkl {

enum class KernelMode { plain, minus_i };
enum class KernelRegime { series, closed_form, asymptotic };

std::string to_string(KernelRegime r);
std::string to_string(KernelMode m);
KernelMode kernel_mode_from_string(const std::string& s);

struct KernelValue {
  std::complex<double> value;
  Point x;
  Point y;
  KernelRegime regime = KernelRegime::closed_form;
};

struct SeriesResult {
  std::complex<double> value;
  /// Upper bound on the magnitude of the discarded tail.
  double truncation_bound = 0.0;
};

/// Hard cap on the number of series terms the power series may need.
inline constexpr int kMaxSeriesTerms = 10000;

/// Partial sum sum_{n<=terms} a_n x^n of the rank-one kernel series, with
/// a_0 = 1 and a_n = y a_{n-1} / (n + k(1 - (-1)^n)). Throws
/// std::invalid_argument when |xy| needs more than kMaxSeriesTerms terms for
/// 1e-12 accuracy.
SeriesResult dunkl_kernel_series(double x, std::complex<double> y, double k, int terms);

/// Series summed until the tail bound drops below `tol` (relative to the sum).
SeriesResult dunkl_kernel_series_converged(double x, std::complex<double> y, double k,
                                           double tol = 1e-16);

/// Rank-one kernel with both Bessel orders precomputed for a fixed k.
class Rank1Kernel {
 public:
  explicit Rank1Kernel(double k);

  double k() const { return k_; }
  /// E(x, -iy) = j_{k-1/2}(xy) - i xy/(2k+1) j_{k+1/2}(xy).
  std::complex<double> minus_i(double x, double y) const;
  /// E(x, y) = i_{k-1/2}(xy) + xy/(2k+1) i_{k+1/2}(xy).
  double plain(double x, double y) const;
  /// Even and odd parts of E(x, -iy) as real numbers: value = even - i*odd.
  void minus_i_parts(double x, double y, double& even, double& odd) const;

 private:
  double k_;
  NormalizedBessel j_lo_;
  NormalizedBessel j_hi_;
  NormalizedModifiedBessel i_lo_;
  NormalizedModifiedBessel i_hi_;
};

/// Product over coordinates of the rank-one kernel.
std::complex<double> dunkl_kernel(std::span<const double> x, std::span<const double> y,
                                  const RootSystemConfig& cfg, KernelMode mode);

/// Same value, annotated with the evaluation regime.
KernelValue evaluate_kernel(std::span<const double> x, std::span<const double> y,
                            const RootSystemConfig& cfg, KernelMode mode);

}  // namespace dunkl
