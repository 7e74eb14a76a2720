#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace dunkl {

using Point = std::vector<double>;

/// Multiplicities for the reflection group Z_2^d acting by coordinate sign
/// flips. Roots are alpha_j = sqrt(2) e_j, so <alpha, alpha> = 2.
class RootSystemConfig {
 public:
  explicit RootSystemConfig(std::vector<double> multiplicities);

  static RootSystemConfig rank_one(double k) { return RootSystemConfig({k}); }

  int dim() const { return static_cast<int>(multiplicities_.size()); }
  double multiplicity(int axis) const { return multiplicities_.at(axis); }
  const std::vector<double>& multiplicities() const { return multiplicities_; }

  /// gamma_k, the sum of the multiplicities.
  double gamma() const { return gamma_; }
  /// Homogeneous dimension d + 2 gamma_k of the weighted measure.
  double homogeneity() const { return dim() + 2.0 * gamma_; }

  /// The transform, translation, propagator, thin-set and annihilation
  /// pipelines are implemented for d = 1 only.
  bool supports_full_pipeline() const { return dim() == 1; }

  bool operator==(const RootSystemConfig&) const = default;

  nlohmann::ordered_json to_json() const;
  static RootSystemConfig from_json(const nlohmann::json& j);

 private:
  std::vector<double> multiplicities_;
  double gamma_ = 0.0;
};

/// h_k^2(x) = prod_j 2^{k_j} |x_j|^{2 k_j}.
double weight_density(std::span<const double> x, const RootSystemConfig& cfg);

/// One-axis factor 2^k |t|^{2k} of the density.
double axis_density(double t, double k);

/// c_h from the closed form c_h^{-1} = prod_j 2^{2k_j + 1/2} Gamma(k_j + 1/2).
double normalization_constant(const RootSystemConfig& cfg);

/// c_h from adaptive quadrature of h_k^2(x) e^{-|x|^2/2}; used as a
/// cross-check of the closed form.
double normalization_constant_quadrature(const RootSystemConfig& cfg);

/// Exact one-axis measure of [a, b] with density 2^k |t|^{2k}.
double interval_measure(double a, double b, double k);

/// mu_k(B(x, r)). Exact in 1D; recursive adaptive Gauss-Kronrod for d >= 2.
double ball_measure(std::span<const double> x, double r, const RootSystemConfig& cfg);

struct BallComparability {
  double comparability = 0.0;  // V(x, r) = r^d prod_j (sqrt(2)|x_j| + r)^{2 k_j}
  double measure = 0.0;        // mu_k(B(x, r))
  double ratio = 0.0;          // measure / comparability
};

BallComparability ball_measure_bound(std::span<const double> x, double r,
                                     const RootSystemConfig& cfg);

}  // namespace dunkl
