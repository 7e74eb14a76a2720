#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "dunkl/grid.hpp"
#include "dunkl/measure.hpp"

namespace dunkl {

/// Axis-aligned box [lo, hi] (an interval in 1D).
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
  bool operator==(const Box&) const = default;
};

/// Finite union of disjoint closed intervals (1D) or boxes (dD), sorted by
/// lower corner.
class SetUnion {
 public:
  explicit SetUnion(int d = 1) : d_(d) {}
  SetUnion(int d, std::vector<Box> pieces);
  /// 1D convenience constructor from [a, b] pairs.
  static SetUnion intervals(std::vector<std::pair<double, double>> pieces);
  static SetUnion empty(int d = 1) { return SetUnion(d); }
  /// [-half_width, half_width]^d.
  static SetUnion cube(int d, double half_width);

  int dim() const { return d_; }
  bool is_empty() const { return pieces_.empty(); }
  bool bounded() const { return true; }
  const std::vector<Box>& pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }

  bool contains(std::span<const double> x) const;
  bool contains(double x) const;
  /// mu_k of the set. Exact in 1D; d >= 2 uses the product of interval measures per box.
  double measure(const RootSystemConfig& cfg) const;
  /// mu_k(S cap [a, b]) in 1D, exact.
  double intersection_measure(double a, double b, double k) const;
  /// All piece endpoints of a 1D set.
  std::vector<double> endpoints() const;
  /// Complement inside [lo, hi] (1D).
  SetUnion complement_within(double lo, double hi) const;
  SetUnion reflected() const;

  nlohmann::ordered_json to_json() const;
  static SetUnion from_json(const nlohmann::json& j, int d = 1);

  bool operator==(const SetUnion&) const = default;

 private:
  int d_;
  std::vector<Box> pieces_;
};

/// lambda A = {lambda x : x in A}.
SetUnion dilate(const SetUnion& s, double lam);

/// rho(x) = min(1, 1/|x|).
double rho(double x);
double rho(std::span<const double> x);

/// mu_k(S cap B(x, rho(x))) / mu_k(B(x, rho(x))) in 1D.
double density_ratio(const SetUnion& s, double x, double k);

struct ThinnessReport {
  double epsilon_hat = 0.0;
  double argmax = 0.0;
  double r_check = 0.0;
  int samples_per_rho = 0;
  std::size_t sample_count = 0;
  nlohmann::ordered_json to_json() const;
};

inline constexpr int kDefaultSamplesPerRho = 40;

/// Sample points used by thinness_check: spacing rho(x)/samples_per_rho on
/// [-r_check, r_check], every endpoint, and every x with x +- rho(x) equal to
/// an endpoint, each also nudged to both sides.
std::vector<double> thinness_samples(const SetUnion& s, double r_check, int samples_per_rho);

/// Empirical sup of the local density ratio. 1D only.
ThinnessReport thinness_check(const SetUnion& s, const RootSystemConfig& cfg, double r_check,
                              int samples_per_rho = kDefaultSamplesPerRho);

struct CombOptions {
  double width_scale = 1.0;  // initial half-width = width_scale * eps * rho(m)
  double jitter = 0.1;       // centers move by up to +-jitter * rho(m)
  double shrink = 0.8;
  int max_iterations = 50;
  int samples_per_rho = kDefaultSamplesPerRho;
};

struct CombResult {
  SetUnion set;
  ThinnessReport report;
  int iterations = 0;
};

/// Symmetric comb with pieces around +-m, m = 1..extent, shrunk until the
/// checker (with r_check = 2 extent) certifies epsilon_hat <= eps_target.
/// Throws ConvergenceError after max_iterations shrinks.
CombResult generate_comb(double eps_target, int extent, const RootSystemConfig& cfg,
                         std::uint64_t seed, const CombOptions& options = {});

/// 0/1 membership of every grid node.
Eigen::VectorXd node_mask(const QuadratureGrid& grid, const SetUnion& s);

}  // namespace dunkl
