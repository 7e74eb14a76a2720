#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "dunkl/annihilate.hpp"
#include "dunkl/report.hpp"
#include "dunkl/sampled.hpp"
#include "dunkl/thinsets.hpp"
#include "dunkl/transform.hpp"

namespace dunkl {

/// theta(t) = exp(-1/t) for t > 0, else 0.
double lp_theta(double t);
/// Radial bump: 1 on [-1, 1], 0 outside (-2, 2), smooth and monotone between.
double lp_bump(double xi);
/// b(2^{-j} xi).
double lp_bump_scaled(int j, double xi);
/// psi_0 = b, psi_j = b(2^{-j} .) - b(2^{-(j-1)} .).
double lp_psi(int j, double x);

/// Littlewood-Paley family on a 1D window grid.
///
/// phi = D^{-1} b and its translates are evaluated by quadrature of the
/// known transform b(2^{-j} .). Terms with psi_j = 0 on the window
/// contribute nothing there and are skipped. Each level j has its own rule
/// on [-2^{j+1}, 2^{j+1}], fine enough for the bump transitions and for
/// kernel phases of points in the window.
class LPFamily {
 public:
  LPFamily(int n_max, GridPtr window);

  int n_max() const { return n_max_; }
  /// Largest j with psi_j not identically zero on |x| <= R.
  int active_max() const { return active_max_; }
  const GridPtr& window() const { return window_; }
  const RootSystemConfig& config() const { return window_->config(); }

  /// phi_j(x) = 2^{j N} phi(2^j x), evaluated from its transform b(2^{-j} .).
  double phi(int j, double x) const;
  /// phi_j sampled on the window grid.
  SampledFunction phi_sampled(int j) const;
  /// int |phi_j| dmu_k over [-L 2^{-j}, L 2^{-j}] on a rule with n nodes.
  double phi_l1(int j, double L = 256.0, int n = 16384) const;
  /// max |Im| of D^{-1} b computed with the complex transform on the window.
  double phi_imaginary_part(const TransformOperator& op) const;

  /// tau_x phi_j(y) for all pairs; real because b_j is even.
  Eigen::MatrixXd tau_phi(int j, const std::vector<double>& xs, const std::vector<double>& ys) const;
  /// c_h int E(xi, -i z) E(eta, i z) w(z) dmu_k(z) for an even profile w
  /// supported in [-2^{level+1}, 2^{level+1}], on the rule of that level.
  Eigen::MatrixXd translate_profile(int level, const std::function<double(double)>& w,
                                    const std::vector<double>& xis,
                                    const std::vector<double>& etas) const;

  /// Rule on [-2^{level+1}, 2^{level+1}] with breaks at 2^{level-1} and 2^level.
  const GridPtr& level_rule(int level) const { return rules_.at(level); }

 private:
  int n_max_;
  int active_max_;
  GridPtr window_;
  std::vector<GridPtr> rules_;
};

/// A_N(x, y) = sum_{j <= N} psi_j(x) tau_x phi_j(y).
Eigen::MatrixXd kernel_A_N(const std::vector<double>& xs, const std::vector<double>& ys, int N,
                           const LPFamily& fam);
double kernel_A_N(double x, double y, int N, const LPFamily& fam);

/// M_N(xi, eta) = sum_{j <= N} tau_xi D psi_j(eta) (1 - b_j(eta)).
Eigen::MatrixXd kernel_M_N(const std::vector<double>& xis, const std::vector<double>& etas, int N,
                           const LPFamily& fam);
double kernel_M_N(double xi, double eta, int N, const LPFamily& fam);
/// Regrouped form sum_{i >= 1} psi_i(eta) tau_xi phi_{i*}(eta), i* = min(i - 1, N).
Eigen::MatrixXd kernel_M_N_regrouped(const std::vector<double>& xis, const std::vector<double>& etas,
                                     int N, const LPFamily& fam);

/// Window nodes plus 8 points around each annulus boundary 2^m inside the window.
std::vector<double> lp_sample_points(const QuadratureGrid& grid);

/// phi_j *_k f = D^{-1}(b_j D f); the transform of phi_j is known in closed form.
SampledFunction lp_convolve(const SampledFunction& f, int j, const TransformOperator& op);
SampledFunction apply_L_N(const SampledFunction& f, int N, const TransformOperator& op);
SampledFunction apply_T_N(const SampledFunction& f, int N, const TransformOperator& op);
/// (sum_{j <= N} psi_j) f.
SampledFunction partition_multiplier(const SampledFunction& f, int N);

/// Bounds (i)-(vi) with S and Sigma certified at eps_s and eps_sigma.
OperatorReport bound_suite(int N, const LPFamily& fam, const SetUnion& S, const SetUnion& Sigma,
                           double eps_s, double eps_sigma);

/// ||L_N chi_S||, ||chi_Sigma D T_N chi_S|| and ||H|| on the grids of h,
/// each divided by eps^{1/2}.
OperatorReport contraction_constants(int N, const LPFamily& fam, const AnnihilationOperator& h,
                                     double eps);

/// sup over pairs of |tau_x phi_j(y)| / (2^{jN} (1 + 2^j D(x, y))^{-M}), for
/// the pairs as given and with y replaced by -y.
OperatorReport decay_estimate_check(int j, double M,
                                    const std::vector<std::pair<double, double>>& pairs,
                                    const LPFamily& fam);

}  // namespace dunkl
