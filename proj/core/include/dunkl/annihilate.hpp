#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dunkl/report.hpp"
#include "dunkl/sampled.hpp"
#include "dunkl/thinsets.hpp"
#include "dunkl/transform.hpp"

namespace dunkl {

inline constexpr std::uint64_t kDefaultSeed = 0xD01C;

/// 1D grid whose panels break at every endpoint of the given sets inside
/// (-R, R), so set indicators are integrated exactly.
GridPtr adapted_grid(double R, int n, const RootSystemConfig& cfg,
                     const std::vector<SetUnion>& sets);

/// E_S f = chi_S f.
SampledFunction project_space(const SampledFunction& f, const SetUnion& s);
/// F_Sigma f = D^{-1}(chi_Sigma D f).
SampledFunction project_freq(const SampledFunction& f, const SetUnion& sigma,
                             const TransformOperator& op);

enum class NormMethod { svd, power };
NormMethod norm_method_from_string(const std::string& s);
std::string to_string(NormMethod m);

struct NormResult {
  double value = 0.0;
  NormMethod method = NormMethod::svd;
  int iterations = 0;
  bool converged = true;
  /// Top singular vectors in unitarized coordinates, full target / source length.
  Eigen::VectorXcd left;
  Eigen::VectorXcd right;
};

/// H = P_Sigma U P_S on unitarized grid coordinates, stored as the submatrix
/// of U with rows at frequency nodes in Sigma and columns at space nodes in S.
class AnnihilationOperator {
 public:
  AnnihilationOperator(SetUnion s, SetUnion sigma, TransformPtr op);

  const SetUnion& space_set() const { return s_; }
  const SetUnion& freq_set() const { return sigma_; }
  const TransformPtr& transform() const { return op_; }
  const Eigen::MatrixXcd& submatrix() const { return h_; }
  const std::vector<int>& space_nodes() const { return s_idx_; }
  const std::vector<int>& freq_nodes() const { return sigma_idx_; }
  const Eigen::VectorXd& space_mask() const { return s_mask_; }
  const Eigen::VectorXd& freq_mask() const { return sigma_mask_; }

  /// H applied to full-length unitarized coordinates.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& u) const;

  NormResult norm(NormMethod method = NormMethod::svd, std::uint64_t seed = kDefaultSeed,
                  double tol = 1e-8, int max_iterations = 500) const;

 private:
  SetUnion s_;
  SetUnion sigma_;
  TransformPtr op_;
  std::vector<int> s_idx_;
  std::vector<int> sigma_idx_;
  Eigen::VectorXd s_mask_;
  Eigen::VectorXd sigma_mask_;
  Eigen::MatrixXcd h_;
};

double operator_norm(const AnnihilationOperator& h, NormMethod method = NormMethod::svd);

struct PairConstants {
  double norm_h = 0.0;
  double D = 1.0;
  double C = 2.0;
  nlohmann::ordered_json to_json() const;
};

/// D = 1/(1 - norm_h), C = 1 + D. Throws std::domain_error unless 0 <= norm_h < 1.
PairConstants pair_constants(double norm_h);

/// Terms of the pair inequality for one function.
struct PairTerms {
  double norm = 0.0;
  double outside_space = 0.0;          // ||chi_{S^c} f||
  double outside_freq = 0.0;           // ||chi_{Sigma^c} D f|| by the Plancherel complement
  double outside_freq_direct = 0.0;    // same, summed over frequency nodes outside Sigma
};
PairTerms pair_terms(const SampledFunction& f, const AnnihilationOperator& h);

struct EnsembleOptions {
  double a_min = 0.15, a_max = 0.25;   // Gaussian rate
  double b_min = 0.25, b_max = 0.40;   // focusing chirp rate
  double c_max = 0.5;                  // linear phase
  double shift_max = 0.5;              // Gaussian center
  double poly_scale = 0.3;             // quadratic polynomial coefficients
};

/// Seeded random (1 + p1 x + p2 x^2) exp(-a (x - x0)^2 - i b x^2 + i c x) samples.
std::vector<SampledFunction> schwartz_ensemble(GridPtr grid, int count, std::uint64_t seed,
                                               const EnsembleOptions& options = {});

/// Top right singular vector v and U^* u (u the top left singular vector),
/// as sample functions on the source grid.
std::vector<SampledFunction> adversarial_members(const AnnihilationOperator& h,
                                                 const NormResult& nr);

/// max over the ensemble of ||f|| / (||chi_{S^c} f|| + ||chi_{Sigma^c} D f||),
/// with the squared form, the support-restricted form and the pass flags.
OperatorReport verify_pair(const std::vector<SampledFunction>& ensemble,
                           const AnnihilationOperator& h, const PairConstants& pc);

struct TwoTimeMember {
  double lhs = 0.0;
  double rhs_first = 0.0;
  double rhs_second = 0.0;
  double ratio = 0.0;
};

struct TwoTimeResult {
  OperatorReport report;
  std::vector<TwoTimeMember> members;
};

/// ||u0||^2 against int_{A^c} |u(S)|^2 + int_{(2(T-S)B)^c} |u(T)|^2 for each
/// member. Both complements are taken as ||u0||^2 minus the mass inside the
/// set, so mass carried beyond the grid counts as outside. The bound is 2C^2.
TwoTimeResult verify_two_time(const std::vector<SampledFunction>& ensemble, const SetUnion& A,
                              const SetUnion& B, double s_time, double t_time,
                              const PairConstants& pc);

/// Time-shift consistency: the two-time ratios for (shift, shift + duration)
/// on u0 must equal those for (0, duration) on u(., shift; u0), since the
/// propagator is a unitary group. Passes iff the per-member ratios agree to
/// 1e-4 relative.
OperatorReport time_shift_consistency(const std::vector<SampledFunction>& ensemble,
                                      const SetUnion& A, const SetUnion& B, double shift,
                                      double duration, const PairConstants& pc);

}  // namespace dunkl
