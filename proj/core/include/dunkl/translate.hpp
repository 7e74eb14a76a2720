#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "dunkl/report.hpp"
#include "dunkl/sampled.hpp"
#include "dunkl/transform.hpp"

namespace dunkl {

struct OrbitDistance {
  Point x;
  Point y;
  /// min over sign flips sigma of |x - sigma(y)| = (sum_j (|x_j| - |y_j|)^2)^{1/2}.
  double value = 0.0;
};
OrbitDistance orbit_distance(std::span<const double> x, std::span<const double> y);

/// tau_y f = D^{-1}(E(y, -i .) D f). The operator may map onto a wider
/// frequency grid than f's own.
SampledFunction translate(const SampledFunction& f, std::span<const double> y,
                          const TransformOperator& op);
SampledFunction translate(const SampledFunction& f, double y, const TransformOperator& op);

/// Matrix of f -> tau_y f in plain sample coordinates.
Eigen::MatrixXcd translation_matrix(const TransformOperator& op, std::span<const double> y);

/// f *_k g = D^{-1}(D f . D g).
SampledFunction convolve(const SampledFunction& f, const SampledFunction& g,
                         const TransformOperator& op);

/// Direct definition c_h int f(y) tau_x g^v(y) dmu_k(y) at every node x, with
/// g^v(y) = g(-y). The factor c_h matches the spectral route under the
/// transform normalization used here.
SampledFunction convolve_direct(const SampledFunction& f, const SampledFunction& g,
                                const TransformOperator& op);

/// Mass of |tau_x f| outside the union of balls B(sigma(x), r + delta) over
/// sign flips sigma of the axes with k_j > 0, relative to the total mass;
/// delta = 3 average grid spacings. Passes iff below leak_tol.
OperatorReport support_check(const SampledFunction& f, double r, std::span<const double> x,
                             double leak_tol, const TransformOperator& op);

/// Dilated indicator t^{-N} chi_{B(0, 2^l)}(x / t), mollified by a cosine
/// ramp two average grid cells wide.
SampledFunction mollified_cutoff(GridPtr grid, int ell, double t);

/// Empirical constant sup_y |tau_x g(y)| mu_k(B(x, t)) 2^{-l(2d + 2 gamma)}
/// maximized over x_list, for g = mollified_cutoff(ell, t).
OperatorReport cutoff_decay_experiment(int ell, double t, const std::vector<double>& x_list,
                                       const TransformOperator& op);

/// Same statistic for g_t(y) = t^{-N} g(y / t) with an arbitrary bounded,
/// compactly supported profile g (no smoothing), normalized by sup |g|
/// instead of the dyadic factor.
OperatorReport bounded_translate_experiment(const std::function<double(double)>& g, double t,
                                            const std::vector<double>& x_list,
                                            const TransformOperator& op);

}  // namespace dunkl
