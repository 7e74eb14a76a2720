#pragma once

#include <memory>
#include <string>

#include <Eigen/Core>

#include "dunkl/grid.hpp"
#include "dunkl/sampled.hpp"

namespace dunkl {

/// Dense quadrature realization of the Dunkl transform between two grids.
///
/// Only the unitarized matrix U[j, i] = c_h sqrt(w_j w_i) E(x_i, -i y_j) is
/// stored (rows: target nodes y_j, columns: source nodes x_i). Forward and
/// inverse application rescale by the square-root weights.
class TransformOperator {
 public:
  static constexpr const char* kDumpMagic = "DUNKLOP1";

  /// Frequency grid equal to the space grid.
  static std::shared_ptr<const TransformOperator> build(GridPtr grid, double tolerance = 1e-6);
  static std::shared_ptr<const TransformOperator> build(GridPtr source, GridPtr target,
                                                        double tolerance = 1e-6);

  const GridPtr& source() const { return source_; }
  const GridPtr& target() const { return target_; }
  /// Unitarized matrix, target.size() x source.size().
  const Eigen::MatrixXcd& unitarized() const { return u_; }
  bool is_unitarized() const { return true; }
  /// Plancherel tolerance declared when the operator was built.
  double tolerance() const { return tolerance_; }
  double normalization() const { return c_h_; }

  /// Entry of the plain forward matrix c_h E(x_i, -i y_j) w_i.
  std::complex<double> forward_entry(int j, int i) const;

  Eigen::VectorXcd forward_unitarized(const Eigen::VectorXcd& u) const { return u_ * u; }
  Eigen::VectorXcd inverse_unitarized(const Eigen::VectorXcd& v) const { return u_.adjoint() * v; }

  /// Writes magic, uint64 JSON length, grid JSON {"source","target"}, uint64
  /// rows, uint64 cols and the row-major complex128 forward matrix.
  void dump(const std::string& path) const;

 private:
  TransformOperator(GridPtr source, GridPtr target, Eigen::MatrixXcd u, double c_h,
                    double tolerance);
  GridPtr source_;
  GridPtr target_;
  Eigen::MatrixXcd u_;
  double c_h_;
  double tolerance_;
};

using TransformPtr = std::shared_ptr<const TransformOperator>;

/// K[j, i] = E(x_i, -i y_j) for source nodes x_i and target nodes y_j.
Eigen::MatrixXcd kernel_matrix(const QuadratureGrid& source, const QuadratureGrid& target);

/// Row vector E(p, -i y_j) over the target nodes y_j.
Eigen::VectorXcd kernel_row(std::span<const double> p, const QuadratureGrid& target);

/// Contents of an operator dump file.
struct OperatorDump {
  GridPtr source;
  GridPtr target;
  Eigen::MatrixXcd forward;
};
OperatorDump read_operator_dump(const std::string& path);

/// Quadrature evaluation of D_k f on the operator's target grid.
SampledFunction forward(const SampledFunction& f, const TransformOperator& op);
/// Adjoint-direction quadrature with kernel E(ix, y), back onto the source grid.
SampledFunction inverse(const SampledFunction& g, const TransformOperator& op);

/// Orthonormal (in the grid inner product, unitarized coordinates) basis of
/// Gaussian x polynomial test functions of total degree <= max_degree.
Eigen::MatrixXcd schwartz_test_basis(const QuadratureGrid& grid, int max_degree = 20);

/// Spectral norm of (U V)^*(U V) - I on the Schwartz test basis V.
double plancherel_defect(const TransformOperator& op, int max_degree = 20);

/// Spectral norm of U^* U - I on the whole discrete space, by power iteration.
double full_space_defect(const TransformOperator& op, int iterations = 300);

}  // namespace dunkl
