#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "dunkl/grid.hpp"

namespace dunkl {

/// Refines a 1D grid by splitting every panel into equal subpanels carrying
/// their own Gauss-Legendre rule, with the panel's interpolating polynomial
/// mapping coarse samples onto the subnodes. Integrands that are smooth on the
/// coarse grid but multiplied by a fast phase (chirps, kernels at large
/// frequency) are then integrated with the phase evaluated exactly.
class PanelOversampler {
 public:
  /// Each panel of length L gets ceil(phase_rate * L / max_phase) subpanels.
  PanelOversampler(GridPtr grid, double phase_rate, double max_phase = 8.0);

  const GridPtr& grid() const { return grid_; }
  int fine_size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  /// Quadrature weights at the subnodes, including the density h_k^2.
  const std::vector<double>& weights() const { return weights_; }
  int max_factor() const { return max_factor_; }

  /// Interpolated values at the subnodes.
  Eigen::VectorXcd interpolate(const Eigen::VectorXcd& coarse) const;

  /// M[r, i] = sum_z entry(r, z) P[z, i] with P the interpolation map, so that
  /// M * f = sum_z entry(r, z) (P f)(z).
  Eigen::MatrixXcd assemble(int rows,
                            const std::function<std::complex<double>(int, int)>& entry) const;

 private:
  struct Block {
    int coarse_offset;
    int fine_offset;
    Eigen::MatrixXd interp;  // fine x coarse for this panel
  };
  GridPtr grid_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<Block> blocks_;
  int max_factor_ = 1;
};

/// Barycentric Lagrange interpolation matrix from `from` to `to` nodes.
Eigen::MatrixXd lagrange_matrix(const std::vector<double>& from, const std::vector<double>& to);

}  // namespace dunkl
