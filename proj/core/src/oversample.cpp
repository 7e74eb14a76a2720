#include "dunkl/oversample.hpp"

#include <cmath>
#include <stdexcept>

namespace dunkl {

Eigen::MatrixXd lagrange_matrix(const std::vector<double>& from, const std::vector<double>& to) {
  const int m = static_cast<int>(from.size());
  std::vector<double> bw(m, 1.0);
  for (int j = 0; j < m; ++j) {
    for (int q = 0; q < m; ++q) {
      if (q != j) bw[j] /= (from[j] - from[q]);
    }
  }
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(to.size()), m);
  for (std::size_t r = 0; r < to.size(); ++r) {
    int exact = -1;
    for (int j = 0; j < m; ++j) {
      if (to[r] == from[j]) exact = j;
    }
    if (exact >= 0) {
      L(static_cast<Eigen::Index>(r), exact) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (int j = 0; j < m; ++j) denom += bw[j] / (to[r] - from[j]);
    for (int j = 0; j < m; ++j) {
      L(static_cast<Eigen::Index>(r), j) = bw[j] / (to[r] - from[j]) / denom;
    }
  }
  return L;
}

PanelOversampler::PanelOversampler(GridPtr grid, double phase_rate, double max_phase)
    : grid_(std::move(grid)) {
  if (!grid_ || grid_->dim() != 1) {
    throw std::invalid_argument("PanelOversampler: one-dimensional grid required");
  }
  if (!(max_phase > 0.0) || phase_rate < 0.0) {
    throw std::invalid_argument("PanelOversampler: invalid phase parameters");
  }
  const double k = grid_->config().multiplicity(0);
  int coarse = 0;
  for (const Panel& p : grid_->panels(0)) {
    const double len = p.b - p.a;
    const int s = std::max(1, static_cast<int>(std::ceil(phase_rate * len / max_phase)));
    max_factor_ = std::max(max_factor_, s);
    const auto& gl = gauss_legendre(p.order);
    std::vector<double> ref(gl.nodes.begin(), gl.nodes.end());
    std::vector<double> sub_ref;
    Block block{coarse, static_cast<int>(nodes_.size()), {}};
    for (int q = 0; q < s; ++q) {
      const double a = p.a + len * q / s;
      const double b = q + 1 == s ? p.b : p.a + len * (q + 1) / s;
      const double mid = 0.5 * (a + b);
      const double half = 0.5 * (b - a);
      for (int m = 0; m < p.order; ++m) {
        const double z = mid + half * gl.nodes[m];
        nodes_.push_back(z);
        weights_.push_back(half * gl.weights[m] * axis_density(z, k));
        sub_ref.push_back(2.0 * (z - p.a) / len - 1.0);
      }
    }
    block.interp = lagrange_matrix(ref, sub_ref);
    blocks_.push_back(std::move(block));
    coarse += p.order;
  }
}

Eigen::VectorXcd PanelOversampler::interpolate(const Eigen::VectorXcd& coarse) const {
  if (coarse.size() != grid_->size()) throw std::invalid_argument("interpolate: size mismatch");
  Eigen::VectorXcd fine(fine_size());
  for (const Block& b : blocks_) {
    fine.segment(b.fine_offset, b.interp.rows()) =
        b.interp.cast<std::complex<double>>() * coarse.segment(b.coarse_offset, b.interp.cols());
  }
  return fine;
}

Eigen::MatrixXcd PanelOversampler::assemble(
    int rows, const std::function<std::complex<double>(int, int)>& entry) const {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(rows, grid_->size());
  for (const Block& b : blocks_) {
    const int nf = static_cast<int>(b.interp.rows());
    Eigen::MatrixXcd E(rows, nf);
    for (int z = 0; z < nf; ++z) {
      for (int r = 0; r < rows; ++r) E(r, z) = entry(r, b.fine_offset + z);
    }
    M.middleCols(b.coarse_offset, b.interp.cols()).noalias() = E * b.interp.cast<std::complex<double>>();
  }
  return M;
}

}  // namespace dunkl
