#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "dunkl/measure.hpp"

namespace dunkl {

/// One Gauss-Legendre panel [a, b] with `order` nodes.
struct Panel {
  double a = 0.0;
  double b = 0.0;
  int order = 0;

  bool operator==(const Panel&) const = default;
};

struct GridOptions {
  int panel_order = 16;
  /// Dyadic refinement levels toward t = 0 on axes with k_j > 0.
  int refine_levels = 5;
  /// Extra panel edges (1D only). Panels containing a breakpoint are split;
  /// each piece gets its own Gauss-Legendre rule of at least `min_split_order`
  /// nodes. Set indicators are then integrated exactly by the rule.
  std::vector<double> breakpoints;
  int min_split_order = 8;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int order);

class QuadratureGrid;
using GridPtr = std::shared_ptr<const QuadratureGrid>;

/// Truncated weighted quadrature rule on the cube [-R, R]^d. Weights include
/// the density h_k^2 at each node. Immutable once built.
class QuadratureGrid {
 public:
  static constexpr int kJsonVersion = 1;

  /// Composite Gauss-Legendre panels per axis, tensorized for d >= 2.
  /// `n` is the node count per axis before breakpoint splits and must be a
  /// positive multiple of 32 (an even number of 16-point panels, so t = 0 is
  /// always a panel edge).
  static GridPtr build(double R, int n, const RootSystemConfig& cfg,
                       const GridOptions& options = {});

  /// Rebuilds a grid from its serialized panel descriptor; bit-identical to
  /// the grid that produced the document.
  static GridPtr from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;

  int size() const { return static_cast<int>(weights_.size()); }
  int dim() const { return cfg_.dim(); }
  double radius() const { return R_; }
  int requested_resolution() const { return n_; }
  const RootSystemConfig& config() const { return cfg_; }
  const GridOptions& options() const { return options_; }

  /// Panel layout of one axis.
  const std::vector<Panel>& panels(int axis = 0) const { return axes_.at(axis); }
  /// Ascending one-dimensional nodes of one axis; the grid is their tensor product.
  std::vector<double> axis_nodes(int axis = 0) const;

  std::span<const double> node(int i) const {
    return {coords_.data() + static_cast<std::size_t>(i) * dim(), static_cast<std::size_t>(dim())};
  }
  /// Coordinate of node i in 1D.
  double x(int i) const { return coords_[i]; }
  double weight(int i) const { return weights_[i]; }
  const Eigen::VectorXd& weights() const { return weights_; }
  /// Pure geometric (Lebesgue) quadrature weights, without h_k^2.
  const Eigen::VectorXd& lebesgue_weights() const { return lebesgue_; }

  /// Index of the node mirrored through the origin, -x_i. Grids are symmetric.
  int mirror(int i) const { return mirror_[i]; }

  /// Largest panel length over all axes.
  double max_panel_length() const;

  bool operator==(const QuadratureGrid& other) const;

 private:
  QuadratureGrid(double R, int n, RootSystemConfig cfg, GridOptions options,
                 std::vector<std::vector<Panel>> axes);
  void assemble();

  double R_;
  int n_;
  RootSystemConfig cfg_;
  GridOptions options_;
  std::vector<std::vector<Panel>> axes_;
  std::vector<double> coords_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd lebesgue_;
  std::vector<int> mirror_;
};

/// Same-object or same-descriptor equality.
bool same_grid(const GridPtr& a, const GridPtr& b);

}  // namespace dunkl
