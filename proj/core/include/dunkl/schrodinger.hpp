#pragma once

#include <string>

#include <Eigen/Core>

#include "dunkl/sampled.hpp"
#include "dunkl/transform.hpp"

namespace dunkl {

enum class PropagatorMethod { explicit_formula, multiplier };
std::string to_string(PropagatorMethod m);

struct PropagatorState {
  SampledFunction u;
  double t = 0.0;
  PropagatorMethod method = PropagatorMethod::multiplier;
};

/// Smallest time accepted by the explicit route on `grid`: 4R / (n pi).
double explicit_time_floor(const QuadratureGrid& grid);

/// True when the chirp e^{i x^2/4t} advances more than pi per average grid
/// cell at the edge of the grid. The oversampled quadrature still evaluates
/// the chirp exactly, but the input samples must resolve u0 itself.
bool chirp_aliasing(const QuadratureGrid& grid, double t);

/// u0 -> u(., t) via the chirped-transform representation, as a dense matrix
/// on the grid. Fast phases are integrated on oversampled panels.
class ExplicitPropagator {
 public:
  ExplicitPropagator(GridPtr grid, double t);
  double time() const { return t_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  bool aliasing_warning() const { return aliasing_; }
  SampledFunction apply(const SampledFunction& u0) const;

 private:
  GridPtr grid_;
  double t_;
  bool aliasing_;
  Eigen::MatrixXcd m_;
};

/// u0 -> D^{-1}(e^{-it|xi|^2} D u0) as a dense matrix; the inverse transform
/// integrates the multiplier exactly on oversampled frequency panels.
class MultiplierPropagator {
 public:
  MultiplierPropagator(TransformPtr op, double t);
  double time() const { return t_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  SampledFunction apply(const SampledFunction& u0) const;

 private:
  TransformPtr op_;
  double t_;
  Eigen::MatrixXcd m_;
};

/// Throws std::invalid_argument for t <= 0 or t below explicit_time_floor.
SampledFunction propagate_explicit(const SampledFunction& u0, double t);

/// t = 0 returns u0. Uses a square transform on u0's grid unless `op` is given.
SampledFunction propagate_multiplier(const SampledFunction& u0, double t,
                                     const TransformPtr& op = nullptr);

PropagatorState propagate(const SampledFunction& u0, double t, PropagatorMethod method);

}  // namespace dunkl
