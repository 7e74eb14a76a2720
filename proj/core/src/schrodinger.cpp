#include "dunkl/schrodinger.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dunkl/kernel.hpp"
#include "dunkl/oversample.hpp"

namespace dunkl {

using namespace std::complex_literals;

std::string to_string(PropagatorMethod m) {
  return m == PropagatorMethod::explicit_formula ? "explicit" : "multiplier";
}

double explicit_time_floor(const QuadratureGrid& grid) {
  return 4.0 * grid.radius() / (grid.requested_resolution() * std::numbers::pi);
}

bool chirp_aliasing(const QuadratureGrid& grid, double t) {
  const double cell = 2.0 * grid.radius() / grid.size();
  return grid.radius() / (2.0 * t) * cell > std::numbers::pi;
}

namespace {

void require_1d(const QuadratureGrid& grid, const char* what) {
  if (grid.dim() != 1) throw std::invalid_argument(std::string(what) + ": 1D grids only");
}

}  // namespace

ExplicitPropagator::ExplicitPropagator(GridPtr grid, double t) : grid_(std::move(grid)), t_(t) {
  require_1d(*grid_, "propagate_explicit");
  if (!(t > 0.0)) throw std::invalid_argument("propagate_explicit: t must be > 0");
  if (t < explicit_time_floor(*grid_)) {
    throw std::invalid_argument("propagate_explicit: t below the resolvable floor 4R/(n pi)");
  }
  aliasing_ = chirp_aliasing(*grid_, t);
  const double k = grid_->config().multiplicity(0);
  const double R = grid_->radius();
  // Phase rate of chirp plus kernel at the largest rescaled target.
  const PanelOversampler over(grid_, R / t);
  const double c_h = normalization_constant(grid_->config());
  const Rank1Kernel kern(k);
  const int n = grid_->size();
  std::vector<double> targets(n);
  for (int r = 0; r < n; ++r) targets[r] = grid_->x(r) / (2.0 * t);
  std::vector<std::complex<double>> chirp_w(over.fine_size());
  for (int z = 0; z < over.fine_size(); ++z) {
    const double zz = over.nodes()[z];
    chirp_w[z] = c_h * over.weights()[z] * std::exp(1i * (zz * zz / (4.0 * t)));
  }
  m_ = over.assemble(n, [&](int r, int z) {
    return chirp_w[z] * kern.minus_i(over.nodes()[z], targets[r]);
  });
  const double gamma = grid_->config().gamma();
  const std::complex<double> pref =
      std::pow(2.0 * t, -(gamma + 0.5)) * std::exp(-1i * ((1.0 + 2.0 * gamma) * std::numbers::pi / 4.0));
  for (int r = 0; r < n; ++r) {
    const double x = grid_->x(r);
    m_.row(r) *= pref * std::exp(1i * (x * x / (4.0 * t)));
  }
}

SampledFunction ExplicitPropagator::apply(const SampledFunction& u0) const {
  if (!same_grid(u0.grid(), grid_)) throw std::invalid_argument("ExplicitPropagator: grid mismatch");
  return SampledFunction(grid_, m_ * u0.values());
}

MultiplierPropagator::MultiplierPropagator(TransformPtr op, double t) : op_(std::move(op)), t_(t) {
  if (!op_) throw std::invalid_argument("MultiplierPropagator: null operator");
  require_1d(*op_->source(), "propagate_multiplier");
  if (t < 0.0) throw std::invalid_argument("propagate_multiplier: t must be >= 0");
  const GridPtr& space = op_->source();
  const GridPtr& freq = op_->target();
  const double k = space->config().multiplicity(0);
  const PanelOversampler over(freq, 2.0 * t * freq->radius() + space->radius());
  const double c_h = op_->normalization();
  const Rank1Kernel kern(k);
  std::vector<std::complex<double>> mult_w(over.fine_size());
  for (int z = 0; z < over.fine_size(); ++z) {
    const double xi = over.nodes()[z];
    mult_w[z] = c_h * over.weights()[z] * std::exp(-1i * (t * xi * xi));
  }
  const Eigen::MatrixXcd inv = over.assemble(space->size(), [&](int r, int z) {
    return mult_w[z] * std::conj(kern.minus_i(space->x(r), over.nodes()[z]));
  });
  // Plain forward matrix W_t^{-1/2} U W_s^{1/2}.
  const Eigen::VectorXd sw = space->weights().array().sqrt();
  const Eigen::VectorXd tw_inv = freq->weights().array().sqrt().inverse();
  const Eigen::MatrixXcd fwd = tw_inv.asDiagonal() * op_->unitarized() * sw.asDiagonal();
  m_ = inv * fwd;
}

SampledFunction MultiplierPropagator::apply(const SampledFunction& u0) const {
  if (!same_grid(u0.grid(), op_->source())) {
    throw std::invalid_argument("MultiplierPropagator: grid mismatch");
  }
  if (t_ == 0.0) return u0;
  return SampledFunction(op_->source(), m_ * u0.values());
}

SampledFunction propagate_explicit(const SampledFunction& u0, double t) {
  return ExplicitPropagator(u0.grid(), t).apply(u0);
}

SampledFunction propagate_multiplier(const SampledFunction& u0, double t, const TransformPtr& op) {
  if (t < 0.0) throw std::invalid_argument("propagate_multiplier: t must be >= 0");
  if (t == 0.0) return u0;
  const TransformPtr use = op ? op : TransformOperator::build(u0.grid());
  return MultiplierPropagator(use, t).apply(u0);
}

PropagatorState propagate(const SampledFunction& u0, double t, PropagatorMethod method) {
  if (method == PropagatorMethod::explicit_formula) {
    return {propagate_explicit(u0, t), t, method};
  }
  return {propagate_multiplier(u0, t), t, method};
}

}  // namespace dunkl
