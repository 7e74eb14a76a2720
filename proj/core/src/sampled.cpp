#include "dunkl/sampled.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dunkl {

SampledFunction::SampledFunction(GridPtr grid, Eigen::VectorXcd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("SampledFunction: null grid");
  if (values_.size() != grid_->size()) {
    throw std::invalid_argument("SampledFunction: value count " + std::to_string(values_.size()) +
                                " does not match grid size " + std::to_string(grid_->size()));
  }
}

SampledFunction::SampledFunction(GridPtr grid)
    : SampledFunction(grid, Eigen::VectorXcd::Zero(grid ? grid->size() : 0)) {}

SampledFunction SampledFunction::sample(GridPtr grid,
                                        const std::function<cplx(std::span<const double>)>& f) {
  Eigen::VectorXcd v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v[i] = f(grid->node(i));
  return SampledFunction(std::move(grid), std::move(v));
}

SampledFunction SampledFunction::sample_1d(GridPtr grid, const std::function<cplx(double)>& f) {
  if (grid->dim() != 1) throw std::invalid_argument("sample_1d: grid is not one-dimensional");
  Eigen::VectorXcd v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v[i] = f(grid->x(i));
  return SampledFunction(std::move(grid), std::move(v));
}

double SampledFunction::norm_squared() const {
  return (grid_->weights().array() * values_.array().abs2()).sum();
}

double SampledFunction::norm() const { return std::sqrt(norm_squared()); }

double SampledFunction::l1_norm() const {
  return (grid_->weights().array() * values_.array().abs()).sum();
}

cplx SampledFunction::integral() const {
  return (grid_->weights().cast<cplx>().array() * values_.array()).sum();
}

double SampledFunction::max_abs() const {
  return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0;
}

Eigen::VectorXcd SampledFunction::unitarized() const {
  return (grid_->weights().array().sqrt().cast<cplx>() * values_.array()).matrix();
}

SampledFunction SampledFunction::from_unitarized(GridPtr grid, const Eigen::VectorXcd& u) {
  Eigen::VectorXcd v = (u.array() / grid->weights().array().sqrt().cast<cplx>()).matrix();
  return SampledFunction(std::move(grid), std::move(v));
}

SampledFunction SampledFunction::reflected() const {
  Eigen::VectorXcd v(values_.size());
  for (int i = 0; i < size(); ++i) v[i] = values_[grid_->mirror(i)];
  return SampledFunction(grid_, std::move(v));
}

SampledFunction SampledFunction::conjugated() const {
  return SampledFunction(grid_, values_.conjugate());
}

void require_same_grid(const SampledFunction& a, const SampledFunction& b, const char* what) {
  if (!same_grid(a.grid(), b.grid())) {
    throw std::invalid_argument(std::string(what) + ": functions live on different grids");
  }
}

SampledFunction& SampledFunction::operator+=(const SampledFunction& other) {
  require_same_grid(*this, other, "operator+=");
  values_ += other.values_;
  return *this;
}

SampledFunction& SampledFunction::operator-=(const SampledFunction& other) {
  require_same_grid(*this, other, "operator-=");
  values_ -= other.values_;
  return *this;
}

SampledFunction& SampledFunction::operator*=(cplx s) {
  values_ *= s;
  return *this;
}

SampledFunction operator+(SampledFunction a, const SampledFunction& b) { return a += b; }
SampledFunction operator-(SampledFunction a, const SampledFunction& b) { return a -= b; }
SampledFunction operator*(cplx s, SampledFunction a) { return a *= s; }

SampledFunction pointwise(const SampledFunction& a, const SampledFunction& b) {
  require_same_grid(a, b, "pointwise");
  return SampledFunction(a.grid(), (a.values().array() * b.values().array()).matrix());
}

cplx inner(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g, "inner");
  return (f.grid()->weights().cast<cplx>().array() * f.values().array() *
          g.values().array().conjugate())
      .sum();
}

}  // namespace dunkl
