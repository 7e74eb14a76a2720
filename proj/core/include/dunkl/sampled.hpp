#pragma once

#include <complex>
#include <functional>
#include <span>

#include <Eigen/Core>

#include "dunkl/grid.hpp"

namespace dunkl {

using cplx = std::complex<double>;

/// Complex samples f(x_i) on a quadrature grid.
class SampledFunction {
 public:
  SampledFunction(GridPtr grid, Eigen::VectorXcd values);
  /// Zero function on `grid`.
  explicit SampledFunction(GridPtr grid);

  static SampledFunction sample(GridPtr grid,
                                const std::function<cplx(std::span<const double>)>& f);
  static SampledFunction sample_1d(GridPtr grid, const std::function<cplx(double)>& f);

  const GridPtr& grid() const { return grid_; }
  const Eigen::VectorXcd& values() const { return values_; }
  Eigen::VectorXcd& values() { return values_; }
  int size() const { return static_cast<int>(values_.size()); }
  cplx operator[](int i) const { return values_[i]; }

  /// (sum_i w_i |f_i|^2)^{1/2}.
  double norm() const;
  double norm_squared() const;
  /// sum_i w_i |f_i|.
  double l1_norm() const;
  /// sum_i w_i f_i.
  cplx integral() const;
  double max_abs() const;

  /// sqrt(w_i) f_i: coordinates in which the grid inner product is Euclidean.
  Eigen::VectorXcd unitarized() const;
  static SampledFunction from_unitarized(GridPtr grid, const Eigen::VectorXcd& u);

  /// g(x) = f(-x).
  SampledFunction reflected() const;
  SampledFunction conjugated() const;

  SampledFunction& operator+=(const SampledFunction& other);
  SampledFunction& operator-=(const SampledFunction& other);
  SampledFunction& operator*=(cplx s);

 private:
  GridPtr grid_;
  Eigen::VectorXcd values_;
};

SampledFunction operator+(SampledFunction a, const SampledFunction& b);
SampledFunction operator-(SampledFunction a, const SampledFunction& b);
SampledFunction operator*(cplx s, SampledFunction a);
/// Pointwise product.
SampledFunction pointwise(const SampledFunction& a, const SampledFunction& b);

/// <f, g> = sum_i w_i f_i conj(g_i).
cplx inner(const SampledFunction& f, const SampledFunction& g);

/// Throws std::invalid_argument unless both functions live on the same grid.
void require_same_grid(const SampledFunction& a, const SampledFunction& b, const char* what);

}  // namespace dunkl
