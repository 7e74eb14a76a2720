#include "dunkl/transform.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "dunkl/kernel.hpp"

namespace dunkl {

namespace {

// K[j, i] = E(x_i, -i y_j) for one axis, using the mirror symmetry of both
// node sets to evaluate only the positive quadrant.
Eigen::MatrixXcd axis_kernel(const std::vector<double>& xs, const std::vector<double>& ys,
                             double k) {
  const int ns = static_cast<int>(xs.size());
  const int nt = static_cast<int>(ys.size());
  Eigen::MatrixXcd K(nt, ns);
  const Rank1Kernel kern(k);
  const bool symmetric = ns % 2 == 0 && nt % 2 == 0;
  if (!symmetric) {
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < nt; ++j) K(j, i) = kern.minus_i(xs[i], ys[j]);
    return K;
  }
  for (int i = ns / 2; i < ns; ++i) {
    const int im = ns - 1 - i;
    for (int j = nt / 2; j < nt; ++j) {
      const int jm = nt - 1 - j;
      double e = 0.0;
      double o = 0.0;
      kern.minus_i_parts(xs[i], ys[j], e, o);
      K(j, i) = {e, -o};
      K(jm, i) = {e, o};
      K(j, im) = {e, o};
      K(jm, im) = {e, -o};
    }
  }
  return K;
}

void write_u64(std::ostream& os, std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }

std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  if (!is) throw std::runtime_error("operator dump: truncated file");
  return v;
}

}  // namespace

Eigen::MatrixXcd kernel_matrix(const QuadratureGrid& source, const QuadratureGrid& target) {
  if (!(source.config() == target.config())) {
    throw std::invalid_argument("kernel_matrix: source and target configs differ");
  }
  const RootSystemConfig& cfg = source.config();
  const int d = cfg.dim();
  std::vector<Eigen::MatrixXcd> axes;
  std::vector<int> ns(d);
  std::vector<int> nt(d);
  for (int a = 0; a < d; ++a) {
    const auto xs = source.axis_nodes(a);
    const auto ys = target.axis_nodes(a);
    ns[a] = static_cast<int>(xs.size());
    nt[a] = static_cast<int>(ys.size());
    axes.push_back(axis_kernel(xs, ys, cfg.multiplicity(a)));
  }
  if (d == 1) return axes[0];
  Eigen::MatrixXcd K(target.size(), source.size());
  std::vector<int> jj(d);
  for (int J = 0; J < target.size(); ++J) {
    int rem = J;
    for (int a = d - 1; a >= 0; --a) {
      jj[a] = rem % nt[a];
      rem /= nt[a];
    }
    for (int I = 0; I < source.size(); ++I) {
      int r = I;
      std::complex<double> v(1.0, 0.0);
      for (int a = d - 1; a >= 0; --a) {
        v *= axes[a](jj[a], r % ns[a]);
        r /= ns[a];
      }
      K(J, I) = v;
    }
  }
  return K;
}

Eigen::VectorXcd kernel_row(std::span<const double> p, const QuadratureGrid& target) {
  const RootSystemConfig& cfg = target.config();
  if (static_cast<int>(p.size()) != cfg.dim()) {
    throw std::invalid_argument("kernel_row: point dimension does not match the grid");
  }
  std::vector<Rank1Kernel> kern;
  for (int a = 0; a < cfg.dim(); ++a) kern.emplace_back(cfg.multiplicity(a));
  Eigen::VectorXcd row(target.size());
  for (int j = 0; j < target.size(); ++j) {
    const auto y = target.node(j);
    std::complex<double> v(1.0, 0.0);
    for (int a = 0; a < cfg.dim(); ++a) v *= kern[a].minus_i(p[a], y[a]);
    row[j] = v;
  }
  return row;
}

TransformOperator::TransformOperator(GridPtr source, GridPtr target, Eigen::MatrixXcd u,
                                     double c_h, double tolerance)
    : source_(std::move(source)),
      target_(std::move(target)),
      u_(std::move(u)),
      c_h_(c_h),
      tolerance_(tolerance) {}

TransformPtr TransformOperator::build(GridPtr grid, double tolerance) {
  return build(grid, grid, tolerance);
}

TransformPtr TransformOperator::build(GridPtr source, GridPtr target, double tolerance) {
  if (!source || !target) throw std::invalid_argument("TransformOperator: null grid");
  if (!(source->config() == target->config())) {
    throw std::invalid_argument("TransformOperator: source and target configs differ");
  }
  const double c_h = normalization_constant(source->config());
  const Eigen::VectorXd sw = source->weights().array().sqrt();
  const Eigen::VectorXd tw = target->weights().array().sqrt();
  Eigen::MatrixXcd u = kernel_matrix(*source, *target);
  u = (c_h * tw.asDiagonal()) * u * sw.asDiagonal();
  return TransformPtr(new TransformOperator(std::move(source), std::move(target), std::move(u),
                                            c_h, tolerance));
}

std::complex<double> TransformOperator::forward_entry(int j, int i) const {
  return u_(j, i) * std::sqrt(source_->weight(i) / target_->weight(j));
}

void TransformOperator::dump(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  nlohmann::ordered_json header;
  header["source"] = source_->to_json();
  header["target"] = target_->to_json();
  const std::string text = header.dump();
  os.write(kDumpMagic, 8);
  write_u64(os, text.size());
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  write_u64(os, static_cast<std::uint64_t>(u_.rows()));
  write_u64(os, static_cast<std::uint64_t>(u_.cols()));
  for (int j = 0; j < u_.rows(); ++j) {
    for (int i = 0; i < u_.cols(); ++i) {
      const std::complex<double> v = forward_entry(j, i);
      const double parts[2] = {v.real(), v.imag()};
      os.write(reinterpret_cast<const char*>(parts), sizeof parts);
    }
  }
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

OperatorDump read_operator_dump(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, TransformOperator::kDumpMagic, 8) != 0) {
    throw std::runtime_error("operator dump: bad magic");
  }
  std::string text(read_u64(is), '\0');
  is.read(text.data(), static_cast<std::streamsize>(text.size()));
  const auto header = nlohmann::json::parse(text);
  OperatorDump out;
  out.source = QuadratureGrid::from_json(header.at("source"));
  out.target = QuadratureGrid::from_json(header.at("target"));
  const auto rows = static_cast<Eigen::Index>(read_u64(is));
  const auto cols = static_cast<Eigen::Index>(read_u64(is));
  out.forward.resize(rows, cols);
  for (Eigen::Index j = 0; j < rows; ++j) {
    for (Eigen::Index i = 0; i < cols; ++i) {
      double parts[2];
      is.read(reinterpret_cast<char*>(parts), sizeof parts);
      out.forward(j, i) = {parts[0], parts[1]};
    }
  }
  if (!is) throw std::runtime_error("operator dump: truncated matrix");
  return out;
}

SampledFunction forward(const SampledFunction& f, const TransformOperator& op) {
  if (!same_grid(f.grid(), op.source())) {
    throw std::invalid_argument("forward: function does not live on the operator's source grid");
  }
  return SampledFunction::from_unitarized(op.target(), op.forward_unitarized(f.unitarized()));
}

SampledFunction inverse(const SampledFunction& g, const TransformOperator& op) {
  if (!same_grid(g.grid(), op.target())) {
    throw std::invalid_argument("inverse: function does not live on the operator's target grid");
  }
  return SampledFunction::from_unitarized(op.source(), op.inverse_unitarized(g.unitarized()));
}

Eigen::MatrixXcd schwartz_test_basis(const QuadratureGrid& grid, int max_degree) {
  if (max_degree < 0) throw std::invalid_argument("schwartz_test_basis: negative degree");
  const int d = grid.dim();
  // Hermite functions h_m, m <= max_degree, per node and axis.
  std::vector<std::vector<int>> multi;
  std::vector<int> idx(d, 0);
  std::function<void(int, int)> enumerate = [&](int axis, int left) {
    if (axis == d) {
      multi.push_back(idx);
      return;
    }
    for (int m = 0; m <= left; ++m) {
      idx[axis] = m;
      enumerate(axis + 1, left - m);
    }
  };
  enumerate(0, max_degree);
  Eigen::MatrixXcd V(grid.size(), static_cast<Eigen::Index>(multi.size()));
  std::vector<double> h(max_degree + 1);
  std::vector<std::vector<double>> table(d, std::vector<double>(max_degree + 1));
  for (int n = 0; n < grid.size(); ++n) {
    const auto x = grid.node(n);
    for (int a = 0; a < d; ++a) {
      auto& t = table[a];
      t[0] = std::exp(-0.5 * x[a] * x[a]);
      if (max_degree >= 1) t[1] = std::sqrt(2.0) * x[a] * t[0];
      for (int m = 1; m < max_degree; ++m) {
        t[m + 1] = (std::sqrt(2.0) * x[a] * t[m] - std::sqrt(double(m)) * t[m - 1]) / std::sqrt(m + 1.0);
      }
    }
    const double sw = std::sqrt(grid.weight(n));
    for (std::size_t c = 0; c < multi.size(); ++c) {
      double v = sw;
      for (int a = 0; a < d; ++a) v *= table[a][multi[c][a]];
      V(n, static_cast<Eigen::Index>(c)) = v;
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(V);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(V.rows(), V.cols());
}

double plancherel_defect(const TransformOperator& op, int max_degree) {
  const Eigen::MatrixXcd V = schwartz_test_basis(*op.source(), max_degree);
  const Eigen::MatrixXcd UV = op.unitarized() * V;
  Eigen::MatrixXcd G = UV.adjoint() * UV;
  G -= Eigen::MatrixXcd::Identity(G.rows(), G.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double full_space_defect(const TransformOperator& op, int iterations) {
  const Eigen::MatrixXcd& U = op.unitarized();
  std::mt19937_64 rng(0xD01C);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(U.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = {nd(rng), nd(rng)};
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXcd w = U.adjoint() * (U * v) - v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    const bool converged = std::abs(nw - lambda) <= 1e-10 * nw;
    lambda = nw;
    v = w / nw;
    if (converged) break;
  }
  return lambda;
}

}  // namespace dunkl
