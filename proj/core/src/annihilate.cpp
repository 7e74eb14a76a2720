#include "dunkl/annihilate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

#include <Eigen/SVD>

#include "dunkl/schrodinger.hpp"

namespace dunkl {

using namespace std::complex_literals;

GridPtr adapted_grid(double R, int n, const RootSystemConfig& cfg,
                     const std::vector<SetUnion>& sets) {
  GridOptions opt;
  for (const SetUnion& s : sets) {
    if (s.dim() != 1) throw std::invalid_argument("adapted_grid: 1D sets only");
    for (double e : s.endpoints()) {
      if (std::abs(e) < R) opt.breakpoints.push_back(std::abs(e));
    }
  }
  std::sort(opt.breakpoints.begin(), opt.breakpoints.end());
  opt.breakpoints.erase(std::unique(opt.breakpoints.begin(), opt.breakpoints.end()),
                        opt.breakpoints.end());
  return QuadratureGrid::build(R, n, cfg, opt);
}

SampledFunction project_space(const SampledFunction& f, const SetUnion& s) {
  const Eigen::VectorXd m = node_mask(*f.grid(), s);
  return SampledFunction(f.grid(), (f.values().array() * m.cast<cplx>().array()).matrix());
}

SampledFunction project_freq(const SampledFunction& f, const SetUnion& sigma,
                             const TransformOperator& op) {
  const Eigen::VectorXd m = node_mask(*op.target(), sigma);
  Eigen::VectorXcd v = op.forward_unitarized(f.unitarized());
  v.array() *= m.cast<cplx>().array();
  return SampledFunction::from_unitarized(op.source(), op.inverse_unitarized(v));
}

NormMethod norm_method_from_string(const std::string& s) {
  if (s == "svd") return NormMethod::svd;
  if (s == "power") return NormMethod::power;
  throw std::invalid_argument("unknown norm method '" + s + "'");
}

std::string to_string(NormMethod m) { return m == NormMethod::svd ? "svd" : "power"; }

namespace {

std::vector<int> nonzero_indices(const Eigen::VectorXd& mask) {
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    if (mask[i] != 0.0) idx.push_back(static_cast<int>(i));
  }
  return idx;
}

}  // namespace

AnnihilationOperator::AnnihilationOperator(SetUnion s, SetUnion sigma, TransformPtr op)
    : s_(std::move(s)), sigma_(std::move(sigma)), op_(std::move(op)) {
  if (!op_) throw std::invalid_argument("AnnihilationOperator: null transform");
  s_mask_ = node_mask(*op_->source(), s_);
  sigma_mask_ = node_mask(*op_->target(), sigma_);
  s_idx_ = nonzero_indices(s_mask_);
  sigma_idx_ = nonzero_indices(sigma_mask_);
  h_.resize(static_cast<Eigen::Index>(sigma_idx_.size()), static_cast<Eigen::Index>(s_idx_.size()));
  const Eigen::MatrixXcd& U = op_->unitarized();
  for (std::size_t c = 0; c < s_idx_.size(); ++c) {
    for (std::size_t r = 0; r < sigma_idx_.size(); ++r) {
      h_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = U(sigma_idx_[r], s_idx_[c]);
    }
  }
}

Eigen::VectorXcd AnnihilationOperator::apply(const Eigen::VectorXcd& u) const {
  if (u.size() != op_->source()->size()) throw std::invalid_argument("AnnihilationOperator::apply: size mismatch");
  Eigen::VectorXcd in(static_cast<Eigen::Index>(s_idx_.size()));
  for (std::size_t c = 0; c < s_idx_.size(); ++c) in[static_cast<Eigen::Index>(c)] = u[s_idx_[c]];
  const Eigen::VectorXcd out = h_ * in;
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(op_->target()->size());
  for (std::size_t r = 0; r < sigma_idx_.size(); ++r) full[sigma_idx_[r]] = out[static_cast<Eigen::Index>(r)];
  return full;
}

NormResult AnnihilationOperator::norm(NormMethod method, std::uint64_t seed, double tol,
                                      int max_iterations) const {
  NormResult res;
  res.method = method;
  res.left = Eigen::VectorXcd::Zero(op_->target()->size());
  res.right = Eigen::VectorXcd::Zero(op_->source()->size());
  if (h_.rows() == 0 || h_.cols() == 0) return res;

  Eigen::VectorXcd left;
  Eigen::VectorXcd right;
  if (method == NormMethod::svd) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(h_, Eigen::ComputeThinU | Eigen::ComputeThinV);
    res.value = svd.singularValues()[0];
    left = svd.matrixU().col(0);
    right = svd.matrixV().col(0);
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::VectorXcd x(h_.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = {nd(rng), nd(rng)};
    x.normalize();
    double prev = -1.0;
    res.converged = false;
    Eigen::VectorXcd y;
    for (int it = 1; it <= max_iterations; ++it) {
      y = h_ * x;
      const Eigen::VectorXcd z = h_.adjoint() * y;
      const double nz = z.norm();
      res.iterations = it;
      if (nz == 0.0) {
        res.value = 0.0;
        res.converged = true;
        break;
      }
      res.value = std::sqrt(nz);
      x = z / nz;
      if (prev >= 0.0 && std::abs(res.value - prev) <= tol * res.value) {
        res.converged = true;
        break;
      }
      prev = res.value;
    }
    y = h_ * x;
    right = x;
    left = y.norm() > 0.0 ? Eigen::VectorXcd(y / y.norm()) : y;
  }
  for (std::size_t c = 0; c < s_idx_.size(); ++c) res.right[s_idx_[c]] = right[static_cast<Eigen::Index>(c)];
  for (std::size_t r = 0; r < sigma_idx_.size(); ++r) res.left[sigma_idx_[r]] = left[static_cast<Eigen::Index>(r)];
  return res;
}

double operator_norm(const AnnihilationOperator& h, NormMethod method) {
  const NormResult r = h.norm(method);
  if (!r.converged) {
    throw ConvergenceError("operator_norm: power iteration did not converge in " +
                           std::to_string(r.iterations) + " iterations");
  }
  return r.value;
}

nlohmann::ordered_json PairConstants::to_json() const {
  return {{"norm_H", norm_h}, {"D", D}, {"C", C}};
}

PairConstants pair_constants(double norm_h) {
  if (!(norm_h >= 0.0) || !(norm_h < 1.0)) {
    throw std::domain_error("pair_constants: ||H|| = " + std::to_string(norm_h) +
                            " is not an annihilating certificate at this discretization");
  }
  PairConstants pc;
  pc.norm_h = norm_h;
  pc.D = 1.0 / (1.0 - norm_h);
  pc.C = 1.0 + pc.D;
  return pc;
}

PairTerms pair_terms(const SampledFunction& f, const AnnihilationOperator& h) {
  const TransformOperator& op = *h.transform();
  if (!same_grid(f.grid(), op.source())) throw std::invalid_argument("pair_terms: grid mismatch");
  const Eigen::VectorXcd u = f.unitarized();
  PairTerms t;
  t.norm = u.norm();
  t.outside_space = ((1.0 - h.space_mask().array()).cast<cplx>() * u.array()).matrix().norm();
  const Eigen::VectorXcd v = op.forward_unitarized(u);
  const double inside = (h.freq_mask().array().cast<cplx>() * v.array()).matrix().norm();
  t.outside_freq = std::sqrt(std::max(0.0, t.norm * t.norm - inside * inside));
  t.outside_freq_direct = ((1.0 - h.freq_mask().array()).cast<cplx>() * v.array()).matrix().norm();
  return t;
}

std::vector<SampledFunction> schwartz_ensemble(GridPtr grid, int count, std::uint64_t seed,
                                               const EnsembleOptions& o) {
  if (count < 0) throw std::invalid_argument("schwartz_ensemble: negative count");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  std::vector<SampledFunction> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int m = 0; m < count; ++m) {
    const double a = between(o.a_min, o.a_max);
    const double b = between(o.b_min, o.b_max);
    const double c = between(-o.c_max, o.c_max);
    const double x0 = between(-o.shift_max, o.shift_max);
    const double p1 = between(-o.poly_scale, o.poly_scale);
    const double p2 = between(-o.poly_scale, o.poly_scale) * a;
    out.push_back(SampledFunction::sample_1d(grid, [=](double x) {
      const double poly = 1.0 + p1 * x + p2 * x * x;
      return poly * std::exp(-a * (x - x0) * (x - x0) - 1i * (b * x * x) + 1i * (c * x));
    }));
  }
  return out;
}

std::vector<SampledFunction> adversarial_members(const AnnihilationOperator& h,
                                                 const NormResult& nr) {
  const TransformOperator& op = *h.transform();
  std::vector<SampledFunction> out;
  if (nr.value == 0.0) return out;
  out.push_back(SampledFunction::from_unitarized(op.source(), nr.right));
  out.push_back(SampledFunction::from_unitarized(op.source(), op.inverse_unitarized(nr.left)));
  return out;
}

OperatorReport verify_pair(const std::vector<SampledFunction>& ensemble,
                           const AnnihilationOperator& h, const PairConstants& pc) {
  OperatorReport rep("verify_pair");
  rep.parameters["ensemble_size"] = ensemble.size();
  rep.constants = pc.to_json();
  double max_ratio = 0.0;
  double max_sq_ratio = 0.0;
  double max_restricted = 0.0;
  double max_direct_ratio = 0.0;
  int argmax = -1;
  for (std::size_t m = 0; m < ensemble.size(); ++m) {
    const PairTerms t = pair_terms(ensemble[m], h);
    if (t.norm == 0.0) continue;
    const double denom = t.outside_space + t.outside_freq;
    const double ratio = denom > 0.0 ? t.norm / denom : std::numeric_limits<double>::infinity();
    if (ratio > max_ratio) {
      max_ratio = ratio;
      argmax = static_cast<int>(m);
    }
    const double sq = t.outside_space * t.outside_space + t.outside_freq * t.outside_freq;
    max_sq_ratio = std::max(max_sq_ratio, sq > 0.0 ? t.norm * t.norm / sq : std::numeric_limits<double>::infinity());
    const double dd = t.outside_space + t.outside_freq_direct;
    max_direct_ratio = std::max(max_direct_ratio, dd > 0.0 ? t.norm / dd : std::numeric_limits<double>::infinity());
    // Support-restricted form: ||E_S f|| <= D ||chi_{Sigma^c} D E_S f||.
    const SampledFunction fs = project_space(ensemble[m], h.space_set());
    const PairTerms ts = pair_terms(fs, h);
    if (ts.norm > 0.0) {
      max_restricted = std::max(max_restricted, ts.outside_freq > 0.0 ? ts.norm / ts.outside_freq
                                                                     : std::numeric_limits<double>::infinity());
    }
  }
  rep.values["max_ratio"] = max_ratio;
  rep.values["argmax"] = argmax;
  rep.values["max_ratio_direct_complement"] = max_direct_ratio;
  rep.values["max_squared_ratio"] = max_sq_ratio;
  rep.values["max_restricted_ratio"] = max_restricted;
  rep.tolerances["relative"] = 1e-6;
  rep.check("pair_inequality", max_ratio <= pc.C * (1.0 + 1e-6));
  rep.check("squared_form", max_sq_ratio <= 2.0 * pc.C * pc.C * (1.0 + 1e-6));
  rep.check("support_restricted", max_restricted <= pc.D * (1.0 + 1e-6));
  return rep;
}

TwoTimeResult verify_two_time(const std::vector<SampledFunction>& ensemble, const SetUnion& A,
                              const SetUnion& B, double s_time, double t_time,
                              const PairConstants& pc) {
  if (!(s_time >= 0.0) || !(t_time > s_time)) {
    throw std::invalid_argument("verify_two_time: need 0 <= S < T");
  }
  TwoTimeResult out;
  OperatorReport& rep = out.report;
  rep.experiment = "verify_two_time";
  rep.parameters["S"] = s_time;
  rep.parameters["T"] = t_time;
  rep.parameters["ensemble_size"] = ensemble.size();
  rep.constants = pc.to_json();
  const double bound = 2.0 * pc.C * pc.C;
  rep.constants["bound_2C2"] = bound;
  if (ensemble.empty()) {
    rep.values["max_ratio"] = 0.0;
    return out;
  }
  const GridPtr grid = ensemble.front().grid();
  const SetUnion big_b = dilate(B, 2.0 * (t_time - s_time));
  const Eigen::VectorXd mask_a = node_mask(*grid, A);
  const Eigen::VectorXd mask_b = node_mask(*grid, big_b);
  std::unique_ptr<ExplicitPropagator> at_s;
  if (s_time > 0.0) at_s = std::make_unique<ExplicitPropagator>(grid, s_time);
  const ExplicitPropagator at_t(grid, t_time);

  auto mass_in = [&](const SampledFunction& u, const Eigen::VectorXd& mask) {
    return (grid->weights().array() * mask.array() * u.values().array().abs2()).sum();
  };
  double max_ratio = 0.0;
  for (const SampledFunction& u0 : ensemble) {
    if (!same_grid(u0.grid(), grid)) throw std::invalid_argument("verify_two_time: mixed grids");
    TwoTimeMember m;
    m.lhs = u0.norm_squared();
    const SampledFunction us = at_s ? at_s->apply(u0) : u0;
    const SampledFunction ut = at_t.apply(u0);
    m.rhs_first = std::max(0.0, m.lhs - mass_in(us, mask_a));
    m.rhs_second = std::max(0.0, m.lhs - mass_in(ut, mask_b));
    const double rhs = m.rhs_first + m.rhs_second;
    m.ratio = rhs > 0.0 ? m.lhs / rhs : std::numeric_limits<double>::infinity();
    max_ratio = std::max(max_ratio, m.ratio);
    out.members.push_back(m);
  }
  rep.values["max_ratio"] = max_ratio;
  rep.values["chirp_aliasing"] = at_t.aliasing_warning();
  rep.tolerances["relative"] = 1e-4;
  rep.check("two_time_bound", max_ratio <= bound * (1.0 + 1e-4));
  return out;
}

OperatorReport time_shift_consistency(const std::vector<SampledFunction>& ensemble,
                                      const SetUnion& A, const SetUnion& B, double shift,
                                      double duration, const PairConstants& pc) {
  if (!(shift > 0.0) || !(duration > 0.0)) {
    throw std::invalid_argument("time_shift_consistency: need shift > 0 and duration > 0");
  }
  OperatorReport rep("time_shift_consistency");
  rep.parameters["shift"] = shift;
  rep.parameters["duration"] = duration;
  rep.parameters["ensemble_size"] = ensemble.size();
  const TwoTimeResult direct = verify_two_time(ensemble, A, B, shift, shift + duration, pc);
  std::vector<SampledFunction> moved;
  moved.reserve(ensemble.size());
  if (!ensemble.empty()) {
    const ExplicitPropagator at_shift(ensemble.front().grid(), shift);
    for (const SampledFunction& u0 : ensemble) moved.push_back(at_shift.apply(u0));
  }
  const TwoTimeResult reduced = verify_two_time(moved, A, B, 0.0, duration, pc);
  double max_rel = 0.0;
  for (std::size_t m = 0; m < direct.members.size(); ++m) {
    const double a = direct.members[m].ratio;
    const double b = reduced.members[m].ratio;
    if (std::isfinite(a) && std::isfinite(b)) {
      max_rel = std::max(max_rel, std::abs(a - b) / std::max(std::abs(b), 1e-300));
    } else if (std::isfinite(a) != std::isfinite(b)) {
      max_rel = std::numeric_limits<double>::infinity();
    }
  }
  rep.values["max_ratio_shifted"] = direct.report.values["max_ratio"];
  rep.values["max_ratio_reduced"] = reduced.report.values["max_ratio"];
  rep.values["max_relative_difference"] = max_rel;
  rep.tolerances["relative"] = 1e-4;
  rep.check("shift_consistent", max_rel <= 1e-4);
  return rep;
}

}  // namespace dunkl
