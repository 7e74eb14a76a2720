#include "dunkl/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

#include "dunkl/kernel.hpp"

namespace dunkl {

double lp_theta(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double lp_bump(double xi) {
  const double a = std::abs(xi);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double p = lp_theta(2.0 - a);
  const double q = lp_theta(a - 1.0);
  return p / (p + q);
}

double lp_bump_scaled(int j, double xi) { return lp_bump(std::ldexp(xi, -j)); }

double lp_psi(int j, double x) {
  if (j < 0) throw std::invalid_argument("lp_psi: negative index");
  if (j == 0) return lp_bump(x);
  return lp_bump_scaled(j, x) - lp_bump_scaled(j - 1, x);
}

namespace {

constexpr int kMaxLevels = 16;

// Rule on [-2^{level+1}, 2^{level+1}] with panels no longer than `panel`.
GridPtr level_grid(int level, double panel, const RootSystemConfig& cfg) {
  const double radius = std::ldexp(1.0, level + 1);
  const int per_half = std::max(2, static_cast<int>(std::ceil(radius / panel - 1e-9)));
  GridOptions opt;
  opt.breakpoints = {std::ldexp(1.0, level - 1), std::ldexp(1.0, level)};
  return QuadratureGrid::build(radius, 32 * per_half, cfg, opt);
}

// Positive half of a symmetric rule weighted by an even profile.
struct HalfRule {
  std::vector<double> z;
  Eigen::VectorXd w;
};

HalfRule weighted_half(const QuadratureGrid& rule, const std::function<double(double)>& profile) {
  std::vector<double> z;
  std::vector<double> w;
  for (int q = 0; q < rule.size(); ++q) {
    if (rule.x(q) <= 0.0) continue;
    const double p = profile(rule.x(q));
    if (p == 0.0) continue;
    z.push_back(rule.x(q));
    w.push_back(rule.weight(q) * p);
  }
  HalfRule h;
  h.z = std::move(z);
  h.w = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  return h;
}

void kernel_parts(const Rank1Kernel& ker, const std::vector<double>& pts,
                  const std::vector<double>& z, Eigen::MatrixXd& even, Eigen::MatrixXd& odd) {
  const auto np = static_cast<Eigen::Index>(pts.size());
  const auto nz = static_cast<Eigen::Index>(z.size());
  even.resize(np, nz);
  odd.resize(np, nz);
  for (Eigen::Index q = 0; q < nz; ++q) {
    for (Eigen::Index p = 0; p < np; ++p) {
      ker.minus_i_parts(pts[p], z[q], even(p, q), odd(p, q));
    }
  }
}

// c_h int E(xi, -i z) E(eta, i z) w(z) dmu_k(z) over a symmetric rule; the
// integrand's odd part in z cancels, leaving 2 c_h sum_{z > 0} w (ee + oo).
Eigen::MatrixXd profile_translate(const QuadratureGrid& rule, double c_h,
                                  const std::function<double(double)>& profile,
                                  const std::vector<double>& xis, const std::vector<double>& etas) {
  const HalfRule h = weighted_half(rule, profile);
  const auto rows = static_cast<Eigen::Index>(xis.size());
  const auto cols = static_cast<Eigen::Index>(etas.size());
  if (h.z.empty()) return Eigen::MatrixXd::Zero(rows, cols);
  const Rank1Kernel ker(rule.config().multiplicity(0));
  Eigen::MatrixXd ea, oa, eb, ob;
  kernel_parts(ker, xis, h.z, ea, oa);
  kernel_parts(ker, etas, h.z, eb, ob);
  const Eigen::VectorXd scaled = 2.0 * c_h * h.w;
  return (ea * scaled.asDiagonal()) * eb.transpose() + (oa * scaled.asDiagonal()) * ob.transpose();
}

void require_window(const std::vector<double>& pts, const QuadratureGrid& window, const char* what) {
  const double lim = window.radius() * (1.0 + 1e-12);
  for (double p : pts) {
    if (!(std::abs(p) <= lim)) {
      throw std::invalid_argument(std::string(what) + ": point outside the window");
    }
  }
}

void require_order(int N, const LPFamily& fam, const char* what) {
  if (N < 0 || N > fam.n_max()) {
    throw std::invalid_argument(std::string(what) + ": N must lie in [0, " +
                                std::to_string(fam.n_max()) + "]");
  }
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

}  // namespace

LPFamily::LPFamily(int n_max, GridPtr window) : n_max_(n_max), window_(std::move(window)) {
  if (!window_) throw std::invalid_argument("build_family: null grid");
  if (window_->dim() != 1) throw std::invalid_argument("build_family: 1D configurations only");
  if (n_max_ < 0 || n_max_ > kMaxLevels) {
    throw std::invalid_argument("build_family: N_max too large for grid (allowed 0.." +
                                std::to_string(kMaxLevels) + ")");
  }
  const double R = window_->radius();
  active_max_ = 0;
  while (active_max_ < kMaxLevels && std::ldexp(1.0, active_max_) < R) ++active_max_;
  const int top = std::min(n_max_, active_max_);
  const double refine = 1024.0 / window_->requested_resolution();
  for (int j = 0; j <= top; ++j) {
    const double panel = std::min(0.125 * std::ldexp(1.0, j), 3.0 / R) * refine;
    rules_.push_back(level_grid(j, panel, window_->config()));
  }
}

Eigen::MatrixXd LPFamily::translate_profile(int level, const std::function<double(double)>& w,
                                            const std::vector<double>& xis,
                                            const std::vector<double>& etas) const {
  return profile_translate(*rules_.at(level), normalization_constant(config()), w, xis, etas);
}

Eigen::MatrixXd LPFamily::tau_phi(int j, const std::vector<double>& xs,
                                  const std::vector<double>& ys) const {
  return translate_profile(j, [j](double z) { return lp_bump_scaled(j, z); }, xs, ys);
}

double LPFamily::phi(int j, double x) const {
  if (j < 0 || j > n_max_) throw std::invalid_argument("phi: index out of range");
  const double panel =
      std::min(0.125 * std::ldexp(1.0, j), 3.0 / std::max(std::abs(x), window_->radius()));
  const GridPtr rule = level_grid(j, panel, config());
  return profile_translate(*rule, normalization_constant(config()),
                           [j](double z) { return lp_bump_scaled(j, z); }, {0.0}, {x})(0, 0);
}

SampledFunction LPFamily::phi_sampled(int j) const {
  if (j < 0 || j > n_max_) throw std::invalid_argument("phi_sampled: index out of range");
  const std::vector<double> xs = window_->axis_nodes();
  Eigen::MatrixXd v;
  if (j < static_cast<int>(rules_.size())) {
    v = tau_phi(j, {0.0}, xs);
  } else {
    const GridPtr rule = level_grid(j, 3.0 / window_->radius(), config());
    v = profile_translate(*rule, normalization_constant(config()),
                          [j](double z) { return lp_bump_scaled(j, z); }, {0.0}, xs);
  }
  return SampledFunction(window_, v.row(0).transpose().cast<cplx>());
}

double LPFamily::phi_l1(int j, double L, int n) const {
  if (j < 0 || j > n_max_) throw std::invalid_argument("phi_l1: index out of range");
  const double half_width = std::ldexp(L, -j);
  const GridPtr space = QuadratureGrid::build(half_width, n, config());
  const GridPtr freq = level_grid(j, std::min(0.25, 8.0 / L) * std::ldexp(1.0, j), config());
  std::vector<double> xs;
  std::vector<double> ws;
  for (int i = 0; i < space->size(); ++i) {
    if (space->x(i) > 0.0) {
      xs.push_back(space->x(i));
      ws.push_back(space->weight(i));
    }
  }
  const Eigen::MatrixXd v = profile_translate(*freq, normalization_constant(config()),
                                              [j](double z) { return lp_bump_scaled(j, z); },
                                              {0.0}, xs);
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) sum += ws[i] * std::abs(v(0, static_cast<Eigen::Index>(i)));
  return 2.0 * sum;
}

double LPFamily::phi_imaginary_part(const TransformOperator& op) const {
  const SampledFunction b =
      SampledFunction::sample_1d(op.target(), [](double xi) { return cplx(lp_bump(xi), 0.0); });
  return inverse(b, op).values().imag().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd kernel_A_N(const std::vector<double>& xs, const std::vector<double>& ys, int N,
                           const LPFamily& fam) {
  require_order(N, fam, "kernel_A_N");
  require_window(xs, *fam.window(), "kernel_A_N");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(xs.size()),
                                            static_cast<Eigen::Index>(ys.size()));
  for (int j = 0; j <= std::min(N, fam.active_max()); ++j) {
    Eigen::VectorXd psi(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t r = 0; r < xs.size(); ++r) psi[static_cast<Eigen::Index>(r)] = lp_psi(j, xs[r]);
    if (psi.cwiseAbs().maxCoeff() == 0.0) continue;
    a += psi.asDiagonal() * fam.tau_phi(j, xs, ys);
  }
  return a;
}

double kernel_A_N(double x, double y, int N, const LPFamily& fam) {
  return kernel_A_N(std::vector<double>{x}, std::vector<double>{y}, N, fam)(0, 0);
}

Eigen::MatrixXd kernel_M_N(const std::vector<double>& xis, const std::vector<double>& etas, int N,
                           const LPFamily& fam) {
  require_order(N, fam, "kernel_M_N");
  require_window(etas, *fam.window(), "kernel_M_N");
  require_window(xis, *fam.window(), "kernel_M_N");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(xis.size()),
                                            static_cast<Eigen::Index>(etas.size()));
  for (int j = 0; j <= N; ++j) {
    Eigen::VectorXd tail(static_cast<Eigen::Index>(etas.size()));
    for (std::size_t c = 0; c < etas.size(); ++c) {
      tail[static_cast<Eigen::Index>(c)] = 1.0 - lp_bump_scaled(j, etas[c]);
    }
    if (tail.cwiseAbs().maxCoeff() == 0.0) continue;
    m += fam.translate_profile(j, [j](double x) { return lp_psi(j, x); }, xis, etas) *
         tail.asDiagonal();
  }
  return m;
}

double kernel_M_N(double xi, double eta, int N, const LPFamily& fam) {
  return kernel_M_N(std::vector<double>{xi}, std::vector<double>{eta}, N, fam)(0, 0);
}

Eigen::MatrixXd kernel_M_N_regrouped(const std::vector<double>& xis,
                                     const std::vector<double>& etas, int N, const LPFamily& fam) {
  require_order(N, fam, "kernel_M_N_regrouped");
  require_window(etas, *fam.window(), "kernel_M_N_regrouped");
  require_window(xis, *fam.window(), "kernel_M_N_regrouped");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(xis.size()),
                                            static_cast<Eigen::Index>(etas.size()));
  const double top = max_abs(etas);
  Eigen::MatrixXd block;
  int block_level = -1;
  for (int i = 1; std::ldexp(1.0, i - 1) < top; ++i) {
    Eigen::VectorXd psi(static_cast<Eigen::Index>(etas.size()));
    for (std::size_t c = 0; c < etas.size(); ++c) psi[static_cast<Eigen::Index>(c)] = lp_psi(i, etas[c]);
    if (psi.cwiseAbs().maxCoeff() == 0.0) continue;
    const int star = std::min(i - 1, N);
    if (star != block_level) {
      block = fam.translate_profile(star, [star](double x) { return lp_bump_scaled(star, x); },
                                    xis, etas);
      block_level = star;
    }
    m += block * psi.asDiagonal();
  }
  return m;
}

std::vector<double> lp_sample_points(const QuadratureGrid& grid) {
  std::vector<double> pts = grid.axis_nodes();
  const double R = grid.radius();
  const double h = 2.0 * R / grid.requested_resolution();
  for (int m = -1; std::ldexp(1.0, m) < R; ++m) {
    const double c = std::ldexp(1.0, m);
    for (int i = 0; i < 8; ++i) {
      const double t = c + (i - 3.5) * h / 8.0;
      if (t > 0.0 && t <= R) {
        pts.push_back(t);
        pts.push_back(-t);
      }
    }
  }
  return pts;
}

SampledFunction lp_convolve(const SampledFunction& f, int j, const TransformOperator& op) {
  SampledFunction g = forward(f, op);
  const QuadratureGrid& target = *op.target();
  for (int i = 0; i < g.size(); ++i) g.values()[i] *= lp_bump_scaled(j, target.x(i));
  return inverse(g, op);
}

namespace {

Eigen::VectorXd psi_on(const QuadratureGrid& grid, int j) {
  Eigen::VectorXd v(grid.size());
  for (int i = 0; i < grid.size(); ++i) v[i] = lp_psi(j, grid.x(i));
  return v;
}

}  // namespace

SampledFunction apply_L_N(const SampledFunction& f, int N, const TransformOperator& op) {
  if (N < 0) throw std::invalid_argument("apply_L_N: N must be >= 0");
  if (f.grid()->dim() != 1) throw std::invalid_argument("apply_L_N: 1D functions only");
  SampledFunction out(f.grid());
  for (int j = 0; j <= N; ++j) {
    const Eigen::VectorXd psi = psi_on(*f.grid(), j);
    if (psi.cwiseAbs().maxCoeff() == 0.0) continue;
    const SampledFunction c = lp_convolve(f, j, op);
    out.values().array() += psi.cast<cplx>().array() * c.values().array();
  }
  return out;
}

SampledFunction apply_T_N(const SampledFunction& f, int N, const TransformOperator& op) {
  if (N < 0) throw std::invalid_argument("apply_T_N: N must be >= 0");
  if (f.grid()->dim() != 1) throw std::invalid_argument("apply_T_N: 1D functions only");
  SampledFunction out(f.grid());
  for (int j = 0; j <= N; ++j) {
    const Eigen::VectorXd psi = psi_on(*f.grid(), j);
    if (psi.cwiseAbs().maxCoeff() == 0.0) continue;
    const SampledFunction c = lp_convolve(f, j, op);
    out.values().array() += psi.cast<cplx>().array() * (f.values() - c.values()).array();
  }
  return out;
}

SampledFunction partition_multiplier(const SampledFunction& f, int N) {
  if (f.grid()->dim() != 1) throw std::invalid_argument("partition_multiplier: 1D functions only");
  Eigen::VectorXd total = Eigen::VectorXd::Zero(f.size());
  for (int j = 0; j <= N; ++j) total += psi_on(*f.grid(), j);
  return SampledFunction(f.grid(), (total.cast<cplx>().array() * f.values().array()).matrix());
}

OperatorReport bound_suite(int N, const LPFamily& fam, const SetUnion& S, const SetUnion& Sigma,
                           double eps_s, double eps_sigma) {
  const QuadratureGrid& win = *fam.window();
  const RootSystemConfig& cfg = fam.config();
  const std::vector<double> pts = lp_sample_points(win);
  const Eigen::Index nw = win.size();
  const Eigen::VectorXd& w = win.weights();

  OperatorReport rep("lp_bound_suite");
  rep.parameters["N"] = N;
  rep.parameters["k"] = cfg.multiplicity(0);
  rep.parameters["R"] = win.radius();
  rep.parameters["n"] = win.requested_resolution();
  rep.parameters["sample_points"] = pts.size();
  rep.parameters["eps_S"] = eps_s;
  rep.parameters["eps_Sigma"] = eps_sigma;

  const Eigen::MatrixXd A = kernel_A_N(pts, pts, N, fam).cwiseAbs();
  const double b1 = (A.leftCols(nw) * w).maxCoeff();
  const double b2 = (A.topRows(nw).transpose() * w).maxCoeff();
  const Eigen::MatrixXd M = kernel_M_N(pts, pts, N, fam).cwiseAbs();
  const double b3 = (M.leftCols(nw) * w).maxCoeff();
  const double b4 = (M.topRows(nw).transpose() * w).maxCoeff();

  double b5 = 0.0;
  if (!S.is_empty()) {
    const GridPtr gs = adapted_grid(win.radius(), win.requested_resolution(), cfg, {S});
    std::vector<double> ys;
    std::vector<double> wy;
    for (int i = 0; i < gs->size(); ++i) {
      if (S.contains(gs->x(i))) {
        ys.push_back(gs->x(i));
        wy.push_back(gs->weight(i));
      }
    }
    if (!ys.empty()) {
      const Eigen::Map<const Eigen::VectorXd> wv(wy.data(), static_cast<Eigen::Index>(wy.size()));
      b5 = (kernel_A_N(pts, ys, N, fam).cwiseAbs() * wv).maxCoeff();
    }
  }
  double b6 = 0.0;
  if (!Sigma.is_empty()) {
    const GridPtr gf = adapted_grid(win.radius(), win.requested_resolution(), cfg, {Sigma});
    std::vector<double> xis;
    std::vector<double> wx;
    for (int i = 0; i < gf->size(); ++i) {
      if (Sigma.contains(gf->x(i))) {
        xis.push_back(gf->x(i));
        wx.push_back(gf->weight(i));
      }
    }
    if (!xis.empty()) {
      const Eigen::Map<const Eigen::VectorXd> wv(wx.data(), static_cast<Eigen::Index>(wx.size()));
      b6 = (kernel_M_N(xis, pts, N, fam).cwiseAbs().transpose() * wv).maxCoeff();
    }
  }

  const double phi_l1 = fam.phi_l1(0);
  rep.values["bound_i"] = b1;
  rep.values["bound_ii"] = b2;
  rep.values["bound_iii"] = b3;
  rep.values["bound_iv"] = b4;
  rep.values["bound_v"] = b5;
  rep.values["bound_vi"] = b6;
  rep.values["ratio_v"] = eps_s > 0.0 ? b5 / eps_s : 0.0;
  rep.values["ratio_vi"] = eps_sigma > 0.0 ? b6 / eps_sigma : 0.0;
  rep.constants["phi_l1"] = phi_l1;
  rep.tolerances["bound_i_relative"] = 1e-3;
  rep.check("bound_i_le_3_phi_l1", b1 <= 3.0 * phi_l1 * (1.0 + 1e-3));
  rep.check("all_finite", std::isfinite(b1) && std::isfinite(b2) && std::isfinite(b3) &&
                              std::isfinite(b4) && std::isfinite(b5) && std::isfinite(b6));
  return rep;
}

OperatorReport contraction_constants(int N, const LPFamily& fam, const AnnihilationOperator& h,
                                     double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("contraction_constants: eps must be positive");
  const TransformOperator& op = *h.transform();
  const QuadratureGrid& gs = *op.source();
  const std::vector<int>& s_idx = h.space_nodes();
  const std::vector<int>& f_idx = h.freq_nodes();
  const auto ns = static_cast<Eigen::Index>(s_idx.size());
  const double c_h = op.normalization();

  const std::vector<double> xs = gs.axis_nodes();
  std::vector<double> ys;
  Eigen::VectorXd sw(ns);
  Eigen::MatrixXd partition = Eigen::MatrixXd::Zero(gs.size(), ns);
  for (Eigen::Index c = 0; c < ns; ++c) {
    const int i = s_idx[static_cast<std::size_t>(c)];
    ys.push_back(gs.x(i));
    sw[c] = std::sqrt(gs.weight(i));
    double total = 0.0;
    for (int j = 0; j <= N; ++j) total += lp_psi(j, gs.x(i));
    partition(i, c) = total;
  }

  Eigen::MatrixXcd l_mat = Eigen::MatrixXcd::Zero(gs.size(), ns);
  if (ns > 0) {
    const Eigen::VectorXd xw = gs.weights().array().sqrt();
    l_mat = (c_h * (xw.asDiagonal() * kernel_A_N(xs, ys, N, fam) * sw.asDiagonal())).cast<cplx>();
  }
  Eigen::MatrixXcd u_sigma(static_cast<Eigen::Index>(f_idx.size()), gs.size());
  for (std::size_t r = 0; r < f_idx.size(); ++r) {
    u_sigma.row(static_cast<Eigen::Index>(r)) = op.unitarized().row(f_idx[r]);
  }
  const Eigen::MatrixXcd t_mat = u_sigma * (partition.cast<cplx>() - l_mat);
  const double norm_l = spectral_norm(l_mat);
  const double norm_t = spectral_norm(t_mat);
  const double norm_h = spectral_norm(h.submatrix());
  const double partition_residual = spectral_norm(h.submatrix() - u_sigma * partition.cast<cplx>());
  const double root = std::sqrt(eps);

  OperatorReport rep("lp_contraction");
  rep.parameters["N"] = N;
  rep.parameters["eps"] = eps;
  rep.values["norm_L"] = norm_l;
  rep.values["norm_T"] = norm_t;
  rep.values["norm_H"] = norm_h;
  rep.values["partition_residual"] = partition_residual;
  rep.constants["C_L"] = norm_l / root;
  rep.constants["C_T"] = norm_t / root;
  rep.constants["C_H"] = norm_h / root;
  rep.tolerances["triangle_relative"] = 1e-9;
  rep.check("H_le_L_plus_T",
            norm_h <= (norm_l + norm_t + partition_residual) * (1.0 + 1e-9) + 1e-14);
  return rep;
}

OperatorReport decay_estimate_check(int j, double M,
                                    const std::vector<std::pair<double, double>>& pairs,
                                    const LPFamily& fam) {
  if (j < 0 || j > std::min(fam.n_max(), fam.active_max())) {
    throw std::invalid_argument("decay_estimate_check: level out of range");
  }
  const double hom = fam.config().homogeneity();
  const double scale = std::pow(2.0, j * hom);
  double c_direct = 0.0;
  double c_reflected = 0.0;
  std::pair<double, double> arg{0.0, 0.0};
  for (const auto& [x, y] : pairs) {
    const Eigen::MatrixXd v = fam.tau_phi(j, {x}, {y, -y});
    const double dist = std::abs(std::abs(x) - std::abs(y));
    const double bound = scale * std::pow(1.0 + std::ldexp(dist, j), -M);
    const double r = std::abs(v(0, 0)) / bound;
    if (r > c_direct) {
      c_direct = r;
      arg = {x, y};
    }
    c_reflected = std::max(c_reflected, std::abs(v(0, 1)) / bound);
  }
  OperatorReport rep("decay_estimate");
  rep.parameters["j"] = j;
  rep.parameters["M"] = M;
  rep.parameters["pairs"] = pairs.size();
  rep.parameters["n"] = fam.window()->requested_resolution();
  rep.constants["C_M"] = c_direct;
  rep.constants["C_M_reflected"] = c_reflected;
  rep.values["argmax"] = {arg.first, arg.second};
  rep.check("finite", std::isfinite(c_direct) && std::isfinite(c_reflected));
  rep.check("reflected_not_larger", c_reflected <= c_direct * (1.0 + 1e-6));
  return rep;
}

}  // namespace dunkl
