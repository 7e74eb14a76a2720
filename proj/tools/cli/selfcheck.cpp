#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "cli/commands.hpp"
#include "dunkl/annihilate.hpp"
#include "dunkl/kernel.hpp"
#include "dunkl/lp.hpp"
#include "dunkl/measure.hpp"
#include "dunkl/schrodinger.hpp"
#include "dunkl/thinsets.hpp"
#include "dunkl/transform.hpp"
#include "dunkl/translate.hpp"

namespace dunkl::cli {

namespace {

using namespace std::complex_literals;

// Grid used for the measure sanity check only.
constexpr int kMeasureNodes = 256;

OperatorReport check_measure(const RootSystemConfig& rs) {
  OperatorReport r("selfcheck_measure");
  const double exact = normalization_constant(rs);
  const double quad = normalization_constant_quadrature(rs);
  r.values = {{"c_h", exact}, {"c_h_quadrature", quad}};
  r.check("normalization_constant", std::abs(exact - quad) <= 1e-10 * exact);
  if (rs.dim() == 1) {
    const GridPtr g = QuadratureGrid::build(4.0, kMeasureNodes, rs);
    double total = 0.0;
    for (int i = 0; i < g->size(); ++i) total += g->weight(i);
    const double full = interval_measure(-4.0, 4.0, rs.multiplicity(0));
    r.values["grid_measure_defect"] = std::abs(total - full) / full;
    r.check("grid_measure", std::abs(total - full) <= 1e-12 * full);
  }
  return r;
}

OperatorReport check_kernel(const RootSystemConfig& rs, std::uint64_t seed) {
  OperatorReport r("selfcheck_kernel");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const int d = rs.dim();
  std::vector<double> x(d), y(d);
  double worst = 0.0;
  for (int s = 0; s < 200; ++s) {
    std::complex<double> ref = 1.0;
    for (int a = 0; a < d; ++a) {
      x[a] = u(rng);
      y[a] = u(rng);
      ref *= dunkl_kernel_series_converged(x[a], -1i * y[a], rs.multiplicity(a)).value;
    }
    worst = std::max(worst, std::abs(dunkl_kernel(x, y, rs, KernelMode::minus_i) - ref));
  }
  r.values["max_difference"] = worst;
  r.check("closed_form_matches_series", worst <= 1e-10);
  return r;
}

OperatorReport check_transform(const TransformOperator& op) {
  OperatorReport r("selfcheck_transform");
  const double defect = plancherel_defect(op, 10);
  const SampledFunction g = SampledFunction::sample(op.source(), [](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return cplx(std::exp(-0.5 * r2), 0.0);
  });
  const double fixed = (forward(g, op) - g).max_abs();
  r.values = {{"plancherel_defect", defect}, {"gaussian_fixed_point", fixed}};
  r.check("plancherel", defect <= 1e-5);
  r.check("gaussian_fixed_point", fixed <= 1e-8);
  return r;
}

SampledFunction gaussian_1d(const GridPtr& g, double a, double shift) {
  return SampledFunction::sample_1d(g, [=](double x) { return cplx(std::exp(-a * (x - shift) * (x - shift)), 0.0); });
}

OperatorReport check_translate(const TransformOperator& op) {
  OperatorReport r("selfcheck_translate");
  const SampledFunction f = gaussian_1d(op.source(), 0.5, 0.3);
  const double identity = (translate(f, 0.0, op) - f).max_abs();
  double growth = 0.0;
  for (double y : {0.5, 1.5, 3.0}) growth = std::max(growth, translate(f, y, op).norm() / f.norm());
  r.values = {{"zero_shift_defect", identity}, {"max_norm_ratio", growth}};
  r.check("zero_shift_is_identity", identity <= 1e-9);
  r.check("l2_contraction", growth <= 1.0 + 1e-8);
  return r;
}

OperatorReport check_schrodinger(const TransformPtr& op) {
  OperatorReport r("selfcheck_schrodinger");
  const GridPtr& g = op->source();
  const double gamma = g->config().gamma();
  const SampledFunction u0 = gaussian_1d(g, 0.5, 0.0);
  const double t = 0.25;
  const SampledFunction um = MultiplierPropagator(op, t).apply(u0);
  const std::complex<double> den = 1.0 + 2i * t;
  const SampledFunction exact = SampledFunction::sample_1d(
      g, [&](double x) { return std::pow(den, -(gamma + 0.5)) * std::exp(-0.5 * x * x / den); });
  const double cons = std::abs(um.norm_squared() / u0.norm_squared() - 1.0);
  const double err = (um - exact).norm() / u0.norm();
  r.values = {{"conservation", cons}, {"exact_error", err}};
  r.check("conservation", cons <= 1e-8);
  r.check("exact_gaussian", err <= 1e-6);
  return r;
}

OperatorReport check_thinsets(const RootSystemConfig& rs, std::uint64_t seed) {
  OperatorReport r("selfcheck_thinsets");
  const double empty = thinness_check(SetUnion::empty(), rs, 10.0).epsilon_hat;
  const CombResult comb = generate_comb(0.1, 5, rs, seed);
  r.values = {{"empty_eps_hat", empty}, {"comb_eps_hat", comb.report.epsilon_hat}};
  r.check("empty_set_is_thin", empty == 0.0);
  r.check("comb_certified", comb.report.epsilon_hat <= 0.1);
  return r;
}

OperatorReport check_annihilate(const RootSystemConfig& rs, double R, int n, std::uint64_t seed) {
  OperatorReport r("selfcheck_annihilate");
  const CombResult s = generate_comb(0.1, 5, rs, seed);
  const CombResult sigma = generate_comb(0.1, 5, rs, seed + 1);
  const GridPtr gs = adapted_grid(R, n, rs, {s.set});
  const GridPtr gf = adapted_grid(R, n, rs, {sigma.set});
  const TransformPtr op = TransformOperator::build(gs, gf);
  const double empty = AnnihilationOperator(s.set, SetUnion::empty(), op).norm().value;
  const double comb = AnnihilationOperator(s.set, sigma.set, op).norm().value;
  r.values = {{"empty_sigma_norm", empty}, {"comb_norm", comb}};
  r.check("empty_sigma_gives_zero", empty == 0.0);
  r.check("comb_pair_annihilating", comb < 1.0);
  return r;
}

OperatorReport check_lp(const TransformPtr& op) {
  OperatorReport r("selfcheck_lp");
  const LPFamily fam(2, op->source());
  const SampledFunction f = gaussian_1d(op->source(), 0.5, 0.2);
  const double partition =
      (apply_L_N(f, 2, *op) + apply_T_N(f, 2, *op) - partition_multiplier(f, 2)).max_abs();
  const std::vector<double> pts{-3.0, -1.0, 0.0, 0.5, 2.0, 3.5};
  const double gap = (kernel_M_N(pts, pts, 2, fam) - kernel_M_N_regrouped(pts, pts, 2, fam)).cwiseAbs().maxCoeff();
  r.values = {{"partition_defect", partition}, {"M_N_formula_gap", gap}};
  r.check("partition_identity", partition <= 1e-8);
  r.check("M_N_two_formulas", gap <= 1e-6);
  return r;
}

}  // namespace

CommandOutput run_selfcheck(const ExperimentConfig& cfg, ParamReader& params) {
  params.finish();
  const RootSystemConfig rs = cfg.root_system();
  CommandOutput out;
  out.reports.push_back(check_measure(rs));
  out.reports.push_back(check_kernel(rs, cfg.seed));
  const GridPtr grid = QuadratureGrid::build(cfg.R, cfg.n, rs);
  const TransformPtr op = TransformOperator::build(grid);
  out.reports.push_back(check_transform(*op));
  if (rs.dim() == 1) {
    out.reports.push_back(check_translate(*op));
    out.reports.push_back(check_schrodinger(op));
    out.reports.push_back(check_thinsets(rs, cfg.seed));
    out.reports.push_back(check_annihilate(rs, cfg.R, cfg.n, cfg.seed));
    out.reports.push_back(check_lp(op));
  }
  nlohmann::ordered_json modules = nlohmann::ordered_json::object();
  for (const OperatorReport& r : out.reports) {
    modules[r.experiment] = r.pass;
    out.pass = out.pass && r.pass;
  }
  out.summary = {{"modules", modules}, {"pass", out.pass}};
  return out;
}

}  // namespace dunkl::cli
