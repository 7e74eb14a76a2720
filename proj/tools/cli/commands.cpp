#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dunkl/annihilate.hpp"
#include "dunkl/kernel.hpp"
#include "dunkl/lp.hpp"
#include "dunkl/schrodinger.hpp"
#include "dunkl/thinsets.hpp"
#include "dunkl/transform.hpp"
#include "dunkl/translate.hpp"

namespace dunkl::cli {

namespace {

using json = nlohmann::ordered_json;
using namespace std::complex_literals;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxDenseNodes = 4096;

void require_1d(const ExperimentConfig& cfg, const std::string& command) {
  if (cfg.multiplicities.size() != 1) {
    throw std::invalid_argument(command + ": only d = 1 is supported");
  }
}

GridPtr standard_grid(const ExperimentConfig& cfg) {
  GridPtr g = QuadratureGrid::build(cfg.R, cfg.n, cfg.root_system());
  if (g->size() > kMaxDenseNodes) {
    throw std::invalid_argument("grid has " + std::to_string(g->size()) +
                                " nodes; dense operators are limited to " +
                                std::to_string(kMaxDenseNodes));
  }
  return g;
}

json grid_json(const ExperimentConfig& cfg) { return {{"R", cfg.R}, {"n", cfg.n}}; }

// ---------------------------------------------------------------- sets

struct ResolvedSet {
  SetUnion set;
  double eps_hat = 0.0;
  double r_check = 0.0;
  json description;
};

double default_r_check(const SetUnion& s, double R) {
  double m = 0.0;
  for (double e : s.endpoints()) m = std::max(m, std::abs(e));
  return std::max(2.0 * m, R);
}

SetUnion intervals_from_json(const nlohmann::json& list, const std::string& what) {
  if (!list.is_array()) throw std::invalid_argument(what + ": intervals must be a list of [a, b]");
  std::vector<std::pair<double, double>> pieces;
  for (const auto& p : list) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw std::invalid_argument(what + ": each interval must be [a, b]");
    }
    pieces.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return SetUnion::intervals(std::move(pieces));
}

// null -> comb with eps 0.05; "empty"; {"intervals": [...]}; {"comb": {...}}.
ResolvedSet resolve_set(const nlohmann::json& spec, const RootSystemConfig& cfg, std::uint64_t seed,
                        double R, const std::string& what) {
  ResolvedSet out;
  if (spec.is_string()) {
    if (spec.get<std::string>() != "empty") {
      throw std::invalid_argument(what + ": the only string form is \"empty\"");
    }
    out.set = SetUnion::empty();
    out.description = {{"kind", "empty"}};
    return out;
  }
  double eps = 0.05;
  int extent = static_cast<int>(std::floor(R)) - 1;
  std::uint64_t comb_seed = seed;
  if (spec.is_null() || (spec.is_object() && spec.contains("comb"))) {
    if (spec.is_object()) {
      const auto& c = spec.at("comb");
      if (!c.is_object()) throw std::invalid_argument(what + ": comb must be an object");
      for (auto it = c.begin(); it != c.end(); ++it) {
        if (it.key() != "eps" && it.key() != "extent" && it.key() != "seed_offset") {
          throw std::invalid_argument(what + ": unknown comb field '" + it.key() + "'");
        }
      }
      if (spec.size() != 1) throw std::invalid_argument(what + ": comb spec takes no sibling fields");
      if (c.contains("eps")) eps = c.at("eps").get<double>();
      if (c.contains("extent")) extent = c.at("extent").get<int>();
      if (c.contains("seed_offset")) comb_seed = seed + c.at("seed_offset").get<std::uint64_t>();
    }
    if (extent < 1 || extent >= R) throw std::invalid_argument(what + ": comb extent must lie in [1, R)");
    const CombResult comb = generate_comb(eps, extent, cfg, comb_seed);
    out.set = comb.set;
    out.eps_hat = comb.report.epsilon_hat;
    out.r_check = comb.report.r_check;
    out.description = {{"kind", "comb"},       {"eps_target", eps}, {"extent", extent},
                       {"seed", comb_seed},    {"eps_hat", out.eps_hat},
                       {"intervals", out.set.to_json()}};
    return out;
  }
  if (spec.is_object() && spec.contains("intervals")) {
    if (spec.size() != 1) throw std::invalid_argument(what + ": unknown fields next to 'intervals'");
    out.set = intervals_from_json(spec.at("intervals"), what);
    out.r_check = default_r_check(out.set, R);
    out.eps_hat = out.set.is_empty() ? 0.0 : thinness_check(out.set, cfg, out.r_check).epsilon_hat;
    out.description = {{"kind", "intervals"}, {"eps_hat", out.eps_hat}, {"intervals", out.set.to_json()}};
    return out;
  }
  throw std::invalid_argument(what + ": expected null, \"empty\", {\"intervals\": ...} or {\"comb\": ...}");
}

// ---------------------------------------------------------------- kernel

CommandOutput cmd_kernel(const ExperimentConfig& cfg, ParamReader& p) {
  const int samples = p.integer("samples", 1000);
  const double max_product = p.number("max_product", 20.0);
  const KernelMode mode = kernel_mode_from_string(p.text("mode", "minus_i"));
  p.finish();
  if (samples < 1) throw std::invalid_argument("kernel: samples must be >= 1");
  if (!(max_product > 0.0)) throw std::invalid_argument("kernel: max_product must be positive");

  const RootSystemConfig rs = cfg.root_system();
  const int d = rs.dim();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double span = std::sqrt(max_product);
  auto draw_pair = [&](double& x, double& y) {
    x = 2.0 * span * unit(rng);
    y = unit(rng) * std::min(2.0 * span, max_product / std::max(std::abs(x), 1e-300));
  };
  auto series = [&](std::span<const double> x, std::span<const double> y) {
    std::complex<double> v = 1.0;
    for (int a = 0; a < d; ++a) {
      const std::complex<double> ya = mode == KernelMode::minus_i ? -1i * y[a] : y[a];
      v *= dunkl_kernel_series_converged(x[a], ya, rs.multiplicity(a)).value;
    }
    return v;
  };

  CsvTable table{"samples", {}, {}};
  for (int a = 0; a < d; ++a) table.columns.push_back("x" + std::to_string(a));
  for (int a = 0; a < d; ++a) table.columns.push_back("y" + std::to_string(a));
  for (const char* c : {"re", "im", "series_re", "series_im", "regime", "relative_difference"}) {
    table.columns.emplace_back(c);
  }
  double max_diff = 0.0;
  double sym = 0.0;
  double scale = 0.0;
  double reflect = 0.0;
  double bounded = 0.0;
  std::vector<double> x(d), y(d), xs(d), ys(d);
  for (int s = 0; s < samples; ++s) {
    for (int a = 0; a < d; ++a) draw_pair(x[a], y[a]);
    const KernelValue kv = evaluate_kernel(x, y, rs, mode);
    const std::complex<double> ref = series(x, y);
    const double diff = std::abs(kv.value - ref) / std::max(1.0, std::abs(ref));
    max_diff = std::max(max_diff, diff);
    // E(x, y) = E(y, x); E(l x, y) = E(x, l y); E(-x, -iy) = conj E(x, -iy); |E(x, -iy)| <= 1.
    sym = std::max(sym, std::abs(dunkl_kernel(y, x, rs, mode) - kv.value) / std::max(1.0, std::abs(kv.value)));
    const double lam = 0.5 + 0.5 * (unit(rng) + 1.0);
    for (int a = 0; a < d; ++a) {
      xs[a] = lam * x[a];
      ys[a] = y[a] / lam;
    }
    const std::complex<double> lhs = dunkl_kernel(xs, y, rs, mode);
    for (int a = 0; a < d; ++a) ys[a] = lam * y[a];
    scale = std::max(scale, std::abs(lhs - dunkl_kernel(x, ys, rs, mode)) / std::max(1.0, std::abs(lhs)));
    if (mode == KernelMode::minus_i) {
      for (int a = 0; a < d; ++a) xs[a] = -x[a];
      reflect = std::max(reflect, std::abs(dunkl_kernel(xs, y, rs, mode) - std::conj(kv.value)));
      bounded = std::max(bounded, std::abs(kv.value));
    }
    std::vector<double> row(x.begin(), x.end());
    row.insert(row.end(), y.begin(), y.end());
    row.insert(row.end(), {kv.value.real(), kv.value.imag(), ref.real(), ref.imag(),
                           static_cast<double>(static_cast<int>(kv.regime)), diff});
    table.rows.push_back(std::move(row));
  }
  OperatorReport rep("kernel_vs_series");
  rep.parameters = {{"samples", samples}, {"max_product", max_product}, {"mode", to_string(mode)}};
  rep.values["max_relative_difference"] = max_diff;
  rep.values["symmetry_defect"] = sym;
  rep.values["scaling_defect"] = scale;
  rep.tolerances["kernel"] = 1e-10;
  rep.check("closed_form_matches_series", max_diff <= 1e-10);
  rep.check("symmetry", sym <= 1e-10);
  rep.check("scaling", scale <= 1e-10);
  if (mode == KernelMode::minus_i) {
    rep.values["reflection_defect"] = reflect;
    rep.values["max_modulus"] = bounded;
    rep.check("reflection_conjugate", reflect <= 1e-10);
    rep.check("bounded_by_one", bounded <= 1.0 + 1e-12);
  }
  CommandOutput out;
  out.summary = {{"max_relative_difference", max_diff}};
  out.pass = rep.pass;
  out.reports.push_back(std::move(rep));
  out.tables.push_back(std::move(table));
  return out;
}

// ---------------------------------------------------------------- transform

CommandOutput cmd_transform(const ExperimentConfig& cfg, ParamReader& p) {
  const int max_degree = p.integer("max_degree", 20);
  const double tol = p.number("tolerance", 1e-6);
  const std::string dump = p.text("dump_operator", "");
  p.finish();
  if (max_degree < 0) throw std::invalid_argument("transform: max_degree must be >= 0");

  const GridPtr grid = standard_grid(cfg);
  const TransformPtr op = TransformOperator::build(grid, tol);
  const double defect = plancherel_defect(*op, max_degree);
  const double full = full_space_defect(*op);
  const Eigen::MatrixXcd basis = schwartz_test_basis(*grid, max_degree);
  const Eigen::MatrixXcd back = op->inverse_unitarized(op->forward_unitarized(basis.col(0)));
  double round_trip = (back - basis.col(0)).norm();
  for (Eigen::Index c = 1; c < basis.cols(); ++c) {
    const Eigen::VectorXcd v = basis.col(c);
    round_trip = std::max(round_trip, (op->inverse_unitarized(op->forward_unitarized(v)) - v).norm());
  }
  if (!dump.empty()) op->dump(dump);

  const int d = grid->dim();
  const SampledFunction g = SampledFunction::sample(grid, [](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return cplx(std::exp(-0.5 * r2), 0.0);
  });
  const SampledFunction dg = forward(g, *op);
  CsvTable table{"gaussian", {}, {}};
  for (int a = 0; a < d; ++a) table.columns.push_back("x" + std::to_string(a));
  for (const char* c : {"weight", "f", "Df_re", "Df_im", "exact"}) table.columns.emplace_back(c);
  double fixed_point = 0.0;
  for (int i = 0; i < grid->size(); ++i) {
    const auto x = grid->node(i);
    std::vector<double> row(x.begin(), x.end());
    row.insert(row.end(), {grid->weight(i), g[i].real(), dg[i].real(), dg[i].imag(), g[i].real()});
    fixed_point = std::max(fixed_point, std::abs(dg[i] - g[i]));
    table.rows.push_back(std::move(row));
  }
  OperatorReport rep("transform");
  rep.parameters = {{"max_degree", max_degree}, {"tolerance", tol}, {"nodes", grid->size()}};
  rep.values["plancherel_defect"] = defect;
  rep.values["full_space_defect"] = full;
  rep.values["round_trip"] = round_trip;
  rep.values["gaussian_fixed_point"] = fixed_point;
  rep.tolerances = {{"plancherel", 1e-5}, {"round_trip", 1e-7}};
  rep.check("plancherel", defect <= 1e-5);
  rep.check("round_trip", round_trip <= 1e-7);
  if (!dump.empty()) rep.notes.push_back("operator dumped to " + dump);
  CommandOutput out;
  out.summary = {{"plancherel_defect", defect}, {"round_trip", round_trip}};
  out.pass = rep.pass;
  out.reports.push_back(std::move(rep));
  out.tables.push_back(std::move(table));
  return out;
}

// ---------------------------------------------------------------- propagate

CommandOutput cmd_propagate(const ExperimentConfig& cfg, ParamReader& p) {
  const std::vector<double> times = p.numbers("times", {0.5, 1.0, 2.0});
  const std::string method = p.text("method", "both");
  const double c = p.number("c", 0.25);
  const double tau = p.number("tau", 1.0);
  const double poly = p.number("p", 0.3);
  p.finish();
  require_1d(cfg, "propagate");
  if (method != "both" && method != "explicit" && method != "multiplier") {
    throw std::invalid_argument("propagate: method must be explicit, multiplier or both");
  }
  if (!(c > 0.0)) throw std::invalid_argument("propagate: c must be positive");
  for (double t : times) {
    if (!(t >= 0.0)) throw std::invalid_argument("propagate: times must be >= 0");
  }
  const GridPtr grid = standard_grid(cfg);
  const double gamma = grid->config().gamma();
  // u0 = (1 + p x) exp(-alpha x^2) focuses to exp(-c x^2) at time tau when p = 0.
  const std::complex<double> alpha = c / (1.0 - 4i * c * tau);
  const SampledFunction u0 = SampledFunction::sample_1d(
      grid, [&](double x) { return (1.0 + poly * x) * std::exp(-alpha * x * x); });
  const double mass0 = u0.norm_squared();
  const TransformPtr op = TransformOperator::build(grid);

  OperatorReport rep("propagate");
  rep.parameters = {{"times", times}, {"method", method}, {"alpha_re", alpha.real()},
                    {"alpha_im", alpha.imag()}, {"p", poly}};
  CsvTable table{"solution", {"x", "t", "explicit_re", "explicit_im", "multiplier_re", "multiplier_im"}, {}};
  double worst_conservation = 0.0;
  double worst_agreement = 0.0;
  double worst_exact = 0.0;
  json per_t = json::array();
  for (double t : times) {
    json row = {{"t", t}};
    std::optional<SampledFunction> ue, um;
    if (method != "multiplier") {
      if (t > 0.0 && t >= explicit_time_floor(*grid)) {
        const ExplicitPropagator prop(grid, t);
        ue = prop.apply(u0);
        row["chirp_aliasing"] = prop.aliasing_warning();
      } else if (t == 0.0) {
        ue = u0;
      } else {
        rep.notes.push_back("explicit route skipped at t = " + std::to_string(t) + " (below time floor)");
      }
    }
    if (method != "explicit") um = MultiplierPropagator(op, t).apply(u0);
    for (const auto* u : {ue ? &*ue : nullptr, um ? &*um : nullptr}) {
      if (!u) continue;
      const double cons = std::abs(u->norm_squared() / mass0 - 1.0);
      worst_conservation = std::max(worst_conservation, cons);
    }
    if (ue) row["explicit_conservation"] = std::abs(ue->norm_squared() / mass0 - 1.0);
    if (um) row["multiplier_conservation"] = std::abs(um->norm_squared() / mass0 - 1.0);
    if (ue && um) {
      const double agree = (*ue - *um).norm() / std::sqrt(mass0);
      row["relative_difference"] = agree;
      worst_agreement = std::max(worst_agreement, agree);
    }
    if (poly == 0.0) {
      const std::complex<double> den = 1.0 + 4i * alpha * t;
      const SampledFunction exact = SampledFunction::sample_1d(grid, [&](double x) {
        return std::pow(den, -(gamma + 0.5)) * std::exp(-alpha * x * x / den);
      });
      const SampledFunction& u = um ? *um : *ue;
      const double err = (u - exact).norm() / std::sqrt(mass0);
      row["exact_error"] = err;
      worst_exact = std::max(worst_exact, err);
    }
    for (int i = 0; i < grid->size(); ++i) {
      table.rows.push_back({grid->x(i), t, ue ? (*ue)[i].real() : kNaN, ue ? (*ue)[i].imag() : kNaN,
                            um ? (*um)[i].real() : kNaN, um ? (*um)[i].imag() : kNaN});
    }
    per_t.push_back(std::move(row));
  }
  rep.values["per_time"] = per_t;
  rep.values["max_conservation_error"] = worst_conservation;
  rep.values["max_relative_difference"] = worst_agreement;
  rep.tolerances = {{"conservation", 1e-5}, {"agreement", 1e-5}, {"exact", 1e-6}};
  rep.check("conservation", worst_conservation <= 1e-5);
  if (method == "both") rep.check("explicit_matches_multiplier", worst_agreement <= 1e-5);
  if (poly == 0.0) {
    rep.values["max_exact_error"] = worst_exact;
    rep.check("matches_exact_gaussian", worst_exact <= 1e-6);
  }
  CommandOutput out;
  out.summary = {{"max_conservation_error", worst_conservation},
                 {"max_relative_difference", worst_agreement}};
  out.pass = rep.pass;
  out.reports.push_back(std::move(rep));
  out.tables.push_back(std::move(table));
  return out;
}

// ---------------------------------------------------------------- thin sets

CsvTable interval_table(const SetUnion& s) {
  CsvTable t{"intervals", {"a", "b"}, {}};
  for (const Box& b : s.pieces()) t.rows.push_back({b.lo[0], b.hi[0]});
  return t;
}

CommandOutput cmd_thin_gen(const ExperimentConfig& cfg, ParamReader& p) {
  const double eps = p.number("eps", 0.05);
  const int extent = p.integer("extent", static_cast<int>(std::floor(cfg.R)) - 1);
  CombOptions o;
  o.width_scale = p.number("width_scale", o.width_scale);
  o.jitter = p.number("jitter", o.jitter);
  o.shrink = p.number("shrink", o.shrink);
  o.max_iterations = p.integer("max_iterations", o.max_iterations);
  o.samples_per_rho = p.integer("samples_per_rho", o.samples_per_rho);
  p.finish();
  require_1d(cfg, "thin gen");
  const CombResult comb = generate_comb(eps, extent, cfg.root_system(), cfg.seed, o);
  OperatorReport rep("thin_gen");
  rep.parameters = {{"eps", eps}, {"extent", extent}};
  rep.values = comb.report.to_json();
  rep.values["iterations"] = comb.iterations;
  rep.values["pieces"] = comb.set.size();
  rep.check("certified", comb.report.epsilon_hat <= eps);
  CommandOutput out;
  out.summary = {{"eps_hat", comb.report.epsilon_hat}, {"set", comb.set.to_json()}};
  out.artifacts.emplace_back("set", json{{"intervals", comb.set.to_json()},
                                         {"eps_hat", comb.report.epsilon_hat},
                                         {"r_check", comb.report.r_check}});
  out.tables.push_back(interval_table(comb.set));
  out.pass = rep.pass;
  out.reports.push_back(std::move(rep));
  return out;
}

CommandOutput cmd_thin_check(const ExperimentConfig& cfg, ParamReader& p) {
  const nlohmann::json spec = p.raw("set");
  const double eps = p.has("eps") ? p.number("eps", kNaN) : kNaN;
  const int spr = p.integer("samples_per_rho", kDefaultSamplesPerRho);
  const bool has_r = p.has("r_check");
  const double r_in = has_r ? p.number("r_check", 0.0) : 0.0;
  p.finish();
  require_1d(cfg, "thin check");
  if (spec.is_null()) throw std::invalid_argument("thin check: experiment.set is required");
  SetUnion s = spec.is_string() && spec.get<std::string>() == "empty"
                   ? SetUnion::empty()
                   : intervals_from_json(spec, "thin check");
  const double r_check = has_r ? r_in : default_r_check(s, cfg.R);
  const ThinnessReport tr = thinness_check(s, cfg.root_system(), r_check, spr);
  OperatorReport rep("thin_check");
  rep.parameters = {{"r_check", r_check}, {"samples_per_rho", spr}};
  rep.values = tr.to_json();
  if (std::isfinite(eps)) rep.check("below_target", tr.epsilon_hat <= eps);
  CommandOutput out;
  out.summary = {{"eps_hat", tr.epsilon_hat}};
  out.pass = rep.pass;
  out.reports.push_back(std::move(rep));
  return out;
}

// ---------------------------------------------------------------- pairs

struct PairSetup {
  ResolvedSet S;
  ResolvedSet Sigma;
  GridPtr space;
  GridPtr freq;
  std::unique_ptr<AnnihilationOperator> h;
};

PairSetup build_pair(const ExperimentConfig& cfg, const nlohmann::json& s_spec,
                     const nlohmann::json& sigma_spec, const std::vector<SetUnion>& extra_space) {
  PairSetup ps;
  const RootSystemConfig rs = cfg.root_system();
  ps.S = resolve_set(s_spec, rs, cfg.seed, cfg.R, "S");
  ps.Sigma = resolve_set(sigma_spec, rs, cfg.seed + 1, cfg.R, "Sigma");
  std::vector<SetUnion> space_sets{ps.S.set};
  space_sets.insert(space_sets.end(), extra_space.begin(), extra_space.end());
  ps.space = adapted_grid(cfg.R, cfg.n, rs, space_sets);
  ps.freq = adapted_grid(cfg.R, cfg.n, rs, {ps.Sigma.set});
  ps.h = std::make_unique<AnnihilationOperator>(ps.S.set, ps.Sigma.set,
                                                TransformOperator::build(ps.space, ps.freq));
  return ps;
}

json pair_summary(const PairSetup& ps, const ExperimentConfig& cfg) {
  return {{"sets", {{"S", ps.S.description}, {"Sigma", ps.Sigma.description}}},
          {"grid", grid_json(cfg)}};
}

CommandOutput cmd_pair_norm(const ExperimentConfig& cfg, ParamReader& p) {
  const nlohmann::json s_spec = p.raw("S");
  const nlohmann::json sigma_spec = p.raw("Sigma");
  const NormMethod method = norm_method_from_string(p.text("method", "svd"));
  p.finish();
  require_1d(cfg, "pair norm");
  const PairSetup ps = build_pair(cfg, s_spec, sigma_spec, {});
  const NormResult primary = ps.h->norm(method, cfg.seed);
  const NormMethod other = method == NormMethod::svd ? NormMethod::power : NormMethod::svd;
  const NormResult secondary = ps.h->norm(other, cfg.seed);
  OperatorReport rep("pair_norm");
  rep.parameters = {{"method", to_string(method)}};
  rep.values = {{"norm_H", primary.value},
                {"cross_check_method", to_string(other)},
                {"cross_check_value", secondary.value},
                {"iterations", method == NormMethod::power ? primary.iterations : secondary.iterations}};
  rep.check("methods_agree", std::abs(primary.value - secondary.value) <= 1e-6);
  CommandOutput out;
  out.summary = pair_summary(ps, cfg);
  out.summary["norm_H"] = primary.value;
  try {
    const PairConstants pc = pair_constants(primary.value);
    out.summary["D"] = pc.D;
    out.summary["C"] = pc.C;
    rep.constants = pc.to_json();
    rep.check("annihilating_certificate", true);
  } catch (const std::domain_error& e) {
    out.summary["D"] = nullptr;
    out.summary["C"] = nullptr;
    rep.notes.emplace_back(e.what());
    rep.check("annihilating_certificate", false);
  }
  out.summary["ensemble_size"] = 0;
  out.summary["max_ratio"] = nullptr;
  out.pass = rep.pass;
  out.summary["pass"] = out.pass;
  out.reports.push_back(std::move(rep));
  return out;
}

CsvTable member_table(const std::vector<SampledFunction>& ens, const AnnihilationOperator& h) {
  CsvTable t{"members", {"index", "norm", "outside_space", "outside_freq", "ratio"}, {}};
  for (std::size_t m = 0; m < ens.size(); ++m) {
    const PairTerms pt = pair_terms(ens[m], h);
    const double den = pt.outside_space + pt.outside_freq;
    t.rows.push_back({static_cast<double>(m), pt.norm, pt.outside_space, pt.outside_freq,
                      den > 0.0 ? pt.norm / den : std::numeric_limits<double>::infinity()});
  }
  return t;
}

CommandOutput cmd_pair_verify(const ExperimentConfig& cfg, ParamReader& p) {
  const nlohmann::json s_spec = p.raw("S");
  const nlohmann::json sigma_spec = p.raw("Sigma");
  const int size = p.integer("ensemble_size", 50);
  p.finish();
  require_1d(cfg, "pair verify");
  if (size < 0) throw std::invalid_argument("pair verify: ensemble_size must be >= 0");
  const PairSetup ps = build_pair(cfg, s_spec, sigma_spec, {});
  const NormResult nr = ps.h->norm(NormMethod::svd, cfg.seed);
  CommandOutput out;
  out.summary = pair_summary(ps, cfg);
  out.summary["norm_H"] = nr.value;
  const PairConstants pc = pair_constants(nr.value);
  std::vector<SampledFunction> ens = schwartz_ensemble(ps.space, size, cfg.seed);
  for (SampledFunction& f : adversarial_members(*ps.h, nr)) ens.push_back(std::move(f));
  OperatorReport rep = verify_pair(ens, *ps.h, pc);
  out.summary["D"] = pc.D;
  out.summary["C"] = pc.C;
  out.summary["ensemble_size"] = ens.size();
  out.summary["max_ratio"] = rep.values["max_ratio"];
  out.pass = rep.pass;
  out.summary["pass"] = out.pass;
  out.tables.push_back(member_table(ens, *ps.h));
  out.reports.push_back(std::move(rep));
  return out;
}

CommandOutput cmd_two_time(const ExperimentConfig& cfg, ParamReader& p) {
  const nlohmann::json a_spec = p.raw("A");
  const nlohmann::json b_spec = p.raw("B");
  const int size = p.integer("ensemble_size", 50);
  nlohmann::json times = p.raw("times");
  p.finish();
  require_1d(cfg, "two-time");
  if (times.is_null()) times = nlohmann::json::array({{0.0, 1.0}, {0.5, 1.5}});
  std::vector<std::pair<double, double>> pairs;
  if (!times.is_array()) throw std::invalid_argument("two-time: times must be a list of [S, T]");
  for (const auto& t : times) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_number()) {
      throw std::invalid_argument("two-time: each time pair must be [S, T]");
    }
    pairs.emplace_back(t[0].get<double>(), t[1].get<double>());
    if (!(pairs.back().first >= 0.0) || !(pairs.back().second > pairs.back().first)) {
      throw std::invalid_argument("two-time: need 0 <= S < T");
    }
  }
  const PairSetup ps = build_pair(cfg, a_spec, b_spec, {});
  const double norm_h = ps.h->norm(NormMethod::svd, cfg.seed).value;
  const PairConstants pc = pair_constants(norm_h);
  CommandOutput out;
  out.summary = pair_summary(ps, cfg);
  out.summary["norm_H"] = norm_h;
  out.summary["C"] = pc.C;
  out.summary["bound_2C2"] = 2.0 * pc.C * pc.C;
  CsvTable table{"members", {"S", "T", "index", "lhs", "rhs_first", "rhs_second", "ratio"}, {}};
  json maxima = json::array();
  for (const auto& [s, t] : pairs) {
    const SetUnion big_b = dilate(ps.Sigma.set, 2.0 * (t - s));
    const GridPtr grid = adapted_grid(cfg.R, cfg.n, cfg.root_system(), {ps.S.set, big_b});
    const std::vector<SampledFunction> ens = schwartz_ensemble(grid, size, cfg.seed);
    TwoTimeResult r = verify_two_time(ens, ps.S.set, ps.Sigma.set, s, t, pc);
    for (std::size_t m = 0; m < r.members.size(); ++m) {
      const TwoTimeMember& mm = r.members[m];
      table.rows.push_back({s, t, static_cast<double>(m), mm.lhs, mm.rhs_first, mm.rhs_second, mm.ratio});
    }
    maxima.push_back({{"S", s}, {"T", t}, {"max_ratio", r.report.values["max_ratio"]}});
    out.pass = out.pass && r.report.pass;
    out.reports.push_back(std::move(r.report));
    if (s > 0.0) {
      OperatorReport shift = time_shift_consistency(ens, ps.S.set, ps.Sigma.set, s, t - s, pc);
      out.pass = out.pass && shift.pass;
      out.reports.push_back(std::move(shift));
    }
  }
  out.summary["ensemble_size"] = size;
  out.summary["max_ratio"] = maxima;
  out.summary["pass"] = out.pass;
  out.tables.push_back(std::move(table));
  return out;
}

// ---------------------------------------------------------------- lp

CommandOutput cmd_lp_bounds(const ExperimentConfig& cfg, ParamReader& p) {
  const std::vector<int> Ns = p.integers("N", {2, 4, 6});
  const std::vector<double> eps_list = p.numbers("eps_list", {0.025, 0.05, 0.1});
  const int extent = p.integer("extent", static_cast<int>(std::floor(cfg.R)) - 1);
  p.finish();
  require_1d(cfg, "lp bounds");
  if (Ns.empty() || eps_list.empty()) throw std::invalid_argument("lp bounds: N and eps_list must be non-empty");
  const int n_max = *std::max_element(Ns.begin(), Ns.end());
  const RootSystemConfig rs = cfg.root_system();
  const GridPtr grid = standard_grid(cfg);
  const LPFamily fam(n_max, grid);
  const double phi_l1 = fam.phi_l1(0);
  CommandOutput out;
  CsvTable table{"bounds", {"bound", "N", "eps_hat", "value", "ratio"}, {}};
  const char* ids[] = {"bound_i", "bound_ii", "bound_iii", "bound_iv", "bound_v", "bound_vi"};

  // Family invariants.
  OperatorReport fam_rep("lp_family");
  const TransformPtr op = TransformOperator::build(grid);
  double l1_spread = 0.0;
  for (int j = 1; j <= std::min(n_max, 4); ++j) {
    l1_spread = std::max(l1_spread, std::abs(fam.phi_l1(j) - phi_l1));
  }
  const double imag = fam.phi_imaginary_part(*op);
  std::vector<double> pts;
  for (int i = 0; i < 64; ++i) pts.push_back(-0.99 * cfg.R + i * 1.98 * cfg.R / 63.0);
  const int n_formula = std::min(n_max, 4);
  const double formula_gap =
      (kernel_M_N(pts, pts, n_formula, fam) - kernel_M_N_regrouped(pts, pts, n_formula, fam))
          .cwiseAbs()
          .maxCoeff();
  const SampledFunction f = SampledFunction::sample_1d(grid, [](double x) {
    return cplx(std::exp(-0.5 * x * x) * (1.0 + 0.3 * x), 0.2 * x * std::exp(-x * x));
  });
  double partition_gap = 0.0;
  for (int N : Ns) {
    const SampledFunction lt = apply_L_N(f, N, *op) + apply_T_N(f, N, *op);
    partition_gap = std::max(partition_gap, (lt - partition_multiplier(f, N)).max_abs());
  }
  fam_rep.values = {{"phi_l1", phi_l1},
                    {"phi_l1_scaling_gap", l1_spread},
                    {"phi_imaginary", imag},
                    {"M_N_formula_gap", formula_gap},
                    {"M_N_formula_N", n_formula},
                    {"partition_gap", partition_gap}};
  fam_rep.tolerances = {{"phi_l1", 1e-6}, {"imaginary", 1e-9}, {"M_N", 1e-7}, {"partition", 1e-8}};
  fam_rep.check("phi_l1_scaling", l1_spread <= 1e-6 * phi_l1);
  fam_rep.check("phi_real", imag <= 1e-9);
  fam_rep.check("M_N_two_formulas", formula_gap <= 1e-7);
  fam_rep.check("partition_identity", partition_gap <= 1e-8);
  out.pass = fam_rep.pass;
  out.reports.push_back(std::move(fam_rep));

  // Bound suite over N and eps.
  std::map<std::string, std::vector<double>> by_bound;
  std::vector<double> ratio_v, ratio_vi, c_h, c_l;
  json sweep = json::array();
  for (double eps : eps_list) {
    const CombResult s_comb = generate_comb(eps, extent, rs, cfg.seed);
    const CombResult sigma_comb = generate_comb(eps, extent, rs, cfg.seed + 1);
    const double eps_s = s_comb.report.epsilon_hat;
    const double eps_sigma = sigma_comb.report.epsilon_hat;
    const double eps_hat = std::max(eps_s, eps_sigma);
    for (int N : Ns) {
      OperatorReport r = bound_suite(N, fam, s_comb.set, sigma_comb.set, eps_s, eps_sigma);
      for (int b = 0; b < 6; ++b) {
        const double v = r.values[ids[b]].get<double>();
        const double ratio = b < 4 ? v / phi_l1 : v / (b == 4 ? eps_s : eps_sigma);
        table.rows.push_back({static_cast<double>(b + 1), static_cast<double>(N), b == 4 ? eps_s : (b == 5 ? eps_sigma : eps_hat), v, ratio});
        if (b < 4) by_bound[std::string(ids[b]) + "@" + std::to_string(eps)].push_back(v);
      }
      if (N == n_max) {
        ratio_v.push_back(r.values["ratio_v"].get<double>());
        ratio_vi.push_back(r.values["ratio_vi"].get<double>());
      }
      out.pass = out.pass && r.pass;
      out.reports.push_back(std::move(r));
    }
    const GridPtr gs = adapted_grid(cfg.R, cfg.n, rs, {s_comb.set});
    const GridPtr gf = adapted_grid(cfg.R, cfg.n, rs, {sigma_comb.set});
    const AnnihilationOperator h(s_comb.set, sigma_comb.set, TransformOperator::build(gs, gf));
    OperatorReport cr = contraction_constants(n_max, fam, h, eps_hat);
    c_h.push_back(cr.constants["C_H"].get<double>());
    c_l.push_back(cr.constants["C_L"].get<double>());
    sweep.push_back({{"eps_target", eps}, {"eps_S", eps_s}, {"eps_Sigma", eps_sigma}});
    out.pass = out.pass && cr.pass;
    out.reports.push_back(std::move(cr));
  }
  auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  };
  double n_spread = 1.0;
  for (const auto& [key, vals] : by_bound) n_spread = std::max(n_spread, spread(vals));
  OperatorReport agg("lp_uniformity");
  agg.values = {{"eps_sweep", sweep},
                {"max_N_spread", n_spread},
                {"ratio_v", ratio_v},
                {"ratio_vi", ratio_vi},
                {"ratio_v_spread", spread(ratio_v)},
                {"ratio_vi_spread", spread(ratio_vi)},
                {"C_L", c_l},
                {"C_H", c_h},
                {"C_L_spread", spread(c_l)},
                {"C_H_spread", spread(c_h)}};
  agg.tolerances = {{"N_uniform", 0.10}, {"eps_linear_factor", 2.0}, {"C_H_factor", 3.0}};
  agg.check("N_uniform", n_spread <= 1.10);
  agg.check("bound_v_linear_in_eps", spread(ratio_v) < 2.0);
  agg.check("bound_vi_linear_in_eps", spread(ratio_vi) < 2.0);
  agg.check("C_H_within_factor_3", spread(c_h) <= 3.0);
  out.pass = out.pass && agg.pass;
  out.summary = {{"phi_l1", phi_l1}, {"max_N_spread", n_spread}, {"ratio_v", ratio_v},
                 {"ratio_vi", ratio_vi}, {"C_H", c_h}};
  out.reports.push_back(std::move(agg));
  out.tables.push_back(std::move(table));
  return out;
}

// ---------------------------------------------------------------- cutoff decay

CommandOutput cmd_cutoff_decay(const ExperimentConfig& cfg, ParamReader& p) {
  const std::vector<int> ells = p.integers("ell", {0, 1, 2});
  const std::vector<double> ts = p.numbers("t", {0.25, 0.5, 1.0, 2.0});
  const std::vector<double> xs = p.numbers("x", {0.0, 1.0, 2.0, 4.0});
  p.finish();
  require_1d(cfg, "cutoff-decay");
  for (int l : ells) {
    if (l < 0) throw std::invalid_argument("cutoff-decay: ell must be >= 0");
  }
  for (double t : ts) {
    if (!(t > 0.0)) throw std::invalid_argument("cutoff-decay: t must be positive");
  }
  const GridPtr grid = standard_grid(cfg);
  const TransformPtr op = TransformOperator::build(grid);
  CommandOutput out;
  CsvTable table{"constants", {"ell", "t", "C_hat"}, {}};
  double global_max = 0.0;
  double level0_max = 0.0;
  double worst_t_spread = 1.0;
  for (int l : ells) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double t : ts) {
      OperatorReport r = cutoff_decay_experiment(l, t, xs, *op);
      const double c = r.constants["C_hat"].get<double>();
      table.rows.push_back({static_cast<double>(l), t, c});
      lo = std::min(lo, c);
      hi = std::max(hi, c);
      out.pass = out.pass && r.pass;
      out.reports.push_back(std::move(r));
    }
    worst_t_spread = std::max(worst_t_spread, lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
    global_max = std::max(global_max, hi);
    if (l == ells.front()) level0_max = hi;
  }
  OperatorReport agg("cutoff_uniformity");
  agg.values = {{"max_t_spread", worst_t_spread}, {"C_hat_max", global_max}, {"C_hat_first_level_max", level0_max}};
  agg.tolerances = {{"t_uniform_factor", 3.0}};
  agg.check("uniform_in_t", worst_t_spread <= 3.0);
  agg.check("no_growth_in_ell", global_max <= 3.0 * level0_max);
  out.pass = out.pass && agg.pass;
  out.summary = {{"C_hat_max", global_max}, {"max_t_spread", worst_t_spread}};
  out.reports.push_back(std::move(agg));
  out.tables.push_back(std::move(table));
  return out;
}

// ---------------------------------------------------------------- dispatch

using Handler = std::function<CommandOutput(const ExperimentConfig&, ParamReader&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"selfcheck", run_selfcheck},     {"transform", cmd_transform},
      {"kernel", cmd_kernel},           {"propagate", cmd_propagate},
      {"thin gen", cmd_thin_gen},       {"thin check", cmd_thin_check},
      {"pair norm", cmd_pair_norm},     {"pair verify", cmd_pair_verify},
      {"two-time", cmd_two_time},       {"lp bounds", cmd_lp_bounds},
      {"cutoff-decay", cmd_cutoff_decay}};
  return h;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_csv(const std::filesystem::path& path, const CsvTable& t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n' << std::setprecision(17);
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : handlers()) v.push_back(k);
    return v;
  }();
  return names;
}

std::string file_stem(const std::string& command) {
  std::string s = command;
  std::replace(s.begin(), s.end(), ' ', '_');
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

CommandOutput execute(const std::string& command, const ExperimentConfig& cfg) {
  const auto it = handlers().find(command);
  if (it == handlers().end()) throw std::invalid_argument("unknown command '" + command + "'");
  ParamReader params(cfg.experiment, command);
  CommandOutput out = it->second(cfg, params);
  out.resolved_experiment = params.resolved();
  return out;
}

json assemble_report(const std::string& command, const ExperimentConfig& cfg, const CommandOutput& out) {
  json config = cfg.to_json();
  config["experiment"] = out.resolved_experiment;
  json report = report_envelope(command, config);
  if (cfg.timestamp) report["timestamp"] = utc_timestamp();
  report["pass"] = out.pass;
  report["summary"] = out.summary;
  json reports = json::array();
  for (const OperatorReport& r : out.reports) reports.push_back(r.to_json());
  report["reports"] = std::move(reports);
  return report;
}

int run(const std::string& command, const ExperimentConfig& cfg) {
  CommandOutput out;
  try {
    out = execute(command, cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    // Convergence failures and certificate violations still produce a report.
    out = CommandOutput{};
    out.pass = false;
    OperatorReport err(file_stem(command));
    err.notes.emplace_back(e.what());
    err.check("completed", false);
    out.reports.push_back(std::move(err));
    out.resolved_experiment = cfg.experiment;
    std::cerr << "failure: " << e.what() << '\n';
  }
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  const std::string stem = file_stem(command);
  write_json(dir / (stem + ".json"), assemble_report(command, cfg, out));
  for (const auto& [name, j] : out.artifacts) write_json(dir / (stem + "_" + name + ".json"), j);
  if (cfg.csv) {
    for (const CsvTable& t : out.tables) write_csv(dir / (stem + "_" + t.name + ".csv"), t);
  }
  std::cout << command << ": " << (out.pass ? "pass" : "FAIL") << " (report " << (dir / (stem + ".json")).string()
            << ")\n";
  return out.pass ? 0 : 1;
}

}  // namespace dunkl::cli
