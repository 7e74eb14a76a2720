// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "dunkl/annihilate.hpp"
#include "dunkl/grid.hpp"
#include "dunkl/kernel.hpp"
#include "dunkl/schrodinger.hpp"
#include "dunkl/thinsets.hpp"
#include "dunkl/transform.hpp"
#include "dunkl/translate.hpp"

using namespace dunkl;
using namespace std::complex_literals;
using json = nlohmann::json;

namespace {

constexpr std::uint64_t kSeed = 0xD01C;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

cli::ExperimentConfig config(double k, double R, int n, json experiment = json::object()) {
  cli::ExperimentConfig c;
  c.multiplicities = {k};
  c.R = R;
  c.n = n;
  c.seed = kSeed;
  c.timestamp = false;
  c.experiment = std::move(experiment);
  return c;
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0.0 ? *hi / *lo : INFINITY;
}

// 1. Closed form vs series on random (x, y, k) with |xy| <= 20; symmetry and scaling.
void kernel_correctness(Outcome& o) {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> kdist(0.0, 3.0);
  const double span = std::sqrt(20.0);
  double diff = 0.0, sym = 0.0, scale = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const RootSystemConfig cfg = RootSystemConfig::rank_one(kdist(rng));
    const double x = 2.0 * span * unit(rng);
    const double y = unit(rng) * std::min(2.0 * span, 20.0 / std::max(std::abs(x), 1e-300));
    const double lam = 0.5 + 0.5 * (unit(rng) + 1.0);
    const std::vector<double> vx{x}, vy{y}, lx{lam * x}, ly{lam * y}, vy_over{y / lam};
    const cplx e = evaluate_kernel(vx, vy, cfg, KernelMode::minus_i).value;
    const cplx ref = dunkl_kernel_series_converged(x, -1i * y, cfg.multiplicity(0)).value;
    diff = std::max(diff, std::abs(e - ref) / std::max(1.0, std::abs(ref)));
    sym = std::max(sym, std::abs(dunkl_kernel(vy, vx, cfg, KernelMode::minus_i) - e));
    const cplx lhs = dunkl_kernel(lx, vy_over, cfg, KernelMode::minus_i);
    scale = std::max(scale, std::abs(lhs - dunkl_kernel(vx, vy, cfg, KernelMode::minus_i)));
    scale = std::max(scale, std::abs(dunkl_kernel(lx, vy, cfg, KernelMode::minus_i) -
                                     dunkl_kernel(vx, ly, cfg, KernelMode::minus_i)));
  }
  o.detail << "max_rel_diff=" << diff << " symmetry=" << sym << " scaling=" << scale;
  o.require(diff <= 1e-10, "closed form vs series");
  o.require(sym <= 1e-10, "symmetry");
  o.require(scale <= 1e-10, "scaling");
}

// 2. Plancherel defect and round trip through the transform command.
void plancherel(Outcome& o) {
  for (double k : {0.0, 0.5, 1.0, 2.5}) {
    const cli::CommandOutput out = cli::execute("transform", config(k, 12.0, 2048));
    const double defect = out.summary["plancherel_defect"].get<double>();
    const double trip = out.summary["round_trip"].get<double>();
    o.detail << " k=" << k << ":defect=" << defect << ",round_trip=" << trip;
    o.require(defect <= 1e-5 && trip <= 1e-7, "k=" + std::to_string(k));
  }
}

// 3. k = 0 transform vs direct Fourier sum; k = 0 free Gaussian modulus.
void classical(Outcome& o) {
  const GridPtr g = QuadratureGrid::build(12.0, 1024, RootSystemConfig::rank_one(0.0));
  const TransformPtr op = TransformOperator::build(g);
  const SampledFunction f =
      SampledFunction::sample_1d(g, [](double x) { return (1.0 + 0.4 * x) * std::exp(-0.3 * x * x + 0.2i * x); });
  const SampledFunction df = forward(f, *op);
  double fourier = 0.0;
  for (int j = 0; j < g->size(); ++j) {
    cplx direct = 0.0;
    for (int i = 0; i < g->size(); ++i) direct += g->weight(i) * f[i] * std::exp(-1i * g->x(i) * g->x(j));
    direct /= std::sqrt(2.0 * std::numbers::pi);
    fourier = std::max(fourier, std::abs(direct - df[j]));
  }
  const SampledFunction u0 = SampledFunction::sample_1d(g, [](double x) { return cplx(std::exp(-0.5 * x * x), 0.0); });
  double modulus = 0.0;
  for (double t : {0.1, 0.5, 1.0, 2.0, 3.5, 5.0}) {
    const SampledFunction u = propagate_multiplier(u0, t, op);
    for (int i = 0; i < g->size(); ++i) {
      const double x = g->x(i);
      const double s = 1.0 + 4.0 * t * t;
      modulus = std::max(modulus, std::abs(std::norm(u[i]) - std::exp(-x * x / s) / std::sqrt(s)));
    }
  }
  o.detail << "fourier=" << fourier << " modulus=" << modulus;
  o.require(fourier <= 1e-10, "direct Fourier");
  o.require(modulus <= 1e-6, "Gaussian modulus");
}

// 4. Explicit formula vs multiplier over t in [0.1, 5] on a wider window.
void propagators(Outcome& o) {
  const json exp = {{"times", {0.1, 0.5, 1.0, 2.0, 3.5, 5.0}}, {"method", "both"},
                    {"c", 0.1},   {"tau", 2.5},                          {"p", 0.3}};
  for (double k : {0.0, 1.0}) {
    const cli::CommandOutput out = cli::execute("propagate", config(k, 20.0, 1024, exp));
    const double agree = out.summary["max_relative_difference"].get<double>();
    const double cons = out.summary["max_conservation_error"].get<double>();
    o.detail << " k=" << k << ":rel_diff=" << agree << ",conservation=" << cons;
    o.require(agree <= 1e-5 && cons <= 1e-5, "k=" + std::to_string(k));
  }
}

// 5. Translation: symmetry, radial mass, support leak and L1 non-expansiveness.
void translation(Outcome& o) {
  double sym = 0.0, mass = 0.0, leak = 0.0, l1 = 0.0;
  for (double k : {0.0, 1.0}) {
    const RootSystemConfig cfg = RootSystemConfig::rank_one(k);
    const GridPtr g = QuadratureGrid::build(12.0, 1024, cfg);
    const TransformPtr op = TransformOperator::build(g);
    const SampledFunction f = SampledFunction::sample_1d(
        g, [](double x) { return (1.0 + 0.5 * x) * std::exp(-0.6 * (x - 0.4) * (x - 0.4)); });
    for (int j : {400, 450, 530, 600}) {
      const SampledFunction ty = translate(f, g->x(j), *op);
      for (int i : {380, 470, 512, 640}) {
        const SampledFunction tx = translate(f, -g->x(i), *op);
        sym = std::max(sym, std::abs(ty[i] - tx[g->size() - 1 - j]));
      }
    }
    const SampledFunction radial = SampledFunction::sample_1d(g, [](double x) { return cplx(std::exp(-x * x), 0.0); });
    for (double y : {0.5, 2.0, 4.0}) {
      const SampledFunction t = translate(radial, y, *op);
      mass = std::max(mass, std::abs(t.integral() - radial.integral()) / std::abs(radial.integral()));
      l1 = std::max(l1, t.l1_norm() / radial.l1_norm() - 1.0);
    }
    // Data concentrated in B(0, 1) to 1e-10 needs a wider frequency window than the space window.
    const TransformPtr wide = TransformOperator::build(g, QuadratureGrid::build(32.0, 2048, cfg));
    const SampledFunction bump = SampledFunction::sample_1d(g, [](double x) { return cplx(std::exp(-12.0 * x * x), 0.0); });
    for (double x0 : {2.0, 4.0}) {
      const std::vector<double> x{x0};
      leak = std::max(leak, support_check(bump, 1.0, x, 1e-6, *wide).values["leak"].get<double>());
    }
  }
  o.detail << "symmetry=" << sym << " mass=" << mass << " leak=" << leak << " l1_excess=" << l1;
  o.require(sym <= 1e-8, "symmetry");
  o.require(mass <= 1e-6, "radial mass");
  o.require(leak <= 1e-6, "support leak");
  o.require(l1 <= 1e-6, "L1 non-expansive");
}

// 6. Cutoff constants: grid stability over n in {512, 1024, 2048}, uniform in t, no growth in ell.
void cutoff(Outcome& o) {
  std::vector<std::vector<double>> tables;
  for (int n : {512, 1024, 2048}) {
    const cli::CommandOutput out = cli::execute("cutoff-decay", config(1.0, 12.0, n));
    o.require(out.pass, "uniformity at n=" + std::to_string(n));
    std::vector<double> c;
    for (const auto& row : out.tables.front().rows) c.push_back(row[2]);
    tables.push_back(std::move(c));
    o.detail << " n=" << n << ":t_spread=" << out.summary["max_t_spread"].get<double>()
             << ",C_max=" << out.summary["C_hat_max"].get<double>();
  }
  double drift = 0.0;
  for (std::size_t r = 0; r < tables.back().size(); ++r) {
    for (std::size_t a = 0; a + 1 < tables.size(); ++a) {
      drift = std::max(drift, std::abs(tables[a][r] / tables.back()[r] - 1.0));
    }
  }
  o.detail << " grid_drift=" << drift;
  o.require(drift <= 0.2, "grid stability");
}

// 7. Generated combs certified by the independent checker; exact density on single intervals.
void thin_sets(Outcome& o) {
  for (double k : {0.0, 1.0}) {
    const RootSystemConfig cfg = RootSystemConfig::rank_one(k);
    for (double eps : {0.025, 0.05, 0.1}) {
      const CombResult comb = generate_comb(eps, 11, cfg, kSeed);
      const double checked = thinness_check(comb.set, cfg, 30.0).epsilon_hat;
      o.require(checked <= eps, "k=" + std::to_string(k) + " eps=" + std::to_string(eps));
      o.detail << " k=" << k << ",eps=" << eps << ":" << checked;
    }
  }
  const RootSystemConfig flat = RootSystemConfig::rank_one(0.0);
  // Plateau value 1/4, and for [2, 2.1] the sup sits where x - 1/x = 2.
  const double a = thinness_check(SetUnion::intervals({{-0.25, 0.25}}), flat, 5.0).epsilon_hat;
  const double b = thinness_check(SetUnion::intervals({{2.0, 2.1}}), flat, 5.0).epsilon_hat;
  const double err = std::max(std::abs(a - 0.25), std::abs(b - 0.05 * (1.0 + std::numbers::sqrt2)));
  o.detail << " single_interval_err=" << err;
  o.require(err <= 1e-12, "single interval");
}

struct CombPair {
  SetUnion S, Sigma;
  double eps_hat;
};

CombPair comb_pair(double eps, const RootSystemConfig& cfg) {
  const CombResult s = generate_comb(eps, 11, cfg, kSeed);
  const CombResult sigma = generate_comb(eps, 11, cfg, kSeed + 1);
  return {s.set, sigma.set, std::max(s.report.epsilon_hat, sigma.report.epsilon_hat)};
}

AnnihilationOperator pair_operator(const CombPair& p, const RootSystemConfig& cfg, int n) {
  return AnnihilationOperator(p.S, p.Sigma,
                              TransformOperator::build(adapted_grid(12.0, n, cfg, {p.S}),
                                                       adapted_grid(12.0, n, cfg, {p.Sigma})));
}

// 8. Annihilating pair: norm below one and grid stable, ensemble inequality, sqrt(eps) scaling.
void annihilating_pair(Outcome& o) {
  const RootSystemConfig cfg = RootSystemConfig::rank_one(1.0);
  std::vector<double> scaled;
  for (double eps : {0.025, 0.05, 0.1}) {
    const CombPair p = comb_pair(eps, cfg);
    const AnnihilationOperator h = pair_operator(p, cfg, 1024);
    const NormResult nr = h.norm(NormMethod::svd, kSeed);
    scaled.push_back(nr.value / std::sqrt(p.eps_hat));
    o.detail << " eps=" << eps << ":eps_hat=" << p.eps_hat << ",H=" << nr.value;
    if (eps != 0.05) continue;
    const double fine = pair_operator(p, cfg, 2048).norm(NormMethod::svd, kSeed).value;
    const double drift = std::abs(fine / nr.value - 1.0);
    o.detail << ",H_2048=" << fine;
    o.require(nr.value < 1.0, "norm below one");
    o.require(drift < 0.05, "norm stable under doubling");
    const PairConstants pc = pair_constants(nr.value);
    std::vector<SampledFunction> ens = schwartz_ensemble(h.transform()->source(), 50, kSeed);
    for (SampledFunction& f : adversarial_members(h, nr)) ens.push_back(std::move(f));
    OperatorReport rep = verify_pair(ens, h, pc);
    o.detail << ",C=" << pc.C << ",max_ratio=" << rep.values["max_ratio"].get<double>();
    o.require(rep.pass, "ensemble inequality");
  }
  o.detail << " sqrt_eps_spread=" << spread(scaled);
  o.require(spread(scaled) <= 3.0, "sqrt(eps) scaling");
}

// 9. Two-time inequality with time-shift consistency.
void two_time(Outcome& o) {
  const json exp = {{"ensemble_size", 50}, {"times", {{0.0, 1.0}, {0.5, 1.5}}}};
  const cli::CommandOutput out = cli::execute("two-time", config(1.0, 12.0, 1024, exp));
  o.detail << "bound_2C2=" << out.summary["bound_2C2"].get<double>() << " max_ratio=" << out.summary["max_ratio"].dump();
  bool shift_seen = false;
  for (const OperatorReport& r : out.reports) {
    if (r.experiment == "time_shift_consistency") shift_seen = true;
  }
  o.require(shift_seen, "time-shift check ran");
  o.require(out.pass, "two-time reports");
}

// 10. Littlewood-Paley bound suite.
void littlewood_paley(Outcome& o) {
  const cli::CommandOutput out = cli::execute("lp bounds", config(1.0, 12.0, 1024));
  o.detail << "phi_l1=" << out.summary["phi_l1"].get<double>()
           << " N_spread=" << out.summary["max_N_spread"].get<double>()
           << " ratio_v=" << out.summary["ratio_v"].dump() << " ratio_vi=" << out.summary["ratio_vi"].dump();
  for (const OperatorReport& r : out.reports) {
    if (!r.pass) o.require(false, r.experiment);
  }
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 11. Selfcheck twice with the same seed gives byte-identical reports.
void determinism(Outcome& o) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "dunkl_acceptance_selfcheck";
  std::filesystem::remove_all(dir);
  cli::ExperimentConfig c = config(1.0, 12.0, 1024);
  c.out_dir = dir.string();
  const int first_code = cli::run("selfcheck", c);
  const std::string first = slurp(dir / "selfcheck.json");
  const int second_code = cli::run("selfcheck", c);
  const std::string second = slurp(dir / "selfcheck.json");
  o.detail << "exit=" << first_code << "," << second_code << " bytes=" << first.size();
  o.require(first_code == 0 && second_code == 0, "selfcheck passes");
  o.require(!first.empty() && first == second, "identical bytes");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"kernel correctness", kernel_correctness},
      {"Plancherel and inversion", plancherel},
      {"classical reduction", classical},
      {"propagator cross-validation", propagators},
      {"translation properties", translation},
      {"cutoff decay", cutoff},
      {"thin sets", thin_sets},
      {"annihilating pair", annihilating_pair},
      {"two-time inequality", two_time},
      {"Littlewood-Paley suite", littlewood_paley},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %zu (%s): %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
