#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace {

using dunkl::cli::ExperimentConfig;

struct GlobalFlags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_n;
  std::optional<double> grid_R;
  std::optional<std::string> k;
  bool no_timestamp = false;
};

// Flags that map onto experiment keys of the chosen command.
struct CommandFlags {
  std::optional<std::string> dump_operator;
  std::optional<std::string> N;
  std::optional<std::string> eps_list;
  std::optional<std::string> times;
  std::optional<double> eps;
  std::optional<std::string> set_file;
  std::optional<int> ensemble_size;
};

void add_globals(CLI::App& app, GlobalFlags& g) {
  app.add_option("--config", g.config, "JSON experiment configuration")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--grid-n", g.grid_n, "Grid nodes per axis (multiple of 32)");
  app.add_option("--grid-R", g.grid_R, "Grid half-width");
  app.add_option("--k", g.k, "Multiplicities, comma separated");
  app.add_flag("--no-timestamp", g.no_timestamp, "Omit the timestamp from reports");
}

nlohmann::ordered_json int_list(const std::string& s) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (double v : dunkl::cli::parse_list(s)) {
    if (v != static_cast<int>(v)) throw std::invalid_argument("expected integers in '" + s + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void apply_command_flags(ExperimentConfig& cfg, const std::string& command, const CommandFlags& f) {
  auto& e = cfg.experiment;
  if (f.dump_operator) {
    if (command != "transform") throw std::invalid_argument("--dump-operator applies to 'transform' only");
    e["dump_operator"] = *f.dump_operator;
  }
  if (f.N) e["N"] = int_list(*f.N);
  if (f.eps_list) e["eps_list"] = dunkl::cli::parse_list(*f.eps_list);
  if (f.times) e["times"] = dunkl::cli::parse_list(*f.times);
  if (f.eps) e["eps"] = *f.eps;
  if (f.ensemble_size) e["ensemble_size"] = *f.ensemble_size;
  if (f.set_file) {
    std::ifstream in(*f.set_file);
    if (!in) throw std::invalid_argument("cannot open set file '" + *f.set_file + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& ex) {
      throw std::invalid_argument("malformed set file: " + std::string(ex.what()));
    }
    e["set"] = j.is_object() && j.contains("intervals") ? j.at("intervals") : j;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments for the rank-one Dunkl transform"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags g;
  CommandFlags f;
  add_globals(app, g);

  std::string command;
  auto leaf = [&](CLI::App* sub, const std::string& name) {
    sub->callback([&command, name] { command = name; });
    return sub;
  };
  leaf(app.add_subcommand("selfcheck", "Fast deterministic checks of every module"), "selfcheck");
  auto* transform = leaf(app.add_subcommand("transform", "Plancherel and round-trip checks"), "transform");
  transform->add_option("--dump-operator", f.dump_operator, "Write the unitarized operator to a file");
  leaf(app.add_subcommand("kernel", "Closed-form kernel against its power series"), "kernel");
  auto* propagate = leaf(app.add_subcommand("propagate", "Free Schrodinger evolution by two routes"), "propagate");
  propagate->add_option("--times", f.times, "Times, comma separated");

  auto* thin = app.add_subcommand("thin", "Thin sets");
  thin->require_subcommand(1);
  auto* thin_gen = leaf(thin->add_subcommand("gen", "Generate a certified comb"), "thin gen");
  thin_gen->add_option("--eps", f.eps, "Target thinness");
  auto* thin_check = leaf(thin->add_subcommand("check", "Estimate the thinness of a set"), "thin check");
  thin_check->add_option("--set-file", f.set_file, "JSON file with a list of [a, b] or a 'thin gen' artifact")
      ->check(CLI::ExistingFile);
  thin_check->add_option("--eps", f.eps, "Optional threshold to enforce");

  auto* pair = app.add_subcommand("pair", "Annihilating pairs");
  pair->require_subcommand(1);
  leaf(pair->add_subcommand("norm", "Operator norm of the annihilation operator"), "pair norm");
  auto* verify = leaf(pair->add_subcommand("verify", "Check the pair inequality on an ensemble"), "pair verify");
  verify->add_option("--ensemble-size", f.ensemble_size, "Number of random members");

  auto* two_time = leaf(app.add_subcommand("two-time", "Two-time observability inequality"), "two-time");
  two_time->add_option("--ensemble-size", f.ensemble_size, "Number of random members");

  auto* lp = app.add_subcommand("lp", "Littlewood-Paley decomposition");
  lp->require_subcommand(1);
  auto* bounds = leaf(lp->add_subcommand("bounds", "Kernel bounds and contraction constants"), "lp bounds");
  bounds->add_option("--N", f.N, "Cut-off levels, comma separated");
  bounds->add_option("--eps-list", f.eps_list, "Thinness targets, comma separated");

  leaf(app.add_subcommand("cutoff-decay", "Translated cut-off decay constants"), "cutoff-decay");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ExperimentConfig cfg;
  try {
    if (!g.config.empty()) cfg = dunkl::cli::load_config(g.config);
    dunkl::cli::Overrides o;
    o.seed = g.seed;
    o.grid_n = g.grid_n;
    o.grid_R = g.grid_R;
    if (g.k) o.k = dunkl::cli::parse_list(*g.k);
    o.out_dir = g.out;
    o.no_timestamp = g.no_timestamp;
    dunkl::cli::apply_overrides(cfg, o);
    apply_command_flags(cfg, command, f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return dunkl::cli::run(command, cfg);
}
