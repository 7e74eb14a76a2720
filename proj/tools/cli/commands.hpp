#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/config.hpp"
#include "dunkl/report.hpp"

namespace dunkl::cli {

/// Bulk numeric table written as <out>/<command>_<name>.csv.
struct CsvTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct CommandOutput {
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  std::vector<OperatorReport> reports;
  std::vector<CsvTable> tables;
  /// Extra JSON artifacts written as <out>/<name>.json.
  std::vector<std::pair<std::string, nlohmann::ordered_json>> artifacts;
  nlohmann::ordered_json resolved_experiment = nlohmann::ordered_json::object();
  bool pass = true;
};

/// Known command names: selfcheck, transform, kernel, propagate, thin gen,
/// thin check, pair norm, pair verify, two-time, lp bounds, cutoff-decay.
const std::vector<std::string>& command_names();

/// Runs a command without touching the file system. Throws
/// std::invalid_argument for bad input.
CommandOutput execute(const std::string& command, const ExperimentConfig& cfg);

/// Full JSON report: envelope, optional timestamp, pass flag, summary and
/// per-check reports.
nlohmann::ordered_json assemble_report(const std::string& command, const ExperimentConfig& cfg,
                                       const CommandOutput& out);

/// Runs the command, writes the report (and CSV tables when enabled) under
/// cfg.out_dir and returns the exit code: 0 pass, 1 check failure, 2 bad input.
int run(const std::string& command, const ExperimentConfig& cfg);

/// File stem used for a command's outputs ("thin gen" -> "thin_gen").
std::string file_stem(const std::string& command);

/// Selfcheck suites, one report per module.
CommandOutput run_selfcheck(const ExperimentConfig& cfg, ParamReader& params);

}  // namespace dunkl::cli
