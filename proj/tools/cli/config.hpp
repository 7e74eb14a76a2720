#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dunkl/measure.hpp"

namespace dunkl::cli {

inline constexpr int kConfigVersion = 1;

/// Resolved experiment configuration. Every block is optional in the input
/// file except `version`; unknown keys are rejected at every level.
struct ExperimentConfig {
  int version = kConfigVersion;
  std::vector<double> multiplicities{1.0};
  double R = 12.0;
  int n = 1024;
  std::uint64_t seed = 0xD01C;
  std::string out_dir = "dunkl-out";
  bool csv = true;
  bool timestamp = true;
  nlohmann::ordered_json experiment = nlohmann::ordered_json::object();

  RootSystemConfig root_system() const { return RootSystemConfig(multiplicities); }
  nlohmann::ordered_json to_json() const;
};

/// Command-line overrides; unset fields keep the file (or default) values.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_n;
  std::optional<double> grid_R;
  std::optional<std::vector<double>> k;
  std::optional<std::string> out_dir;
  bool no_timestamp = false;
};

/// Throws std::invalid_argument on schema violations.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
void apply_overrides(ExperimentConfig& cfg, const Overrides& o);

/// "1,0.5" -> {1, 0.5}.
std::vector<double> parse_list(const std::string& s);

/// Reads experiment parameters and rejects keys that were never read.
class ParamReader {
 public:
  ParamReader(const nlohmann::ordered_json& block, std::string command);

  double number(const std::string& key, double fallback);
  int integer(const std::string& key, int fallback);
  std::string text(const std::string& key, const std::string& fallback);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);
  std::vector<int> integers(const std::string& key, const std::vector<int>& fallback);
  /// Raw sub-object; null when absent.
  nlohmann::json raw(const std::string& key);
  bool has(const std::string& key) const;

  /// Throws std::invalid_argument naming the first unknown key.
  void finish() const;
  const nlohmann::ordered_json& resolved() const { return resolved_; }

 private:
  const nlohmann::json& get(const std::string& key);
  nlohmann::json block_;
  std::string command_;
  std::vector<std::string> used_;
  nlohmann::ordered_json resolved_ = nlohmann::ordered_json::object();
};

}  // namespace dunkl::cli
