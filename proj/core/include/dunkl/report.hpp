#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace dunkl {

inline constexpr int kReportSchemaVersion = 1;

/// An iterative procedure stopped before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
const char* code_version();

/// Result record for norm estimates, inequality checks and bound suites.
/// Field order is insertion order so serialized reports are reproducible.
struct OperatorReport {
  std::string experiment;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  nlohmann::ordered_json constants = nlohmann::ordered_json::object();
  nlohmann::ordered_json tolerances = nlohmann::ordered_json::object();
  std::vector<std::string> notes;
  bool pass = true;

  OperatorReport() = default;
  explicit OperatorReport(std::string id) : experiment(std::move(id)) {}

  /// Records a named check; the report fails if any check fails.
  void check(const std::string& name, bool ok);

  nlohmann::ordered_json to_json() const;
};

/// Envelope shared by every emitted report: schema version, code version and
/// the resolved configuration.
nlohmann::ordered_json report_envelope(const std::string& command,
                                       const nlohmann::ordered_json& config);

}  // namespace dunkl
