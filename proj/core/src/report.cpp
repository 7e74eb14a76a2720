#include "dunkl/report.hpp"

#ifndef DUNKL_VERSION
#define DUNKL_VERSION "0.0.0"
#endif

namespace dunkl {

const char* code_version() { return DUNKL_VERSION; }

void OperatorReport::check(const std::string& name, bool ok) {
  if (!values.contains("checks")) values["checks"] = nlohmann::ordered_json::object();
  values["checks"][name] = ok;
  pass = pass && ok;
}

nlohmann::ordered_json OperatorReport::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["parameters"] = parameters;
  j["values"] = values;
  j["constants"] = constants;
  j["tolerances"] = tolerances;
  if (!notes.empty()) j["notes"] = notes;
  j["pass"] = pass;
  return j;
}

nlohmann::ordered_json report_envelope(const std::string& command,
                                       const nlohmann::ordered_json& config) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["code_version"] = code_version();
  j["command"] = command;
  j["config"] = config;
  return j;
}

}  // namespace dunkl
