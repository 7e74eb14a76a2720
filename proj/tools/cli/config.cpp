#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dunkl::cli {

namespace {

void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!obj.is_object()) throw std::invalid_argument("config: '" + where + "' must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.contains(it.key())) {
      throw std::invalid_argument("config: unknown field '" + it.key() + "' in " + where);
    }
  }
}

double finite_number(const nlohmann::json& v, const std::string& what) {
  if (!v.is_number()) throw std::invalid_argument("config: '" + what + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw std::invalid_argument("config: '" + what + "' must be finite");
  return x;
}

int whole_number(const nlohmann::json& v, const std::string& what) {
  if (!v.is_number_integer()) throw std::invalid_argument("config: '" + what + "' must be an integer");
  return v.get<int>();
}

void validate(const ExperimentConfig& c) {
  if (c.multiplicities.empty()) throw std::invalid_argument("config: multiplicities must not be empty");
  for (double k : c.multiplicities) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
      throw std::invalid_argument("config: multiplicities must be finite and >= 0");
    }
  }
  if (!(c.R > 0.0) || !std::isfinite(c.R)) throw std::invalid_argument("config: grid.R must be positive");
  if (c.n < 32 || c.n % 32 != 0) {
    throw std::invalid_argument("config: grid.n must be a positive multiple of 32");
  }
  if (c.out_dir.empty()) throw std::invalid_argument("config: output.dir must not be empty");
}

}  // namespace

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = version;
  j["root_system"] = {{"d", multiplicities.size()}, {"multiplicities", multiplicities}};
  j["grid"] = {{"R", R}, {"n", n}};
  j["seed"] = seed;
  j["output"] = {{"dir", out_dir}, {"csv", csv}, {"timestamp", timestamp}};
  j["experiment"] = experiment;
  return j;
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  reject_unknown(j, {"version", "root_system", "grid", "seed", "output", "experiment"}, "config");
  if (!j.contains("version")) throw std::invalid_argument("config: missing mandatory field 'version'");
  ExperimentConfig c;
  c.version = whole_number(j.at("version"), "version");
  if (c.version != kConfigVersion) {
    throw std::invalid_argument("config: unsupported version " + std::to_string(c.version));
  }
  if (j.contains("root_system")) {
    const auto& rs = j.at("root_system");
    reject_unknown(rs, {"d", "multiplicities"}, "root_system");
    std::optional<int> d;
    if (rs.contains("d")) {
      d = whole_number(rs.at("d"), "root_system.d");
      if (*d < 1) throw std::invalid_argument("config: root_system.d must be >= 1");
    }
    if (rs.contains("multiplicities")) {
      const auto& m = rs.at("multiplicities");
      if (!m.is_array()) throw std::invalid_argument("config: root_system.multiplicities must be a list");
      c.multiplicities.clear();
      for (const auto& v : m) c.multiplicities.push_back(finite_number(v, "root_system.multiplicities"));
      if (d && *d != static_cast<int>(c.multiplicities.size())) {
        throw std::invalid_argument("config: root_system.d does not match the multiplicity count");
      }
    } else if (d) {
      c.multiplicities.assign(static_cast<std::size_t>(*d), 1.0);
    }
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    reject_unknown(g, {"R", "n"}, "grid");
    if (g.contains("R")) c.R = finite_number(g.at("R"), "grid.R");
    if (g.contains("n")) c.n = whole_number(g.at("n"), "grid.n");
  }
  if (j.contains("seed")) {
    const auto& s = j.at("seed");
    if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0)) throw std::invalid_argument("config: 'seed' must be a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    reject_unknown(o, {"dir", "csv", "timestamp"}, "output");
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) throw std::invalid_argument("config: output.dir must be a string");
      c.out_dir = o.at("dir").get<std::string>();
    }
    if (o.contains("csv")) {
      if (!o.at("csv").is_boolean()) throw std::invalid_argument("config: output.csv must be a boolean");
      c.csv = o.at("csv").get<bool>();
    }
    if (o.contains("timestamp")) {
      if (!o.at("timestamp").is_boolean()) {
        throw std::invalid_argument("config: output.timestamp must be a boolean");
      }
      c.timestamp = o.at("timestamp").get<bool>();
    }
  }
  if (j.contains("experiment")) {
    if (!j.at("experiment").is_object()) throw std::invalid_argument("config: 'experiment' must be an object");
    c.experiment = nlohmann::ordered_json(j.at("experiment"));
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config: malformed JSON in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

void apply_overrides(ExperimentConfig& c, const Overrides& o) {
  if (o.seed) c.seed = *o.seed;
  if (o.grid_n) c.n = *o.grid_n;
  if (o.grid_R) c.R = *o.grid_R;
  if (o.k) c.multiplicities = *o.k;
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.no_timestamp) c.timestamp = false;
  validate(c);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse '" + item + "' as a number");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw std::invalid_argument("cannot parse '" + item + "' as a number");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

ParamReader::ParamReader(const nlohmann::ordered_json& block, std::string command)
    : block_(nlohmann::json(block)), command_(std::move(command)) {
  if (!block_.is_object()) throw std::invalid_argument("config: 'experiment' must be an object");
}

bool ParamReader::has(const std::string& key) const { return block_.contains(key); }

const nlohmann::json& ParamReader::get(const std::string& key) {
  used_.push_back(key);
  return block_.at(key);
}

double ParamReader::number(const std::string& key, double fallback) {
  const double v = has(key) ? finite_number(get(key), "experiment." + key) : fallback;
  resolved_[key] = v;
  return v;
}

int ParamReader::integer(const std::string& key, int fallback) {
  const int v = has(key) ? whole_number(get(key), "experiment." + key) : fallback;
  resolved_[key] = v;
  return v;
}

std::string ParamReader::text(const std::string& key, const std::string& fallback) {
  std::string v = fallback;
  if (has(key)) {
    const auto& x = get(key);
    if (!x.is_string()) throw std::invalid_argument("config: 'experiment." + key + "' must be a string");
    v = x.get<std::string>();
  }
  resolved_[key] = v;
  return v;
}

std::vector<double> ParamReader::numbers(const std::string& key, const std::vector<double>& fallback) {
  std::vector<double> v = fallback;
  if (has(key)) {
    const auto& x = get(key);
    if (!x.is_array()) throw std::invalid_argument("config: 'experiment." + key + "' must be a list");
    v.clear();
    for (const auto& e : x) v.push_back(finite_number(e, "experiment." + key));
  }
  resolved_[key] = v;
  return v;
}

std::vector<int> ParamReader::integers(const std::string& key, const std::vector<int>& fallback) {
  std::vector<int> v = fallback;
  if (has(key)) {
    const auto& x = get(key);
    if (!x.is_array()) throw std::invalid_argument("config: 'experiment." + key + "' must be a list");
    v.clear();
    for (const auto& e : x) v.push_back(whole_number(e, "experiment." + key));
  }
  resolved_[key] = v;
  return v;
}

nlohmann::json ParamReader::raw(const std::string& key) {
  if (!has(key)) return nullptr;
  const nlohmann::json v = get(key);
  resolved_[key] = nlohmann::ordered_json(v);
  return v;
}

void ParamReader::finish() const {
  for (auto it = block_.begin(); it != block_.end(); ++it) {
    if (std::find(used_.begin(), used_.end(), it.key()) == used_.end()) {
      throw std::invalid_argument("config: unknown field '" + it.key() + "' in experiment block for '" +
                                  command_ + "'");
    }
  }
}

}  // namespace dunkl::cli
