#include "fracsing_cli/config.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "fracsing/errors.hpp"
#include "fracsing/operator_io.hpp"

namespace fracsing::cli {

using nlohmann::json;

void RunConfig::validate() const {
  params.validate();
  if (grid.n_nodes < 16) {
    throw InvalidArgument("grid.n_nodes must be >= 16");
  }
  if (!(grid.grading >= 1.0)) {
    throw InvalidArgument("grid.grading must be >= 1");
  }
  if (grid.boundary_grading != 0.0 && !(grid.boundary_grading >= 1.0)) {
    throw InvalidArgument("grid.boundary_grading must be 0 (same as grading) or >= 1");
  }
  if (!(tolerances.picard_tol > 0.0) || !(tolerances.bracket_tol > 0.0) ||
      !(tolerances.eig_tol > 0.0)) {
    throw InvalidArgument("tolerances must be positive");
  }
  if (tolerances.max_iter < 1) {
    throw InvalidArgument("tolerances.max_iter must be >= 1");
  }
  if (threads < 0) {
    throw InvalidArgument("threads must be >= 0");
  }
  if (scan_samples < 4) {
    throw InvalidArgument("scan_samples must be >= 4");
  }
  if (segments < 2) {
    throw InvalidArgument("segments must be >= 2");
  }
  for (const auto& f : output.formats) {
    if (f != "csv" && f != "json") {
      throw InvalidArgument("unknown output format '" + f + "' (expected csv or json)");
    }
  }
}

bool RunConfig::wants(const std::string& format) const {
  for (const auto& f : output.formats) {
    if (f == format) {
      return true;
    }
  }
  return false;
}

json to_json(const RunConfig& cfg) {
  return {
      {"params", {{"dim", cfg.params.dim}, {"alpha", cfg.params.alpha}, {"p", cfg.params.p},
                  {"k", cfg.params.k}}},
      {"grid", {{"n_nodes", cfg.grid.n_nodes}, {"grading", cfg.grid.grading},
                {"boundary_grading", cfg.grid.boundary_grading}}},
      {"tolerances", {{"picard_tol", cfg.tolerances.picard_tol},
                      {"bracket_tol", cfg.tolerances.bracket_tol},
                      {"eig_tol", cfg.tolerances.eig_tol},
                      {"max_iter", cfg.tolerances.max_iter}}},
      {"output", {{"directory", cfg.output.directory.string()}, {"formats", cfg.output.formats}}},
      {"threads", cfg.threads},
      {"emit_plots", cfg.emit_plots},
      {"seed", cfg.seed},
      {"scan_samples", cfg.scan_samples},
      {"segments", cfg.segments},
      {"profile", cfg.profile.string()},
  };
}

json default_config_json() { return to_json(RunConfig{}); }

namespace {

void reject_unknown(const json& given, const json& schema, const std::string& prefix) {
  for (auto it = given.begin(); it != given.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!schema.contains(it.key())) {
      throw InvalidArgument("unknown config key '" + key + "'");
    }
    if (it->is_object()) {
      if (!schema.at(it.key()).is_object()) {
        throw InvalidArgument("config key '" + key + "' is not a section");
      }
      reject_unknown(*it, schema.at(it.key()), key);
    }
  }
}

template <class T>
T get(const json& j, const char* section, const char* key) {
  try {
    return j.at(section).at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("config value ") + section + "." + key + " has the wrong type");
  }
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("config value ") + key + " has the wrong type");
  }
}

}  // namespace

RunConfig from_json(const json& given) {
  json doc = default_config_json();
  reject_unknown(given, doc, "");
  doc.merge_patch(given);
  RunConfig cfg;
  cfg.params.dim = get<int>(doc, "params", "dim");
  cfg.params.alpha = get<double>(doc, "params", "alpha");
  cfg.params.p = get<double>(doc, "params", "p");
  cfg.params.k = get<double>(doc, "params", "k");
  cfg.grid.n_nodes = get<int>(doc, "grid", "n_nodes");
  cfg.grid.grading = get<double>(doc, "grid", "grading");
  cfg.grid.boundary_grading = get<double>(doc, "grid", "boundary_grading");
  cfg.tolerances.picard_tol = get<double>(doc, "tolerances", "picard_tol");
  cfg.tolerances.bracket_tol = get<double>(doc, "tolerances", "bracket_tol");
  cfg.tolerances.eig_tol = get<double>(doc, "tolerances", "eig_tol");
  cfg.tolerances.max_iter = get<int>(doc, "tolerances", "max_iter");
  cfg.output.directory = get<std::string>(doc, "output", "directory");
  cfg.output.formats = get<std::vector<std::string>>(doc, "output", "formats");
  cfg.threads = get<int>(doc, "threads");
  cfg.emit_plots = get<bool>(doc, "emit_plots");
  cfg.seed = get<std::uint64_t>(doc, "seed");
  cfg.scan_samples = get<int>(doc, "scan_samples");
  cfg.segments = get<int>(doc, "segments");
  cfg.profile = get<std::string>(doc, "profile");
  cfg.validate();
  return cfg;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw InvalidArgument("--set expects key=value, got '" + assignment + "'");
  }
  std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  static const std::vector<std::pair<std::string, std::string>> shorthands = {
      {"dim", "params.dim"},         {"N", "params.dim"},         {"alpha", "params.alpha"},
      {"p", "params.p"},             {"k", "params.k"},           {"n_nodes", "grid.n_nodes"},
      {"grading", "grid.grading"},   {"boundary_grading", "grid.boundary_grading"},
  };
  for (const auto& [s, full] : shorthands) {
    if (key == s) {
      key = full;
    }
  }
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;
  }
  json* node = &doc;
  std::stringstream path(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(path, part, '.')) {
    parts.push_back(part);
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    node = &(*node)[parts[i]];
  }
  (*node)[parts.back()] = value;
}

RunConfig load_config(const std::filesystem::path& file, const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) {
      throw InvalidArgument("cannot read config file " + file.string());
    }
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw InvalidArgument("config file " + file.string() + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) {
      throw InvalidArgument("config file " + file.string() + " must hold a JSON object");
    }
  }
  for (const auto& o : overrides) {
    apply_override(doc, o);
  }
  return from_json(doc);
}

std::string config_hash(const RunConfig& cfg) {
  json j = to_json(cfg);
  // Execution-only settings do not change results.
  j.erase("threads");
  j.erase("output");
  j.erase("emit_plots");
  const std::string text = j.dump();
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0')
     << fnv1a64({reinterpret_cast<const unsigned char*>(text.data()), text.size()});
  return os.str();
}

}  // namespace fracsing::cli
