#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "fracsing/grid.hpp"
#include "fracsing/params.hpp"

namespace fracsing::cli {

struct Tolerances {
  double picard_tol = 1e-10;
  double bracket_tol = 1e-3;
  double eig_tol = 1e-10;
  int max_iter = 50000;
};

struct OutputConfig {
  std::filesystem::path directory = ".";
  std::vector<std::string> formats = {"csv", "json"};
};

struct RunConfig {
  ProblemParams params;
  GridSpec grid;
  Tolerances tolerances;
  OutputConfig output;
  int threads = 0;
  bool emit_plots = false;
  std::uint64_t seed = 20240521;
  /// Samples for the stability and bifurcation scans.
  int scan_samples = 8;
  /// Mountain-pass path segments.
  int segments = 20;
  /// For `classify`: profile CSV to analyse.
  std::filesystem::path profile;

  /// Throws InvalidArgument on any violated precondition.
  void validate() const;
  [[nodiscard]] bool wants(const std::string& format) const;
};

/// Defaults as a JSON document (the schema accepted by load_config).
nlohmann::json default_config_json();

nlohmann::json to_json(const RunConfig& cfg);
RunConfig from_json(const nlohmann::json& j);

/// Applies "key=value" to a config document.  Keys are dotted paths
/// ("params.k", "grid.n_nodes"); bare parameter names (k, p, alpha, dim, n_nodes,
/// grading) are accepted as shorthands.  Values are parsed as JSON, falling back
/// to a plain string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Defaults, then the JSON file (if non-empty path), then overrides in order.
RunConfig load_config(const std::filesystem::path& file, const std::vector<std::string>& overrides);

/// FNV-1a of the canonical JSON dump of the (physics-relevant) config, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace fracsing::cli
