#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "fracsing/grid.hpp"
#include "fracsing/radial_function.hpp"

namespace fracsing::cli {

/// Round-trip exact text form of a double ("%.17g"; nan / inf / -inf spelled out).
std::string format_double(double v);
double parse_double(const std::string& text);

/// Writes `content` to `path` through a temporary file in the same directory and a
/// rename, so readers never observe a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// CSV with a leading "# {json}" comment line.
std::string render_csv(const nlohmann::json& header, const Table& table);
void write_csv(const std::filesystem::path& path, const nlohmann::json& header, const Table& table);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

struct CsvFile {
  nlohmann::json header;  // empty object if the file has no comment header
  Table table;
};

CsvFile read_csv(const std::filesystem::path& path);

/// Profile table: r, u_total, u_smooth, u_singular (= singular_coeff r^exponent).
/// The singular coefficient and exponent are stored in the header for exact reload.
Table profile_table(const RadialFunction& u);
void save_profile_csv(const std::filesystem::path& path, nlohmann::json header,
                      const RadialFunction& u);
/// Loads a profile saved by save_profile_csv (or any CSV with columns r and u_total)
/// onto `grid`; the r column must reproduce the grid nodes exactly.
RadialFunction load_profile_csv(const std::filesystem::path& path, const GridPtr& grid);

/// Long-format table (series, x, y) for generic plotting tools; series are indices
/// into `names`, which are recorded in the header.
Table long_format(const std::vector<std::string>& names, const std::vector<std::vector<double>>& xs,
                  const std::vector<std::vector<double>>& ys);

}  // namespace fracsing::cli
