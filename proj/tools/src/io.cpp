#include "fracsing_cli/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "fracsing/errors.hpp"

namespace fracsing::cli {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end != nullptr && (*end == ' ' || *end == '\r' || *end == '\t')) {
    ++end;
  }
  if (end == begin || *end != '\0') {
    throw InvalidArgument("not a number: '" + text + "'");
  }
  return v;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string render_csv(const json& header, const Table& table) {
  std::ostringstream os;
  json h = header;
  h["columns"] = table.columns;
  os << "# " << h.dump() << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    os << (c ? "," : "") << table.columns[c];
  }
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << (c ? "," : "") << format_double(row[c]);
    }
    os << "\n";
  }
  return os.str();
}

void write_csv(const std::filesystem::path& path, const json& header, const Table& table) {
  write_text_atomic(path, render_csv(header, table));
}

void write_json(const std::filesystem::path& path, const json& doc) {
  write_text_atomic(path, doc.dump(2) + "\n");
}

CsvFile read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidArgument("cannot read " + path.string());
  }
  CsvFile file;
  file.header = json::object();
  std::string line;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (line[0] == '#') {
      try {
        const auto j = json::parse(line.substr(1));
        if (j.is_object()) {
          file.header.merge_patch(j);
        }
      } catch (const json::exception&) {
        // free-form comment
      }
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cells.push_back(cell);
    }
    if (!have_columns) {
      file.table.columns = cells;
      have_columns = true;
      continue;
    }
    if (cells.size() != file.table.columns.size()) {
      throw InvalidArgument(path.string() + ": row with " + std::to_string(cells.size()) +
                            " cells, expected " + std::to_string(file.table.columns.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      row.push_back(parse_double(c));
    }
    file.table.rows.push_back(std::move(row));
  }
  if (!have_columns) {
    throw InvalidArgument(path.string() + ": no column header");
  }
  return file;
}

Table profile_table(const RadialFunction& u) {
  Table t;
  t.columns = {"r", "u_total", "u_smooth", "u_singular"};
  const auto nodes = u.grid()->nodes();
  for (int i = 0; i < u.size(); ++i) {
    t.rows.push_back({nodes[static_cast<std::size_t>(i)], u.total(i),
                      u.values()[static_cast<std::size_t>(i)], u.singular_part(i)});
  }
  return t;
}

void save_profile_csv(const std::filesystem::path& path, json header, const RadialFunction& u) {
  header["singular_coeff"] = format_double(u.singular_coeff());
  header["singular_exponent"] = format_double(u.singular_exponent());
  write_csv(path, header, profile_table(u));
}

RadialFunction load_profile_csv(const std::filesystem::path& path, const GridPtr& grid) {
  const auto file = read_csv(path);
  const auto& cols = file.table.columns;
  auto index = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i] == name) {
        return static_cast<int>(i);
      }
    }
    return -1;
  };
  const int ir = index("r");
  const int itotal = index("u_total");
  const int ismooth = index("u_smooth");
  if (ir < 0 || (itotal < 0 && ismooth < 0)) {
    throw InvalidArgument(path.string() + ": profile needs columns r and u_total");
  }
  if (static_cast<int>(file.table.rows.size()) != grid->size()) {
    throw InvalidArgument(path.string() + ": profile has " + std::to_string(file.table.rows.size()) +
                          " rows but the configured grid has " + std::to_string(grid->size()) +
                          " nodes");
  }
  double coeff = 0.0;
  double exponent = 0.0;
  const bool split = ismooth >= 0 && file.header.contains("singular_coeff");
  if (split) {
    coeff = parse_double(file.header.at("singular_coeff").get<std::string>());
    exponent = parse_double(file.header.at("singular_exponent").get<std::string>());
  }
  std::vector<double> values(static_cast<std::size_t>(grid->size()));
  for (int i = 0; i < grid->size(); ++i) {
    const auto& row = file.table.rows[static_cast<std::size_t>(i)];
    if (row[static_cast<std::size_t>(ir)] != grid->node(i)) {
      throw InvalidArgument(path.string() + ": node " + std::to_string(i) +
                            " does not match the configured grid (check n_nodes / grading)");
    }
    values[static_cast<std::size_t>(i)] = split ? row[static_cast<std::size_t>(ismooth)]
                                                : row[static_cast<std::size_t>(itotal)];
  }
  return RadialFunction(grid, std::move(values), coeff, exponent);
}

Table long_format(const std::vector<std::string>& names, const std::vector<std::vector<double>>& xs,
                  const std::vector<std::vector<double>>& ys) {
  Table t;
  t.columns = {"series", "x", "y"};
  for (std::size_t s = 0; s < names.size(); ++s) {
    for (std::size_t i = 0; i < xs[s].size(); ++i) {
      t.rows.push_back({static_cast<double>(s), xs[s][i], ys[s][i]});
    }
  }
  return t;
}

}  // namespace fracsing::cli
