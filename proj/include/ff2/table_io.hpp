#pragma once

// Result tables and their CSV / JSON forms.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ff2/rational.hpp"

namespace ff2 {

struct Column {
  std::string name;
  bool rational = false;  ///< values are exact "p/q" strings
};

struct Table {
  std::string schema;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<Column> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match columns");
    rows.push_back(std::move(row));
  }
};

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Column names and row values, with a trailing "<name>_float" column after
/// each rational one when requested.
inline std::pair<std::vector<std::string>, std::vector<std::vector<std::string>>> expand_columns(
    const Table& t, bool with_float) {
  std::vector<std::string> names;
  for (const auto& c : t.columns) {
    names.push_back(c.name);
    if (with_float && c.rational) names.push_back(c.name + "_float");
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : t.rows) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < r.size(); ++i) {
      out.push_back(r[i]);
      if (with_float && t.columns[i].rational) out.push_back(to_float_string(parse_rat(r[i])));
    }
    rows.push_back(std::move(out));
  }
  return {std::move(names), std::move(rows)};
}

}  // namespace detail

inline std::string to_csv(const Table& t, bool with_float = false) {
  std::ostringstream os;
  os << "# schema=" << t.schema << " version=1\n";
  for (const auto& [k, v] : t.meta) os << "# " << k << "=" << v << "\n";
  auto [names, rows] = detail::expand_columns(t, with_float);
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << detail::csv_field(names[i]);
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << detail::csv_field(r[i]);
    os << "\n";
  }
  return os.str();
}

inline std::string to_json(const Table& t, bool with_float = false) {
  nlohmann::ordered_json j;
  j["schema"] = t.schema;
  j["version"] = 1;
  j["meta"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.meta) j["meta"][k] = v;
  auto [names, rows] = detail::expand_columns(t, with_float);
  j["columns"] = names;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < r.size(); ++i) obj[names[i]] = r[i];
    j["rows"].push_back(std::move(obj));
  }
  return j.dump(2) + "\n";
}

/// Writes via a sibling temporary and a rename, so readers never observe a
/// partial file.
inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f << content;
    if (!f.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace ff2
