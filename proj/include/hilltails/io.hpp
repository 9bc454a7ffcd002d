#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hilltails::io {

using json = nlohmann::ordered_json;

// write to a sibling temp file, then rename over the target
void write_atomic(const std::filesystem::path& path, const std::string& content);

// shortest decimal that round-trips; "nan", "inf", "-inf" for the rest
std::string format_number(double x);

// key/value pairs in insertion order
using Meta = std::vector<std::pair<std::string, std::string>>;

struct Table {
  Meta meta;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void add_row(std::vector<json> row);
  std::string to_csv() const;  // '#' metadata lines, header, RFC-4180 rows
  json to_json() const;        // {"config": {...}, "columns": [...], "rows": [[...]]}
};

std::string csv_field(const json& v);
std::string dump(const json& j); // two-space indent, trailing newline

// Flat "key = value" text; '#' starts a comment. Keys outside `allowed`,
// duplicates and malformed lines are rejected.
std::map<std::string, std::string> parse_config(const std::string& text, const std::set<std::string>& allowed,
                                                const std::string& source = "config");
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path,
                                                    const std::set<std::string>& allowed);

struct Range {
  double lo = 0.0, hi = 0.0;
  int count = 0;
  std::vector<double> points() const;
};
// "lo:hi:n" (n >= 1) or "lo:hi" (count 0)
Range parse_range(const std::string& text, bool need_count);

// little-endian float64 archive plus <path>.json sidecar {shape, seed, ...}
void write_f64_archive(const std::filesystem::path& path, const std::vector<double>& data,
                       const std::vector<std::size_t>& shape, const json& extra);
std::vector<double> read_f64_archive(const std::filesystem::path& path);

} // namespace hilltails::io
