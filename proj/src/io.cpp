#include "hilltails/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "hilltails/error.hpp"

namespace hilltails::io {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path dir = path.parent_path();
  if (!dir.empty()) fs::create_directories(dir);
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot rename onto " + path.string());
  }
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string csv_field(const json& v) {
  std::string s;
  if (v.is_null())
    return "";
  else if (v.is_number_float())
    return format_number(v.get<double>());
  else if (v.is_number())
    s = v.dump();
  else if (v.is_boolean())
    s = v.get<bool>() ? "true" : "false";
  else if (v.is_string())
    s = v.get<std::string>();
  else
    s = v.dump();
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void Table::add_row(std::vector<json> row) {
  if (row.size() != columns.size()) throw Error("table row width differs from header");
  rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::ostringstream os;
  for (const auto& [k, v] : meta) os << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << csv_field(columns[i]);
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
    os << "\n";
  }
  return os.str();
}

json Table::to_json() const {
  json j;
  json cfg = json::object();
  for (const auto& [k, v] : meta) cfg[k] = v;
  j["config"] = cfg;
  j["columns"] = columns;
  json rs = json::array();
  for (const auto& r : rows) {
    json row = json::array();
    for (const auto& v : r) {
      // JSON has no nan/inf; keep them as strings
      if (v.is_number_float() && !std::isfinite(v.get<double>()))
        row.push_back(format_number(v.get<double>()));
      else
        row.push_back(v);
    }
    rs.push_back(std::move(row));
  }
  j["rows"] = rs;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

} // namespace

std::map<std::string, std::string> parse_config(const std::string& text, const std::set<std::string>& allowed,
                                                const std::string& source) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw PreconditionError(where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    for (char& c : key)
      if (c == '_') c = '-';
    if (key.empty()) throw PreconditionError(where + ": empty key");
    if (!allowed.count(key)) throw PreconditionError(where + ": unknown key '" + key + "'");
    if (out.count(key)) throw PreconditionError(where + ": duplicate key '" + key + "'");
    out[key] = val;
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const fs::path& path, const std::set<std::string>& allowed) {
  std::ifstream is(path);
  if (!is) throw PreconditionError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), allowed, path.string());
}

std::vector<double> Range::points() const {
  std::vector<double> p;
  if (count == 1) return {lo};
  for (int i = 0; i < count; ++i) p.push_back(lo + (hi - lo) * i / (count - 1));
  return p;
}

namespace {

double parse_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || !std::isfinite(v)) throw PreconditionError(what + ": not a finite number: '" + s + "'");
  return v;
}

} // namespace

Range parse_range(const std::string& text, bool need_count) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  const std::string what = "range '" + text + "'";
  if (need_count ? parts.size() != 3 : parts.size() != 2)
    throw PreconditionError(what + ": expected " + (need_count ? "lo:hi:n" : "lo:hi"));
  Range r;
  r.lo = parse_double(trim(parts[0]), what);
  r.hi = parse_double(trim(parts[1]), what);
  if (r.hi < r.lo) throw PreconditionError(what + ": hi < lo");
  if (need_count) {
    double n = parse_double(trim(parts[2]), what);
    if (n < 1 || n != std::floor(n) || n > 1e6) throw PreconditionError(what + ": n must be a positive integer");
    r.count = static_cast<int>(n);
    if (r.count > 1 && r.hi == r.lo) throw PreconditionError(what + ": empty range with n > 1");
  }
  return r;
}

void write_f64_archive(const fs::path& path, const std::vector<double>& data, const std::vector<std::size_t>& shape,
                       const json& extra) {
  std::size_t total = 1;
  for (auto s : shape) total *= s;
  if (total != data.size()) throw Error("archive shape does not match data size");
  std::string bytes(data.size() * 8, '\0');
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto u = std::bit_cast<std::uint64_t>(data[i]);
    for (int b = 0; b < 8; ++b) bytes[8 * i + static_cast<std::size_t>(b)] = static_cast<char>((u >> (8 * b)) & 0xff);
  }
  write_atomic(path, bytes);
  json side = extra.is_object() ? extra : json::object();
  side["file"] = path.filename().string();
  side["dtype"] = "float64";
  side["byte_order"] = "little";
  side["shape"] = shape;
  fs::path sc = path;
  sc += ".json";
  write_atomic(sc, dump(side));
}

std::vector<double> read_f64_archive(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (bytes.size() % 8) throw Error("archive size is not a multiple of 8: " + path.string());
  std::vector<double> out(bytes.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t u = 0;
    for (int b = 0; b < 8; ++b) u |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[8 * i + static_cast<std::size_t>(b)])) << (8 * b);
    out[i] = std::bit_cast<double>(u);
  }
  return out;
}

} // namespace hilltails::io
