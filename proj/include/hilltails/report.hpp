#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hilltails/io.hpp"

namespace hilltails::report {

struct Options {
  std::uint64_t seed = 7;
  bool quick = false;
  std::filesystem::path out_dir = "report";
  io::Meta config; // embedded verbatim in every file
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
  io::json values;
};

struct Result {
  std::vector<Check> checks;
  std::vector<std::string> errors; // sub-runs that threw
  std::vector<std::string> files;
  bool all_pass() const;
};

// Writes tails.csv, left_tail.csv, identities.json and manifest.json into out_dir.
Result run(const Options& opt);

} // namespace hilltails::report
