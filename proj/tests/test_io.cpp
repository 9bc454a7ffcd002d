#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hilltails/error.hpp"
#include "hilltails/io.hpp"

using namespace hilltails;
using namespace hilltails::io;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / ("hilltails_io_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("number formatting round-trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 8.0 / 3.0}) CHECK(std::stod(format_number(x)) == x);
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(format_number(3.0) == "3");
}

TEST_CASE("csv table") {
  Table t;
  t.meta = {{"command", "tails"}, {"seed", "7"}};
  t.columns = {"mu", "label"};
  t.add_row({1.5, "a,b"});
  t.add_row({nullptr, "say \"hi\""});
  CHECK(t.to_csv() == "# command = tails\n# seed = 7\nmu,label\n1.5,\"a,b\"\n,\"say \"\"hi\"\"\"\n");
  CHECK_THROWS(t.add_row({1.0}));
  auto j = t.to_json();
  CHECK(j["config"]["seed"] == "7");
  CHECK(j["rows"][0][0] == 1.5);
}

TEST_CASE("config parsing") {
  std::set<std::string> keys{"mu", "seed", "mu-grid"};
  auto c = parse_config("# comment\nmu = 400\n\nseed=3 # trailing\nmu_grid = 1:2:3\n", keys);
  CHECK(c.at("mu") == "400");
  CHECK(c.at("seed") == "3");
  CHECK(c.at("mu-grid") == "1:2:3");
  CHECK_THROWS_AS(parse_config("bogus = 1\n", keys), PreconditionError);
  CHECK_THROWS_AS(parse_config("mu = 1\nmu = 2\n", keys), PreconditionError);
  CHECK_THROWS_AS(parse_config("just words\n", keys), PreconditionError);
  try {
    parse_config("mu = 1\nbogus = 2\n", keys, "run.cfg");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("run.cfg:2") != std::string::npos);
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
}

TEST_CASE("ranges") {
  auto r = parse_range("100:2500:5", true);
  auto p = r.points();
  REQUIRE(p.size() == 5);
  CHECK(p.front() == 100.0);
  CHECK(p.back() == 2500.0);
  CHECK(parse_range("-3:3", false).hi == 3.0);
  CHECK_THROWS_AS(parse_range("3:1:4", true), PreconditionError);
  CHECK_THROWS_AS(parse_range("1:2", true), PreconditionError);
  CHECK_THROWS_AS(parse_range("1:x:3", true), PreconditionError);
  CHECK_THROWS_AS(parse_range("1:2:0", true), PreconditionError);
}

TEST_CASE("atomic writes and archives") {
  auto f = scratch("out.txt");
  write_atomic(f, "first\n");
  write_atomic(f, "second\n");
  CHECK(slurp(f) == "second\n");
  for (const auto& e : fs::directory_iterator(f.parent_path()))
    CHECK(e.path().filename().string().find(".tmp.") == std::string::npos);
  std::vector<double> data{1.0, -2.5, 1e-300, NAN};
  auto a = scratch("samples.f64");
  write_f64_archive(a, data, {2, 2}, {{"seed", 7}});
  CHECK(fs::file_size(a) == 32);
  auto back = read_f64_archive(a);
  CHECK(back[0] == 1.0);
  CHECK(back[2] == 1e-300);
  CHECK(std::isnan(back[3]));
  auto bytes = slurp(a);
  CHECK(static_cast<unsigned char>(bytes[7]) == 0x3f); // 1.0 little-endian
  auto side = json::parse(slurp(a.string() + ".json"));
  CHECK(side["seed"] == 7);
  CHECK(side["shape"] == json::array({2, 2}));
  CHECK(side["byte_order"] == "little");
  CHECK_THROWS(write_f64_archive(a, data, {3}, {}));
  fs::remove_all(f.parent_path());
}
