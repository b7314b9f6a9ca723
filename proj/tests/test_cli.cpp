#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "d4census/arith.hpp"
#include "d4census/asymptotic.hpp"
#include "d4census/census.hpp"
#include "d4census/cli.hpp"

using namespace d4;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / (std::string("d4cli_") + name);
}

}  // namespace

TEST_CASE("count json") {
  const Run r = run({"count", "--x", "1", "1", "1", "1", "--format", "json", "--pmax", "10000"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["tool"] == "d4census");
  CHECK(j["version"] == cli::kVersion);
  CHECK(j["result"]["exact"] == 16);
  CHECK(j["config"]["command"] == "count");
  CHECK(j["config"]["x"] == json::array({1.0, 1.0, 1.0, 1.0}));
  CHECK(j["timing"]["seconds"].get<double>() >= 0.0);
  CHECK(j.dump(2) + "\n" == r.out);
}

TEST_CASE("json reports round-trip for every command") {
  const std::vector<std::vector<std::string>> commands{
      {"count", "--x", "7", "3.5", "9", "20"},
      {"predict", "--x", "10", "10", "10", "10"},
      {"constants"},
      {"verify", "--suite", "lemma432"},
      {"classify", "--triple", "1", "2", "7", "--twist", "3", "--prime", "7"},
      {"sweep", "--start", "2", "--stop", "8"},
  };
  for (auto args : commands) {
    args.insert(args.end(), {"--format", "json", "--pmax", "10000"});
    const Run r = run(args);
    INFO(args[0]);
    REQUIRE(r.code == cli::kOk);
    CHECK(json::parse(r.out).dump(2) + "\n" == r.out);
  }
}

TEST_CASE("count agrees across worker counts") {
  std::string first;
  for (const char* w : {"1", "2", "4", "8"}) {
    Run r = run({"count", "--x", "12", "9", "15", "30", "--format", "csv", "--workers", w, "--pmax", "1000"});
    REQUIRE(r.code == cli::kOk);
    if (first.empty()) first = r.out;
    CHECK(r.out == first);
  }
  const auto lines = split_lines(first);
  REQUIRE(lines.size() > 1);
  CHECK(lines.front() == "m1,m2,m3,twists,cumulative");
  const auto tables = SieveTables::build(100);
  const std::string last = lines.back();
  CHECK(last.substr(last.rfind(',') + 1) == std::to_string(exact_census_serial({12, 9, 15, 30}, tables)));
}

TEST_CASE("sweep csv") {
  const Run r = run({"sweep", "--start", "1", "--stop", "16", "--pmax", "100000"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.find('\r') == std::string::npos);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "x1,x2,x3,x4,exact,predicted,ratio");
  CHECK(lines[1].rfind("1,1,1,1,16,", 0) == 0);

  const auto tables = SieveTables::build(100);
  EulerProductSpec spec;
  spec.pmax = 100000;
  double x = 1;
  for (std::size_t i = 1; i < lines.size(); ++i, x *= 2) {
    std::istringstream row(lines[i]);
    std::vector<std::string> cells;
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    REQUIRE(cells.size() == 7);
    CHECK(std::stod(cells[0]) == x);
    CHECK(std::stoull(cells[4]) == exact_census_serial({x, x, x, x}, tables));
    CHECK(std::stod(cells[5]) == predicted_count({x, x, x, x}, spec));
  }
  CHECK(run({"sweep", "--start", "1", "--stop", "16", "--pmax", "100000"}).out == r.out);
  CHECK(run({"sweep", "--start", "1", "--stop", "16", "--pmax", "100000", "--workers", "4"}).out == r.out);
}

TEST_CASE("sweep with fixed X4 and an empty grid") {
  const Run fixed = run({"sweep", "--start", "2", "--stop", "8", "--x4", "1", "--format", "csv"});
  REQUIRE(fixed.code == cli::kOk);
  const auto lines = split_lines(fixed.out);
  REQUIRE(lines.size() == 4);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    std::vector<std::string> cells;
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    CHECK(cells[3] == "1");
  }
  const Run empty = run({"sweep", "--start", "20", "--stop", "10"});
  CHECK(empty.code == cli::kOk);
  CHECK(empty.out == "x1,x2,x3,x4,exact,predicted,ratio\n");
}

TEST_CASE("exit codes") {
  CHECK(run({"verify", "--suite", "lemma432"}).code == cli::kOk);
  CHECK(run({"verify", "--suite", "constants", "--tol", "1e-30", "--pmax", "10000"}).code == cli::kCheckFailure);
  CHECK(run({"verify", "--suite", "nope"}).code == cli::kUsageError);
  CHECK(run({"count", "--x", "1", "1", "1"}).code == cli::kUsageError);
  CHECK(run({"count", "--x", "1", "1", "1", "-1"}).code == cli::kUsageError);
  CHECK(run({"frobnicate"}).code == cli::kUsageError);
  CHECK(run({"count", "--x", "1", "1", "1", "1", "--format", "xml"}).code == cli::kUsageError);
  CHECK(run({"count", "--x", "1", "1", "1", "1", "--workers", "0"}).code == cli::kUsageError);
  CHECK(run({"classify", "--triple", "1", "3", "3"}).code == cli::kUsageError);
  const Run big = run({"count", "--x", "1e9", "1", "1", "1"});
  CHECK(big.code == cli::kCapacityError);
  CHECK_FALSE(big.err.empty());
  CHECK(run({"sweep", "--start", "1", "--stop", "2", "--x4", "1e10"}).code == cli::kCapacityError);
}

TEST_CASE("classify text and json") {
  const Run r = run({"classify", "--triple", "1", "2", "7", "--prime", "7", "--format", "json"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out)["result"];
  CHECK(j["soluble"] == true);
  CHECK(j["conic_point"] == json::array({3, 1, 1}));
  CHECK(j["invariants"] == json::array({1, 7, 1, 1}));
  CHECK(j["inertia_class"] == "RS");
  const Run bad = run({"classify", "--triple", "1", "2", "3", "--format", "json"});
  REQUIRE(bad.code == cli::kOk);
  CHECK(json::parse(bad.out)["result"]["soluble"] == false);
  CHECK(json::parse(bad.out)["result"]["conic_point"].is_null());
}

TEST_CASE("out path") {
  const auto path = temp_file("out.csv");
  const Run r = run({"sweep", "--start", "1", "--stop", "2", "--out", path.string()});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  CHECK(first == "x1,x2,x3,x4,exact,predicted,ratio");
  std::filesystem::remove(path);
}

TEST_CASE("sieve cache") {
  const auto path = temp_file("sieve.bin");
  std::filesystem::remove(path);
  const std::vector<std::string> args{"count", "--x", "10", "10", "10", "10", "--format", "csv",
                                      "--sieve-cache", path.string()};
  const Run first = run(args);
  REQUIRE(first.code == cli::kOk);
  REQUIRE(std::filesystem::exists(path));
  const auto size = std::filesystem::file_size(path);
  const Run second = run(args);
  CHECK(second.code == cli::kOk);
  CHECK(second.out == first.out);
  CHECK(std::filesystem::file_size(path) == size);

  {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(0);
    f.put('Z');
  }
  const Run corrupt = run(args);
  CHECK(corrupt.code == cli::kCapacityError);
  CHECK(corrupt.err.find("sieve-cache") != std::string::npos);
  std::filesystem::remove(path);
}
