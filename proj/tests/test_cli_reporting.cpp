#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xormaps/chaos_diagnostics.hpp"
#include "xormaps/cli_reporting.hpp"
#include "xormaps/fuzzy_combinators.hpp"
#include "xormaps/map_core.hpp"

namespace cr = xormaps::cli_reporting;
namespace mc = xormaps::map_core;
namespace fc = xormaps::fuzzy_combinators;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code{0};
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cr::cmd_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("eval prints the value and exits 0") {
  const auto r = run_cli({"eval", "xor(tent,inverted_tent)", "0.125"});
  CHECK(r.code == 0);
  CHECK(r.out == "0.5\n");
  CHECK(r.err.empty());
}

TEST_CASE("eval rejects points outside the unit interval") {
  const auto r = run_cli({"eval", "tent", "1.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("x must lie in [0,1]") != std::string::npos);
}

TEST_CASE("expression parse failures exit 2 and name the offset") {
  const auto r = run_cli({"eval", "xor(tent", "0.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("parse error:") != std::string::npos);
  CHECK(r.err.find("offset 8") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"eval", "tent"}).code == 2);  // missing x
}

TEST_CASE("--help exits 0 and shows usage") {
  const auto r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("Usage") != std::string::npos);
}

TEST_CASE("catalog lists the five maps in order on the first line") {
  const auto r = run_cli({"catalog"});
  CHECK(r.code == 0);
  const std::string first = "catalog: logistic tent inverted_tent doubling cubic\n";
  CHECK(r.out.rfind(first, 0) == 0);
}

TEST_CASE("combine prints canonical text and PA availability") {
  const auto r = run_cli({"combine", " xor( tent , inverted_tent ) "});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("xor(tent,inverted_tent)\n", 0) == 0);
  CHECK(r.out.find("available (--emit-pa)") != std::string::npos);

  const auto smooth = run_cli({"combine", "logistic(r=4)"});
  CHECK(smooth.code == 0);
  CHECK(smooth.out.find("not available") != std::string::npos);
}

TEST_CASE("combine --emit-pa round-trips through JSON") {
  const auto r = run_cli({"combine", "xor(tent,inverted_tent)", "--emit-pa"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.contains("breakpoints"));
  const std::vector<double> cuts = doc["breakpoints"];
  const std::vector<double> expected = {0.0, 0.25, 0.5, 0.75, 1.0};
  CHECK(cuts == expected);

  const auto pa = fc::PiecewiseAffineMap::from_json(doc);
  const auto map = mc::parse_map_expr("xor(tent,inverted_tent)");
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    CHECK(std::fabs(fc::pa_eval(pa, x) - mc::eval(map, x)) <= 1e-12);
  }
}

TEST_CASE("combine --emit-pa fails cleanly for smooth maps") {
  const auto r = run_cli({"combine", "logistic(r=4)", "--emit-pa"});
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("branches summarizes the decomposition") {
  const auto r = run_cli({"branches", "xor(tent,inverted_tent)"});
  CHECK(r.code == 0);
  CHECK(r.out.find("4 full branches / 4 branches (exact)") != std::string::npos);
}

TEST_CASE("inverted verdict thresholds exit 2") {
  const auto r = run_cli({"diagnose", "tent", "--seeds", "2", "--iters", "2000",
                          "--lyap-chaotic=-0.5", "--lyap-nonchaotic=0.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("must be below") != std::string::npos);
}

namespace {

std::vector<std::string> small_diagnose_args() {
  return {"diagnose", "xor(tent,inverted_tent)",
          "--seeds", "2",   "--iters", "20000", "--transient", "100",
          "--bins",  "200", "--grid",  "500"};
}

}  // namespace

TEST_CASE("diagnose emits an ordered, thread-independent report") {
  auto args = small_diagnose_args();
  args.push_back("--threads");
  args.push_back("1");
  const auto single = run_cli(args);
  REQUIRE(single.code == 0);

  const auto doc = nlohmann::ordered_json::parse(single.out);
  std::vector<std::string> keys;
  for (const auto& item : doc.items()) keys.push_back(item.key());
  const std::vector<std::string> expected = {
      "schema_version", "expression", "config",    "lyapunov",
      "coverage",       "fixed_points", "zero_set", "histogram",
      "branches",       "distortion", "verdict",   "fixtures_match"};
  CHECK(keys == expected);
  CHECK(doc["verdict"] == "Chaotic");
  CHECK_FALSE(doc["config"].contains("threads"));

  args.back() = "4";
  const auto multi = run_cli(args);
  REQUIRE(multi.code == 0);
  CHECK(multi.out == single.out);
}

TEST_CASE("diagnose writes the requested report files") {
  const std::string dir = "cli_out_test";
  fs::remove_all(dir);
  auto args = small_diagnose_args();
  const std::vector<std::string> extras = {"--out", dir,   "--format", "json",
                                           "--format", "csv", "--format", "svg"};
  args.insert(args.end(), extras.begin(), extras.end());
  const auto r = run_cli(args);
  REQUIRE(r.code == 0);

  const auto map = mc::parse_map_expr("xor(tent,inverted_tent)");
  const auto base = cr::report_basename("diagnose", mc::expression_hash(map), 1);
  const auto json_path = dir + "/" + base + ".json";
  const auto csv_path = dir + "/" + base + ".csv";
  const auto svg_path = dir + "/" + base + ".svg";
  REQUIRE(fs::exists(json_path));
  REQUIRE(fs::exists(csv_path));
  REQUIRE(fs::exists(svg_path));

  CHECK(slurp(json_path) == r.out);
  CHECK(slurp(csv_path).rfind("x,density\n", 0) == 0);
  CHECK(slurp(svg_path).find("<svg") != std::string::npos);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 3);

  fs::remove_all(dir);
}

TEST_CASE("hash16 and report_basename are fixed-width and deterministic") {
  CHECK(cr::hash16(0) == "0000000000000000");
  CHECK(cr::hash16(0xdeadbeefULL) == "00000000deadbeef");
  CHECK(cr::report_basename("diagnose", 0xabcULL, 7) ==
        "diagnose-0000000000000abc-7");
}

TEST_CASE("write_file_atomic creates directories and replaces content") {
  const std::string dir = "cli_atomic_dir/nested";
  fs::remove_all("cli_atomic_dir");
  const auto path = cr::write_file_atomic(dir, "a.txt", "hello");
  CHECK(fs::exists(path));
  CHECK(slurp(path) == "hello");
  cr::write_file_atomic(dir, "a.txt", "bye");
  CHECK(slurp(path) == "bye");
  fs::remove_all("cli_atomic_dir");
}

TEST_CASE("csv helpers emit headers and rows") {
  CHECK(cr::histogram_csv({0.5, 0.5}) == "x,density\n0.25,0.5\n0.75,0.5\n");

  xormaps::chaos_diagnostics::Orbit orbit;
  orbit.points = {0.1, 0.2};
  CHECK(cr::orbit_csv(orbit) == "step,x\n0,0.1\n1,0.2\n");

  CHECK(cr::basin_csv({0, -1}, 1) == "x,target\n0.0,0\n1.0,-1\n");
}

TEST_CASE("fixed-points validates the period range and reports cycles") {
  CHECK(run_cli({"fixed-points", "tent", "--period", "13"}).code == 2);

  const auto r =
      run_cli({"fixed-points", "tent", "--period", "2", "--grid", "2000"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::ordered_json::parse(r.out);
  CHECK(doc["period"] == 2);
  CHECK(doc["truncated"] == false);
  REQUIRE(doc["points"].size() == 2);
  CHECK(std::fabs(doc["points"][0]["location"].get<double>() - 0.4) <= 1e-9);
  CHECK(std::fabs(doc["points"][1]["location"].get<double>() - 0.8) <= 1e-9);
  CHECK(doc["points"][0]["stability"] == "Unstable");
}

TEST_CASE("basin auto-targets the stable fixed point") {
  const auto r =
      run_cli({"basin", "xor(logistic(r=3.9),tent)", "--grid", "500"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::ordered_json::parse(r.out);
  REQUIRE(doc["targets"].size() == 1);
  CHECK(std::fabs(doc["targets"][0].get<double>() - 0.9 / 3.9) <= 1e-6);
  CHECK(doc["fractions"][0].get<double>() >= 0.99);
}

TEST_CASE("basin explains when there is nothing to target") {
  const auto r = run_cli({"basin", "tent", "--grid", "100"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::ordered_json::parse(r.out);
  CHECK(doc.contains("note"));
  CHECK(doc["targets"].empty());
}

TEST_CASE("strict table runs exit 1 on reproduction mismatches") {
  const std::vector<std::string> base = {"table",     "--seeds", "2",
                                         "--iters",   "20000",   "--transient",
                                         "500",       "--bins",  "200",
                                         "--grid",    "500"};
  auto strict = base;
  strict.push_back("--strict");
  const auto r = run_cli(strict);
  CHECK(r.code == 1);
  CHECK(r.out.find("matches: ") != std::string::npos);
  CHECK(r.out.find('*') != std::string::npos);

  CHECK(run_cli(base).code == 0);
}

TEST_CASE("example1 passes strictly at the fixture parameter") {
  const auto r = run_cli({"example1", "--strict"});
  CHECK(r.code == 0);
  CHECK(r.out.find("example1: PASS") != std::string::npos);
}

TEST_CASE("example1 reports failure honestly away from its regime") {
  const auto strict = run_cli({"example1", "--r", "0.5", "--strict"});
  CHECK(strict.code == 1);
  CHECK(strict.out.find("example1: FAIL") != std::string::npos);

  CHECK(run_cli({"example1", "--r", "0.5"}).code == 0);
}

TEST_CASE("example2 passes strictly at reduced budgets") {
  const auto r = run_cli({"example2", "--seeds", "2", "--iters", "20000",
                          "--transient", "200", "--bins", "200", "--grid",
                          "500", "--strict"});
  CHECK(r.code == 0);
  CHECK(r.out.find("example2: PASS") != std::string::npos);
}

TEST_CASE("plot renders SVG documents for each kind") {
  const auto graph = run_cli({"plot", "graph", "tent", "--resolution", "64"});
  CHECK(graph.code == 0);
  CHECK(graph.out.find("<svg") != std::string::npos);
  CHECK(graph.out.find("</svg>") != std::string::npos);

  const auto cobweb = run_cli({"plot", "cobweb", "xor(logistic(r=3.9),tent)",
                               "--x0", "0.7", "--steps", "30"});
  CHECK(cobweb.code == 0);
  CHECK(cobweb.out.find("<svg") != std::string::npos);

  const auto hist = run_cli({"plot", "histogram", "xor(tent,inverted_tent)",
                             "--seeds", "2", "--iters", "5000", "--bins",
                             "50"});
  CHECK(hist.code == 0);
  CHECK(hist.out.find("<svg") != std::string::npos);

  const auto basin = run_cli({"plot", "basin", "xor(logistic(r=3.9),tent)",
                              "--grid", "200"});
  CHECK(basin.code == 0);
  CHECK(basin.out.find("<svg") != std::string::npos);
}

TEST_CASE("plot rejects unknown kinds and impossible basins") {
  CHECK(run_cli({"plot", "nonsense", "tent"}).code == 2);

  const auto r = run_cli({"plot", "basin", "tent", "--grid", "100"});
  CHECK(r.code == 2);
  CHECK(r.err.find("needs targets") != std::string::npos);
}
