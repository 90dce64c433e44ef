#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xormaps/chaos_diagnostics.hpp"
#include "xormaps/experiments.hpp"

namespace cd = xormaps::chaos_diagnostics;
namespace xe = xormaps::experiments;

namespace {

const xe::FactCheck* find_fact(const xe::ExampleReport& report,
                               const std::string& name) {
  for (const auto& f : report.facts) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const xe::CellResult* find_cell(const xe::VerdictMatrix& matrix,
                                const std::string& a, const std::string& b) {
  for (const auto& c : matrix.cells) {
    if ((c.a == a && c.b == b) || (c.a == b && c.b == a)) return &c;
  }
  return nullptr;
}

cd::DiagConfig table_config() {
  cd::DiagConfig c;
  c.seeds = 4;
  c.iterates = 60000;
  c.transient = 1000;
  c.bins = 300;
  c.grid_n = 1000;
  c.max_period = 4;
  return c;
}

}  // namespace

TEST_CASE("default fixtures document the reproduction targets") {
  const auto fx = xe::default_fixtures();
  REQUIRE(fx.contains("catalog_order"));
  const std::vector<std::string> order = fx["catalog_order"];
  const std::vector<std::string> expected = {"doubling", "cubic", "logistic",
                                             "tent", "inverted_tent"};
  CHECK(order == expected);
  CHECK(fx["table"].size() == 10);
  CHECK(fx["example1"]["r"] == 3.9);
  CHECK(fx["example1"]["fixed_point_count"] == 2);
  CHECK(fx["example1"]["zero_set"].size() == 4);
  CHECK(fx["example2"]["expression"] == "xor(tent,inverted_tent)");
  CHECK(fx["example2"]["full_branches"] == 4);
  CHECK(std::fabs(fx["example2"]["lyapunov"].get<double>() - std::log(4.0)) <=
        1e-12);
  CHECK(fx["prop_suite"]["maps"].size() == 4);
}

TEST_CASE("load_fixtures_file round-trips and rejects missing paths") {
  const auto fx = xe::default_fixtures();
  const std::string path = "test_fixtures_roundtrip.json";
  {
    std::ofstream out(path);
    out << fx.dump(2) << "\n";
  }
  const auto loaded = xe::load_fixtures_file(path);
  CHECK(loaded == fx);
  std::remove(path.c_str());
  CHECK_THROWS_AS((void)xe::load_fixtures_file("no_such_fixtures.json"),
                  std::exception);
}

TEST_CASE("example 1 reproduces every documented fact at the fixture r") {
  const auto report = xe::run_example1();
  CHECK(report.id == "example1");
  CHECK(report.pass);
  REQUIRE_FALSE(report.facts.empty());
  for (const auto& f : report.facts) {
    CAPTURE(f.name);
    CAPTURE(f.detail);
    CHECK_FALSE(f.skipped);
    CHECK(f.passed);
  }
  const auto* zero = find_fact(report, "zero_set");
  REQUIRE(zero != nullptr);
  CHECK(zero->passed);
  const auto* basin = find_fact(report, "stable_basin");
  REQUIRE(basin != nullptr);
  CHECK(basin->passed);

  const std::string text = xe::to_text(report);
  CHECK(text.find("example1: PASS") != std::string::npos);
  CHECK(xe::to_json(report)["id"] == "example1");
}

TEST_CASE("example 1 skips value-level facts away from the fixture r") {
  const auto report = xe::run_example1(4.0);
  CHECK(report.pass);  // the structure survives: two fixed points, one stable
  int skipped = 0;
  for (const auto& f : report.facts) skipped += f.skipped ? 1 : 0;
  CHECK(skipped == 4);
  const auto* stable = find_fact(report, "stable_point_exists");
  REQUIRE(stable != nullptr);
  CHECK(stable->passed);
  const auto* basin = find_fact(report, "stable_basin");
  REQUIRE(basin != nullptr);
  CHECK_FALSE(basin->skipped);
  CHECK(basin->passed);
  CHECK(xe::to_text(report).find("[skip]") != std::string::npos);
}

TEST_CASE("example 1 reports an honest failure when the structure breaks") {
  // At r = 0.5 both fixed points are unstable, so the stable-point fact and
  // the overall report fail.
  const auto report = xe::run_example1(0.5);
  CHECK_FALSE(report.pass);
  const auto* stable = find_fact(report, "stable_point_exists");
  REQUIRE(stable != nullptr);
  CHECK_FALSE(stable->skipped);
  CHECK_FALSE(stable->passed);
  const auto* count = find_fact(report, "fixed_point_count");
  REQUIRE(count != nullptr);
  CHECK(count->passed);
  const auto* basin = find_fact(report, "stable_basin");
  REQUIRE(basin != nullptr);
  CHECK(basin->skipped);
  const std::string text = xe::to_text(report);
  CHECK(text.find("example1: FAIL") != std::string::npos);
  CHECK(text.find("[FAIL]") != std::string::npos);
}

TEST_CASE("example 2 verifies the xor square end to end") {
  cd::DiagConfig config;
  config.seeds = 4;
  config.iterates = 50000;
  config.transient = 500;
  config.bins = 400;
  config.grid_n = 2000;
  config.max_period = 4;

  const auto report = xe::run_example2(xe::default_fixtures(), config);
  CHECK(report.id == "example2");
  CHECK(report.pass);
  for (const auto& name :
       {"verdict", "full_branches", "lyapunov_median", "coverage"}) {
    const auto* f = find_fact(report, name);
    REQUIRE_MESSAGE(f != nullptr, name);
    CAPTURE(f->detail);
    CHECK_FALSE(f->skipped);
    CHECK(f->passed);
  }
  CHECK(report.computed["expression"] == "xor(tent,inverted_tent)");
}

TEST_CASE("the xor table reports matches and honest mismatches") {
  const auto matrix = xe::run_xor_table(4.0, xe::default_fixtures(),
                                        table_config());
  REQUIRE(matrix.cells.size() == 10);
  const std::vector<std::string> expected_ids = {"doubling", "cubic",
                                                 "logistic", "tent",
                                                 "inverted_tent"};
  CHECK(matrix.ids == expected_ids);

  const auto* solid = find_cell(matrix, "tent", "inverted_tent");
  REQUIRE(solid != nullptr);
  CHECK(solid->verdict == cd::Verdict::Chaotic);
  CHECK(solid->expected == "Chaotic");
  CHECK(solid->match);

  const auto* flat = find_cell(matrix, "doubling", "tent");
  REQUIRE(flat != nullptr);
  CHECK(flat->verdict == cd::Verdict::NonChaotic);
  CHECK(flat->match);

  const auto* spike = find_cell(matrix, "logistic", "tent");
  REQUIRE(spike != nullptr);
  CHECK(spike->verdict == cd::Verdict::NonChaotic);
  CHECK(spike->match);

  // The cubic/inverted_tent combination genuinely behaves chaotically, so it
  // cannot match its expected verdict; the cell must say why.
  const auto* odd = find_cell(matrix, "cubic", "inverted_tent");
  REQUIRE(odd != nullptr);
  CHECK(odd->verdict == cd::Verdict::Chaotic);
  CHECK(odd->expected == "NonChaotic");
  CHECK_FALSE(odd->match);
  CHECK_FALSE(odd->note.empty());

  CHECK_FALSE(matrix.all_match);
  CHECK(matrix.match_count >= 3);
  CHECK(matrix.match_count < 10);

  const std::string text = xe::to_text(matrix);
  CHECK(text.find("matches: ") != std::string::npos);
  CHECK(text.find('*') != std::string::npos);

  const auto doc = xe::to_json(matrix);
  CHECK(doc["cells"].size() == 10);
  CHECK(doc["all_match"] == false);
}

TEST_CASE("the proposition suite passes for every full-branch catalog map") {
  const auto report = xe::run_prop_suite(xe::default_fixtures(),
                                         table_config());
  CHECK(report.id == "props");
  CHECK(report.pass);

  for (const auto& id : {"tent", "doubling", "cubic", "inverted_tent"}) {
    const auto* doubling_fact =
        find_fact(report, std::string(id) + ":branch_doubling");
    REQUIRE_MESSAGE(doubling_fact != nullptr, id);
    CAPTURE(doubling_fact->detail);
    CHECK(doubling_fact->passed);

    const auto* chaos_fact =
        find_fact(report, std::string(id) + ":xor_mirror_chaotic");
    REQUIRE_MESSAGE(chaos_fact != nullptr, id);
    CAPTURE(chaos_fact->detail);
    CHECK(chaos_fact->passed);
  }

  for (const auto& id : {"tent", "doubling", "inverted_tent"}) {
    const auto* zero_fact =
        find_fact(report, std::string(id) + ":distortion_zero");
    REQUIRE_MESSAGE(zero_fact != nullptr, id);
    CHECK_FALSE(zero_fact->skipped);
    CHECK(zero_fact->passed);
  }
  const auto* cubic_zero = find_fact(report, "cubic:distortion_zero");
  REQUIRE(cubic_zero != nullptr);
  CHECK(cubic_zero->skipped);
}
