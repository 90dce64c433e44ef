#include "xormaps/experiments.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "xormaps/branch_analysis.hpp"
#include "xormaps/fixtures_data.hpp"
#include "xormaps/fuzzy_combinators.hpp"
#include "xormaps/map_core.hpp"

namespace xormaps::experiments {
namespace {

using chaos_diagnostics::DiagConfig;
using chaos_diagnostics::Stability;
using chaos_diagnostics::Verdict;
using map_core::MapExpr;

constexpr double kLocationTol = 1e-6;
constexpr double kMultiplierTol = 1e-6;
constexpr double kZeroTol = 1e-9;

MapExpr catalog_map(const std::string& id, double logistic_r) {
  if (id == "logistic") {
    return map_core::catalog_get(id, {{"r", logistic_r}});
  }
  return map_core::catalog_get(id);
}

FactCheck fact(std::string name, bool passed, std::string detail) {
  FactCheck f;
  f.name = std::move(name);
  f.passed = passed;
  f.detail = std::move(detail);
  return f;
}

FactCheck skipped_fact(std::string name, std::string why) {
  FactCheck f;
  f.name = std::move(name);
  f.skipped = true;
  f.detail = std::move(why);
  return f;
}

std::string num(double v) { return nlohmann::json(v).dump(); }

void finish(ExampleReport& report) {
  report.pass = true;
  for (const auto& f : report.facts) {
    if (!f.skipped && !f.passed) report.pass = false;
  }
}

nlohmann::ordered_json facts_json(const std::vector<FactCheck>& facts) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& f : facts) {
    arr.push_back(nlohmann::ordered_json{{"name", f.name},
                                         {"passed", f.passed},
                                         {"skipped", f.skipped},
                                         {"detail", f.detail}});
  }
  return arr;
}

}  // namespace

nlohmann::json default_fixtures() {
  return nlohmann::json::parse(detail::kDefaultFixturesJson);
}

nlohmann::json load_fixtures_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open fixtures file: " + path);
  }
  nlohmann::json j;
  in >> j;
  return j;
}

// --------------------------------------------------------------- example 1

ExampleReport run_example1(double r, const nlohmann::json& fixtures,
                           const DiagConfig& config) {
  const auto& fx = fixtures.at("example1");
  const double fixture_r = fx.at("r").get<double>();
  const bool at_fixture_r = std::abs(r - fixture_r) < 1e-12;

  const MapExpr h = map_core::xor_of(
      map_core::catalog_get("logistic", {{"r", r}}), map_core::catalog_get("tent"));

  ExampleReport report;
  report.id = "example1";

  const auto scan = chaos_diagnostics::find_fixed_points(h, config.grid_n, 1);
  const auto zeros = chaos_diagnostics::zero_set(h, config.grid_n);

  const int expected_count = fx.at("fixed_point_count").get<int>();
  report.facts.push_back(fact(
      "fixed_point_count",
      static_cast<int>(scan.points.size()) == expected_count,
      "found " + std::to_string(scan.points.size()) + ", expected " +
          std::to_string(expected_count)));

  const chaos_diagnostics::FixedPointInfo* origin = nullptr;
  const chaos_diagnostics::FixedPointInfo* stable = nullptr;
  for (const auto& fp : scan.points) {
    if (std::abs(fp.location - fx.at("unstable_location").get<double>()) <
        kLocationTol) {
      origin = &fp;
    }
    if (fp.stability == Stability::Stable) stable = &fp;
  }

  report.facts.push_back(fact(
      "origin_unstable",
      origin != nullptr && origin->stability == Stability::Unstable,
      origin ? "multiplier " + num(origin->multiplier)
             : "no fixed point at the expected unstable location"));
  report.facts.push_back(fact(
      "stable_point_exists", stable != nullptr,
      stable ? "at " + num(stable->location) : "no stable fixed point found"));

  if (at_fixture_r) {
    const double want_m0 = fx.at("unstable_multiplier").get<double>();
    report.facts.push_back(fact(
        "unstable_multiplier",
        origin != nullptr && std::abs(origin->multiplier - want_m0) <= kMultiplierTol,
        origin ? num(origin->multiplier) + " vs " + num(want_m0) : "missing point"));

    const double want_x = fx.at("stable_location").get<double>();
    const double want_m = fx.at("stable_multiplier").get<double>();
    report.facts.push_back(fact(
        "stable_location",
        stable != nullptr && std::abs(stable->location - want_x) <= kLocationTol,
        stable ? num(stable->location) + " vs " + num(want_x) : "missing point"));
    report.facts.push_back(fact(
        "stable_multiplier",
        stable != nullptr && std::abs(stable->multiplier - want_m) <= kMultiplierTol,
        stable ? num(stable->multiplier) + " vs " + num(want_m) : "missing point"));

    const auto want_zeros = fx.at("zero_set").get<std::vector<double>>();
    bool zeros_ok = !zeros.non_isolated &&
                    zeros.points.size() == want_zeros.size();
    if (zeros_ok) {
      for (std::size_t i = 0; i < want_zeros.size(); ++i) {
        zeros_ok = zeros_ok && std::abs(zeros.points[i] - want_zeros[i]) <= kZeroTol;
      }
    }
    report.facts.push_back(fact(
        "zero_set",
        zeros_ok,
        "found " + std::to_string(zeros.points.size()) + " zeros, expected " +
            std::to_string(want_zeros.size())));
  } else {
    const std::string why = "value-level fact pinned to r=" + num(fixture_r);
    report.facts.push_back(skipped_fact("unstable_multiplier", why));
    report.facts.push_back(skipped_fact("stable_location", why));
    report.facts.push_back(skipped_fact("stable_multiplier", why));
    report.facts.push_back(skipped_fact("zero_set", why));
  }

  std::optional<double> basin_fraction;
  if (stable != nullptr) {
    const auto basins = chaos_diagnostics::basin_map(
        h, {stable->location}, config.grid_n, config.basin_max_iter,
        config.basin_tol, config.threads);
    basin_fraction = basins.fractions.at(0);
    const double min_basin = fx.at("min_stable_basin").get<double>();
    report.facts.push_back(fact("stable_basin",
                                *basin_fraction >= min_basin,
                                num(*basin_fraction) + " vs minimum " +
                                    num(min_basin)));
  } else {
    report.facts.push_back(
        skipped_fact("stable_basin", "no stable fixed point to target"));
  }

  finish(report);

  auto points = nlohmann::ordered_json::array();
  for (const auto& fp : scan.points) {
    points.push_back(nlohmann::ordered_json{
        {"location", fp.location},
        {"multiplier", fp.multiplier},
        {"stability", chaos_diagnostics::to_string(fp.stability)}});
  }
  report.computed = nlohmann::ordered_json{
      {"expression", map_core::to_string(h)},
      {"r", r},
      {"fixed_points", std::move(points)},
      {"zero_set",
       nlohmann::ordered_json{{"points", zeros.points},
                              {"non_isolated", zeros.non_isolated}}},
      {"stable_basin",
       basin_fraction ? nlohmann::ordered_json(*basin_fraction)
                      : nlohmann::ordered_json(nullptr)}};
  return report;
}

// --------------------------------------------------------------- example 2

ExampleReport run_example2(const nlohmann::json& fixtures,
                           const DiagConfig& config) {
  const auto& fx = fixtures.at("example2");
  const MapExpr w = map_core::parse_map_expr(fx.at("expression").get<std::string>());

  ExampleReport report;
  report.id = "example2";

  const auto diag = chaos_diagnostics::run_diagnostics(w, config);

  const std::string want_verdict = fx.at("verdict").get<std::string>();
  report.facts.push_back(fact(
      "verdict", chaos_diagnostics::to_string(diag.verdict) == want_verdict,
      chaos_diagnostics::to_string(diag.verdict) + " vs " + want_verdict));

  const int want_branches = fx.at("full_branches").get<int>();
  report.facts.push_back(fact(
      "full_branches",
      diag.branches.full_count == want_branches &&
          static_cast<int>(diag.branches.branches.size()) == want_branches,
      std::to_string(diag.branches.full_count) + " full of " +
          std::to_string(diag.branches.branches.size()) + ", expected " +
          std::to_string(want_branches)));

  const double want_lambda = fx.at("lyapunov").get<double>();
  const double lambda_tol = fx.at("lyapunov_tolerance").get<double>();
  const bool lambda_ok = diag.lyapunov.median &&
                         std::abs(*diag.lyapunov.median - want_lambda) <= lambda_tol;
  report.facts.push_back(fact(
      "lyapunov_median", lambda_ok,
      (diag.lyapunov.median ? num(*diag.lyapunov.median) : std::string("null")) +
          " vs " + num(want_lambda) + " +/- " + num(lambda_tol)));

  const double want_coverage = fx.at("coverage").get<double>();
  report.facts.push_back(fact("coverage", diag.coverage == want_coverage,
                              num(diag.coverage) + " vs " + num(want_coverage)));

  finish(report);
  report.computed = chaos_diagnostics::report_to_json(diag);
  return report;
}

// ------------------------------------------------------------------- table

VerdictMatrix run_xor_table(double logistic_r, const nlohmann::json& fixtures,
                            const DiagConfig& config) {
  VerdictMatrix matrix;
  matrix.ids = fixtures.at("catalog_order").get<std::vector<std::string>>();
  const auto& expected = fixtures.at("table");

  for (std::size_t i = 0; i < matrix.ids.size(); ++i) {
    for (std::size_t k = i + 1; k < matrix.ids.size(); ++k) {
      CellResult cell;
      cell.a = matrix.ids[i];
      cell.b = matrix.ids[k];
      const MapExpr h = map_core::xor_of(catalog_map(cell.a, logistic_r),
                                         catalog_map(cell.b, logistic_r));
      const auto diag = chaos_diagnostics::run_diagnostics(h, config);
      cell.verdict = diag.verdict;
      cell.lyapunov_median = diag.lyapunov.median;
      cell.coverage = diag.coverage;
      cell.expected = expected.at(cell.a + "|" + cell.b).get<std::string>();
      cell.match = chaos_diagnostics::to_string(cell.verdict) == cell.expected;
      if (!cell.match || cell.verdict == Verdict::Inconclusive) {
        std::ostringstream note;
        note << "computed " << chaos_diagnostics::to_string(cell.verdict)
             << " (lyapunov median "
             << (cell.lyapunov_median ? num(*cell.lyapunov_median)
                                      : std::string("null"))
             << ", coverage " << num(cell.coverage) << "), expected "
             << cell.expected;
        cell.note = note.str();
      }
      if (cell.match) ++matrix.match_count;
      matrix.cells.push_back(std::move(cell));
    }
  }
  matrix.all_match = matrix.match_count == static_cast<int>(matrix.cells.size());
  return matrix;
}

// -------------------------------------------------------------- prop suite

ExampleReport run_prop_suite(const nlohmann::json& fixtures,
                             const DiagConfig& config) {
  const auto& fx = fixtures.at("prop_suite");
  const auto ids = fx.at("maps").get<std::vector<std::string>>();
  const auto& doubling_table = fx.at("branch_doubling");

  ExampleReport report;
  report.id = "props";
  auto computed = nlohmann::ordered_json::array();

  for (const auto& id : ids) {
    const MapExpr f = map_core::catalog_get(id);
    const auto want = doubling_table.at(id).get<std::vector<int>>();

    const auto doubling = branch_analysis::check_branch_doubling(f);
    report.facts.push_back(fact(
        id + ":branch_doubling",
        doubling.precondition_ok && doubling.passes && doubling.k == want.at(0) &&
            doubling.xor_full_count == want.at(1),
        std::to_string(doubling.k) + " -> " +
            std::to_string(doubling.xor_full_count) + ", expected " +
            std::to_string(want.at(0)) + " -> " + std::to_string(want.at(1))));

    const MapExpr h = map_core::xor_of(f, map_core::mirror(f));
    const auto diag = chaos_diagnostics::run_diagnostics(h, config);
    report.facts.push_back(fact(
        id + ":xor_mirror_chaotic", diag.verdict == Verdict::Chaotic,
        "verdict " + chaos_diagnostics::to_string(diag.verdict) +
            ", lyapunov median " +
            (diag.lyapunov.median ? num(*diag.lyapunov.median)
                                  : std::string("null")) +
            ", coverage " + num(diag.coverage)));

    bool pa_case = false;
    try {
      fuzzy_combinators::to_piecewise_affine(h);
      pa_case = true;
    } catch (const fuzzy_combinators::NotPiecewiseAffine&) {
      pa_case = false;
    }
    if (pa_case) {
      const bool zero_distortion =
          !diag.distortion_n1.any_infinite && diag.distortion_n1.sup == 0.0 &&
          !diag.distortion_n2.any_infinite && diag.distortion_n2.sup == 0.0;
      report.facts.push_back(fact(
          id + ":distortion_zero", zero_distortion,
          "sup n=1 " + num(diag.distortion_n1.sup) + ", n=2 " +
              num(diag.distortion_n2.sup)));
    } else {
      report.facts.push_back(skipped_fact(
          id + ":distortion_zero", "not piecewise affine; no exact-zero claim"));
    }

    computed.push_back(nlohmann::ordered_json{
        {"map", id},
        {"expression", map_core::to_string(h)},
        {"full_branches_before", doubling.k},
        {"full_branches_after", doubling.xor_full_count},
        {"verdict", chaos_diagnostics::to_string(diag.verdict)},
        {"lyapunov_median", diag.lyapunov.median
                                ? nlohmann::ordered_json(*diag.lyapunov.median)
                                : nlohmann::ordered_json(nullptr)},
        {"coverage", diag.coverage}});
  }

  finish(report);
  report.computed = nlohmann::ordered_json{{"maps", std::move(computed)}};
  return report;
}

// -------------------------------------------------------------- rendering

nlohmann::ordered_json to_json(const ExampleReport& report) {
  return nlohmann::ordered_json{{"id", report.id},
                                {"pass", report.pass},
                                {"facts", facts_json(report.facts)},
                                {"computed", report.computed}};
}

nlohmann::ordered_json to_json(const VerdictMatrix& matrix) {
  auto cells = nlohmann::ordered_json::array();
  for (const auto& cell : matrix.cells) {
    cells.push_back(nlohmann::ordered_json{
        {"a", cell.a},
        {"b", cell.b},
        {"verdict", chaos_diagnostics::to_string(cell.verdict)},
        {"expected", cell.expected},
        {"match", cell.match},
        {"lyapunov_median",
         cell.lyapunov_median ? nlohmann::ordered_json(*cell.lyapunov_median)
                              : nlohmann::ordered_json(nullptr)},
        {"coverage", cell.coverage},
        {"note", cell.note}});
  }
  return nlohmann::ordered_json{{"ids", matrix.ids},
                                {"cells", std::move(cells)},
                                {"match_count", matrix.match_count},
                                {"all_match", matrix.all_match}};
}

std::string to_text(const ExampleReport& report) {
  std::ostringstream out;
  out << report.id << ": " << (report.pass ? "PASS" : "FAIL") << "\n";
  for (const auto& f : report.facts) {
    out << "  [" << (f.skipped ? "skip" : (f.passed ? " ok " : "FAIL")) << "] "
        << f.name;
    if (!f.detail.empty()) out << " — " << f.detail;
    out << "\n";
  }
  return out.str();
}

std::string to_text(const VerdictMatrix& matrix) {
  const auto& ids = matrix.ids;
  auto cell_of = [&](const std::string& a,
                     const std::string& b) -> const CellResult* {
    for (const auto& c : matrix.cells) {
      if ((c.a == a && c.b == b) || (c.a == b && c.b == a)) return &c;
    }
    return nullptr;
  };
  std::size_t width = 12;
  for (const auto& id : ids) width = std::max(width, id.size() + 2);

  std::ostringstream out;
  auto pad = [&](const std::string& s) {
    out << s;
    for (std::size_t i = s.size(); i < width; ++i) out << ' ';
  };
  pad("");
  for (const auto& id : ids) pad(id);
  out << "\n";
  for (const auto& row : ids) {
    pad(row);
    for (const auto& col : ids) {
      if (row == col) {
        pad("-");
        continue;
      }
      const CellResult* c = cell_of(row, col);
      std::string text = chaos_diagnostics::to_string(c->verdict);
      if (!c->match) text += "*";
      pad(text);
    }
    out << "\n";
  }
  out << "matches: " << matrix.match_count << "/" << matrix.cells.size() << "\n";
  for (const auto& c : matrix.cells) {
    if (!c.note.empty()) {
      out << "  " << c.a << " xor " << c.b << ": " << c.note << "\n";
    }
  }
  return out.str();
}

}  // namespace xormaps::experiments
