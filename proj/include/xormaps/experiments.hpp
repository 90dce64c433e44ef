#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xormaps/chaos_diagnostics.hpp"

namespace xormaps::experiments {

// Expected outcomes are data, not code: the embedded fixtures document every
// value the reproduction suites compare against, and a file can override it.
nlohmann::json default_fixtures();
nlohmann::json load_fixtures_file(const std::string& path);

// ------------------------------------------------------------------- table

struct CellResult {
  std::string a;
  std::string b;
  chaos_diagnostics::Verdict verdict{chaos_diagnostics::Verdict::Inconclusive};
  std::string expected;
  bool match{false};
  std::optional<double> lyapunov_median;
  double coverage{0.0};
  std::string note;  // explanation for mismatching or Inconclusive cells
};

struct VerdictMatrix {
  std::vector<std::string> ids;  // catalog order, from the fixtures
  std::vector<CellResult> cells;  // the 10 unordered pairs, upper triangle
  int match_count{0};
  bool all_match{false};
};

// Diagnoses every unordered catalog pair at the given budgets and compares
// verdicts to the fixtures; Inconclusive counts as a mismatch.
VerdictMatrix run_xor_table(double logistic_r = 4.0,
                            const nlohmann::json& fixtures = default_fixtures(),
                            const chaos_diagnostics::DiagConfig& config = {});

// ---------------------------------------------------------------- examples

struct FactCheck {
  std::string name;
  bool passed{false};
  bool skipped{false};  // not applicable in this configuration
  std::string detail;
};

struct ExampleReport {
  std::string id;
  std::vector<FactCheck> facts;
  bool pass{false};  // every non-skipped fact passed
  nlohmann::ordered_json computed;  // machine-readable evidence
};

// Fixed-point / zero-set / basin structure of xor(logistic(r), tent). The
// value-level facts (multipliers, locations, zero set) apply at the fixture's
// r and are skipped for other parameters; structural facts always run.
ExampleReport run_example1(double r = 3.9,
                           const nlohmann::json& fixtures = default_fixtures(),
                           const chaos_diagnostics::DiagConfig& config = {});

// Full diagnostics of xor(tent, inverted_tent): Chaotic, 4 full branches,
// Lyapunov median near ln 4, coverage 1.
ExampleReport run_example2(const nlohmann::json& fixtures = default_fixtures(),
                           const chaos_diagnostics::DiagConfig& config = {});

// Mirror propositions: branch doubling k -> 2k for every full-branch catalog
// map, verdict Chaotic for xor(f, mirror(f)), exact zero distortion for the
// piecewise-affine cases.
ExampleReport run_prop_suite(const nlohmann::json& fixtures = default_fixtures(),
                             const chaos_diagnostics::DiagConfig& config = {});

// -------------------------------------------------------------- rendering

nlohmann::ordered_json to_json(const ExampleReport& report);
nlohmann::ordered_json to_json(const VerdictMatrix& matrix);
std::string to_text(const ExampleReport& report);
std::string to_text(const VerdictMatrix& matrix);

}  // namespace xormaps::experiments
