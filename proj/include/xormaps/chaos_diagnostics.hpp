#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xormaps/branch_analysis.hpp"
#include "xormaps/map_core.hpp"

namespace xormaps::chaos_diagnostics {

// ------------------------------------------------------------------- orbits

struct Orbit {
  double seed{0.0};
  std::uint64_t transient{0};
  std::vector<double> points;
};

// Post-transient orbit under the exact double recurrence
// points[i+1] = eval(map, points[i]).
Orbit iterate_orbit(const map_core::MapExpr& map, double seed, std::uint64_t n,
                    std::uint64_t transient);

// ------------------------------------------------------------ fixed points

enum class Stability { Stable, Unstable, Marginal };

struct FixedPointInfo {
  double location{0.0};
  double multiplier{0.0};  // |d/dx map^period| along the cycle
  Stability stability{Stability::Marginal};
  int period{1};
  std::optional<double> basin_fraction;  // filled for stable points in reports
};

struct FixedPointScan {
  std::vector<FixedPointInfo> points;
  bool truncated{false};  // more than the root-count cap was present
};

// Sign changes of map^period - x on a (grid_n+1)-point grid, refined by
// bisection to 1e-12, plus tangential touches (local minima of |F^p - x|
// below 1e-10). Points of lower period are filtered when period > 1.
FixedPointScan find_fixed_points(const map_core::MapExpr& map, int grid_n,
                                 int period);

// --------------------------------------------------------------- zero set

struct ZeroSetResult {
  std::vector<double> points;
  bool non_isolated{false};  // the zero set contains a whole interval
};

// Roots of eval(map, x) = 0 (crossings of f = g when the top node is an
// Xor), bisection-refined to 1e-12.
ZeroSetResult zero_set(const map_core::MapExpr& map, int grid_n);

// ------------------------------------------------------------------ basins

struct BasinResult {
  std::vector<double> fractions;        // per target, resolved fraction
  double unresolved{0.0};               // fraction not classified
  std::vector<std::int32_t> cells;      // per grid seed: target index or -1
};

// Iterates each of (grid_n+1) uniformly spaced seeds up to max_iter steps;
// a seed classifies to the first target it approaches within tol and holds
// for 10 consecutive iterates.
BasinResult basin_map(const map_core::MapExpr& map,
                      const std::vector<double>& targets, int grid_n,
                      int max_iter, double tol, int threads = 0);

// -------------------------------------------------------------- indicators

struct LyapunovSeed {
  double seed{0.0};
  double value{0.0};
  std::uint64_t skipped{0};
  bool reliable{true};  // skipped <= 1% of iterates
};

struct LyapunovSummary {
  std::optional<double> median;  // across reliable seeds; null if none
  double iqr{0.0};
  std::vector<LyapunovSeed> per_seed;
};

// Per seed, (1/n) sum of log|derivative| along the post-transient orbit,
// skipping iterates with |derivative| < 1e-15. Exact integer orbits are used
// for binary-slope piecewise-affine expressions (see exact_engine.hpp).
LyapunovSummary lyapunov(const map_core::MapExpr& map,
                         const std::vector<double>& seeds, std::uint64_t n,
                         std::uint64_t transient = 0, int threads = 0);

// Fraction of `bins` uniform cells visited by at least one post-transient
// orbit point, maximized over seeds.
double coverage(const map_core::MapExpr& map, const std::vector<double>& seeds,
                std::uint64_t n, int bins, std::uint64_t transient = 0,
                int threads = 0);

// Normalized occupation frequencies pooled over seeds; sums to 1.
std::vector<double> invariant_histogram(const map_core::MapExpr& map,
                                        const std::vector<double>& seeds,
                                        std::uint64_t n, int bins,
                                        std::uint64_t transient = 0,
                                        int threads = 0);

struct SensitivityEstimate {
  double delta0{1e-8};
  int steps{200};
  double threshold{0.1};
  double fraction_exceeding{0.0};  // seeds whose separation ever passes 0.1
};

SensitivityEstimate sensitivity_estimate(const map_core::MapExpr& map,
                                         const std::vector<double>& seeds,
                                         double delta0, int steps);

// ----------------------------------------------------------------- verdict

enum class Verdict { Chaotic, NonChaotic, Inconclusive };

std::string to_string(Verdict v);
std::string to_string(Stability s);

// All decision constants in one record (CLI-overridable).
struct VerdictThresholds {
  double lyapunov_chaotic{0.05};
  double lyapunov_nonchaotic{-0.05};
  double coverage_min{0.98};
  double basin_min{0.9};
  // Orbit collapsed onto a point/short cycle: not transitive.
  double coverage_collapse{0.02};
  // Positive exponent but the orbit stays inside a proper subinterval:
  // expanding yet not transitive on [0,1].
  double coverage_confined{0.9};
};

// ------------------------------------------------------------ full report

struct DiagConfig {
  std::uint64_t base_seed{1};
  int seeds{32};
  std::uint64_t iterates{1000000};
  std::uint64_t transient{1000};
  int bins{1000};
  int grid_n{10000};
  VerdictThresholds thresholds;
  int threads{0};  // 0 = hardware; excluded from serialized reports
  double sensitivity_delta0{1e-8};
  int sensitivity_steps{200};
  int max_period{8};            // stable-orbit veto horizon
  int basin_max_iter{10000};
  double basin_tol{1e-6};
};

struct DiagnosticsReport {
  std::string expression;
  DiagConfig config;
  LyapunovSummary lyapunov;
  SensitivityEstimate sensitivity;
  double coverage{0.0};
  std::vector<FixedPointInfo> fixed_points;  // periods 1..max_period
  bool fixed_points_truncated{false};
  ZeroSetResult zero_set;
  std::vector<double> histogram;
  branch_analysis::BranchDecomposition branches;
  branch_analysis::DistortionEstimate distortion_n1;
  branch_analysis::DistortionEstimate distortion_n2;
  Verdict verdict{Verdict::Inconclusive};
  std::optional<bool> fixtures_match;  // null outside reproduction runs
};

// The published decision rule; pure in the report fields.
Verdict verdict(const DiagnosticsReport& report);

// Runs every indicator with the given budgets and assembles the report.
// Deterministic: identical config (including base_seed) produces an
// identical report regardless of `threads`.
DiagnosticsReport run_diagnostics(const map_core::MapExpr& map,
                                  const DiagConfig& config);

// Seed list derived from the base seed by the documented splitmix64 policy.
std::vector<double> derive_seeds(std::uint64_t base_seed, int count);

// JSON form (fixed key order; excludes execution-environment knobs).
nlohmann::ordered_json report_to_json(const DiagnosticsReport& report);

}  // namespace xormaps::chaos_diagnostics
