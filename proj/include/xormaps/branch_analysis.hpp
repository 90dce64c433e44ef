#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "xormaps/fuzzy_combinators.hpp"
#include "xormaps/map_core.hpp"

namespace xormaps::branch_analysis {

// Rejected: more than the supported number of monotonicity changes.
struct TooOscillatory : std::runtime_error {
  explicit TooOscillatory(const std::string& what) : std::runtime_error(what) {}
};

enum class Monotonicity { Increasing, Decreasing, Flat };

struct Branch {
  map_core::Interval interval;
  Monotonicity monotonicity{Monotonicity::Increasing};
  map_core::Interval image;
  bool is_full{false};
};

struct BranchDecomposition {
  std::vector<Branch> branches;
  int full_count{0};
  bool exact{false};  // produced by the exact PA route
};

struct BranchDistortion {
  double value{0.0};
  bool infinite{false};  // derivative vanished inside the branch
};

struct DistortionEstimate {
  std::vector<BranchDistortion> per_branch;
  double sup{0.0};
  bool any_infinite{false};
  int order{1};  // n in {1, 2}
};

struct BranchDoublingReport {
  int k{0};               // full branches of f
  int xor_full_count{0};  // full branches of xor(f, mirror(f))
  bool passes{false};
  bool precondition_ok{true};  // f was a full-branch map
  std::string note;
};

inline constexpr double kDefaultTolFull = 1e-9;

// Maximal intervals of constant derivative sign; exact from breakpoints and
// slope signs on the PA route, bisection-refined sign sampling otherwise.
// Declared jump points always cut.
std::vector<map_core::Interval> monotone_partition(const map_core::MapExpr& expr);

// Branch images from the monotone extremes; is_full iff the image covers
// [tol_full, 1 - tol_full] (exact on the PA route, tolerance ignored there).
BranchDecomposition full_branch_decomposition(const map_core::MapExpr& expr,
                                              double tol_full = kDefaultTolFull);

// Per-branch sup of log|Df(x)/Df(y)| = log(max|Df|) - log(min|Df|); n = 2
// uses the second iterate on its refined partition. A vanishing derivative
// inside a branch flags that branch's distortion as infinite.
DistortionEstimate distortion_bound(const map_core::MapExpr& expr,
                                    const BranchDecomposition& decomposition,
                                    int n, int grid_n = 1024);

// Builds xor(f, mirror(f)) and asserts it has exactly twice f's full-branch
// count. A non-full-branch f yields a precondition-violation report.
BranchDoublingReport check_branch_doubling(const map_core::MapExpr& f,
                                           double tol_full = kDefaultTolFull);

}  // namespace xormaps::branch_analysis
