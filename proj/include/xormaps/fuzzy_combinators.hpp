#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xormaps/map_core.hpp"
#include "xormaps/rational.hpp"

namespace xormaps::fuzzy_combinators {

// Expression contains a leaf without an exact piecewise-affine form
// (logistic, cubic, custom) — callers fall back to numeric analysis.
struct NotPiecewiseAffine : std::runtime_error {
  explicit NotPiecewiseAffine(const std::string& what)
      : std::runtime_error(what) {}
};

// Exact breakpoint/segment representation. Segment i is slope[i]*x +
// intercept[i] on [breakpoints[i], breakpoints[i+1]) — last segment closed.
// When `exact` is set, the rational mirrors are authoritative and the double
// vectors are their rounded images; otherwise only the doubles are valid.
struct PiecewiseAffineMap {
  std::vector<double> breakpoints;  // strictly increasing, first 0, last 1
  std::vector<double> slopes;
  std::vector<double> intercepts;

  bool exact{false};
  std::vector<Rational> r_breakpoints;
  std::vector<Rational> r_slopes;
  std::vector<Rational> r_intercepts;
  std::vector<Rational> r_jump_points;

  // Declared discontinuities (doubling's 1/2, and its x = 1 convention
  // point); continuity invariants are exempted exactly here.
  std::vector<double> jump_points;

  std::size_t segment_count() const { return slopes.size(); }

  // Index of the segment containing x (half-open, last closed).
  std::size_t segment_index(double x) const;

  nlohmann::ordered_json to_json() const;
  static PiecewiseAffineMap from_json(const nlohmann::json& j);
};

struct SymmetryDefect {
  double sup_defect{0.0};
  double argmax_x{0.0};
};

// Exact PA form of the whole tree; throws NotPiecewiseAffine when a leaf has
// no affine form. Uses exact rational arithmetic and falls back to floating
// point (1e-14 breakpoint dedup) on rational overflow.
PiecewiseAffineMap to_piecewise_affine(const map_core::MapExpr& expr);

double pa_eval(const PiecewiseAffineMap& pa, double x);

// Composition outer(inner(x)) as a PA map (exact when both inputs are).
PiecewiseAffineMap pa_compose(const PiecewiseAffineMap& outer,
                              const PiecewiseAffineMap& inner);

// sup over [0,1] of |f(x) + g(x) - 1|; exact per-segment extremes when both
// sides convert to PA, otherwise a (grid_n+1)-point sweep.
SymmetryDefect symmetry_defect(const map_core::MapExpr& f,
                               const map_core::MapExpr& g, int grid_n = 10000);

}  // namespace xormaps::fuzzy_combinators
