#include "xormaps/branch_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace xormaps::branch_analysis {

using fuzzy_combinators::NotPiecewiseAffine;
using fuzzy_combinators::PiecewiseAffineMap;
using map_core::Interval;
using map_core::MapExpr;

namespace {

constexpr int kPartitionGrid = 10000;      // sign-sampling resolution
constexpr int kMaxSignChanges = 1000;      // oscillation rejection threshold
constexpr double kDerivZeroTol = 1e-12;    // |Df| below this counts as sign 0
constexpr double kBisectWidth = 1e-13;     // boundary refinement target
constexpr double kCriticalTol = 1e-15;     // vanishing-derivative flag (exact)
// Sampled branches end within kBisectWidth of a true critical point, so the
// smallest observable |Df| there is ~|D2f|*kBisectWidth, far above the exact
// tolerance; any sampled slope this small means the infimum over the branch
// is genuinely 0.
constexpr double kNumericCriticalTol = 1e-9;

int slope_sign(const PiecewiseAffineMap& pa, std::size_t seg) {
  if (pa.exact) return pa.r_slopes[seg].sign();
  const double s = pa.slopes[seg];
  return s > 1e-14 ? 1 : (s < -1e-14 ? -1 : 0);
}

bool is_jump_breakpoint(const PiecewiseAffineMap& pa, std::size_t bp_index) {
  const double b = pa.breakpoints[bp_index];
  for (double j : pa.jump_points) {
    if (std::abs(b - j) <= 1e-14) return true;
  }
  return false;
}

// Groups of consecutive PA segments with a common slope sign, cut at
// declared jump breakpoints. Returns (first segment, last segment, sign).
struct SegGroup {
  std::size_t first;
  std::size_t last;
  int sign;
};

std::vector<SegGroup> pa_groups(const PiecewiseAffineMap& pa) {
  std::vector<SegGroup> groups;
  const std::size_t m = pa.segment_count();
  std::size_t start = 0;
  int sign = slope_sign(pa, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    const bool boundary = i == m || slope_sign(pa, i) != sign ||
                          is_jump_breakpoint(pa, i);
    if (boundary) {
      groups.push_back({start, i - 1, sign});
      if (i < m) {
        start = i;
        sign = slope_sign(pa, i);
      }
    }
  }
  return groups;
}

std::vector<Interval> pa_partition(const PiecewiseAffineMap& pa) {
  std::vector<Interval> out;
  for (const SegGroup& g : pa_groups(pa)) {
    out.push_back({pa.breakpoints[g.first], pa.breakpoints[g.last + 1]});
  }
  return out;
}

int deriv_sign(const MapExpr& expr, double x) {
  const double d = map_core::derivative(expr, x);
  return d > kDerivZeroTol ? 1 : (d < -kDerivZeroTol ? -1 : 0);
}

// Interior point where the predicate "deriv sign == want" flips from true
// (at lo) to false (at hi).
double bisect_boundary(const MapExpr& expr, double lo, double hi, int want) {
  while (hi - lo > kBisectWidth) {
    const double mid = 0.5 * (lo + hi);
    if (deriv_sign(expr, mid) == want) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<Interval> numeric_partition(const MapExpr& expr) {
  const int n = kPartitionGrid;
  std::vector<int> sign(n + 1);
  for (int j = 0; j <= n; ++j) {
    sign[j] = deriv_sign(expr, static_cast<double>(j) / n);
  }

  std::vector<double> cuts;
  for (double j : map_core::jump_points(expr)) {
    if (j > 0.0 && j < 1.0) cuts.push_back(j);
  }

  // Flat runs (>= 2 consecutive zero signs) become their own cells; their
  // edges against non-flat regions are refined by bisection.
  std::vector<bool> in_flat(n + 1, false);
  for (int j = 0; j <= n;) {
    if (sign[j] == 0) {
      int k = j;
      while (k + 1 <= n && sign[k + 1] == 0) ++k;
      if (k > j) {
        for (int t = j; t <= k; ++t) in_flat[t] = true;
        if (j > 0) {
          cuts.push_back(bisect_boundary(expr, static_cast<double>(j - 1) / n,
                                         static_cast<double>(j) / n,
                                         sign[j - 1]));
        }
        if (k < n) {
          // Walk from the flat side toward the non-flat side.
          cuts.push_back(bisect_boundary(expr, static_cast<double>(k) / n,
                                         static_cast<double>(k + 1) / n, 0));
        }
      }
      j = k + 1;
    } else {
      ++j;
    }
  }

  // Transitions between opposite nonzero signs (isolated zeros in between
  // are the kink/critical points themselves).
  int changes = 0;
  int prev_idx = -1;
  for (int j = 0; j <= n; ++j) {
    if (sign[j] == 0 || in_flat[j]) continue;
    if (prev_idx >= 0 && sign[j] != sign[prev_idx]) {
      if (++changes > kMaxSignChanges) {
        throw TooOscillatory(
            "more than 1000 monotonicity changes; map rejected");
      }
      cuts.push_back(bisect_boundary(expr, static_cast<double>(prev_idx) / n,
                                     static_cast<double>(j) / n,
                                     sign[prev_idx]));
    }
    prev_idx = j;
  }

  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
             cuts.end());

  std::vector<Interval> out;
  double lo = 0.0;
  for (double c : cuts) {
    if (c > lo + 1e-12 && c < 1.0 - 1e-12) {
      out.push_back({lo, c});
      lo = c;
    }
  }
  out.push_back({lo, 1.0});
  return out;
}

bool near_jump(const MapExpr& expr, double x) {
  for (double j : map_core::jump_points(expr)) {
    if (std::abs(x - j) <= 1e-9) return true;
  }
  return false;
}

// Map value just left of x (for half-open branch ends at discontinuities).
double left_value(const MapExpr& expr, double x) {
  return map_core::eval(expr, std::max(0.0, x - 1e-12));
}

}  // namespace

std::vector<Interval> monotone_partition(const MapExpr& expr) {
  try {
    return pa_partition(fuzzy_combinators::to_piecewise_affine(expr));
  } catch (const NotPiecewiseAffine&) {
    return numeric_partition(expr);
  }
}

BranchDecomposition full_branch_decomposition(const MapExpr& expr,
                                              double tol_full) {
  BranchDecomposition out;
  std::optional<PiecewiseAffineMap> pa;
  try {
    pa = fuzzy_combinators::to_piecewise_affine(expr);
  } catch (const NotPiecewiseAffine&) {
    pa.reset();
  }

  if (pa) {
    out.exact = true;
    for (const SegGroup& g : pa_groups(*pa)) {
      Branch b;
      b.interval = {pa->breakpoints[g.first], pa->breakpoints[g.last + 1]};
      b.monotonicity = g.sign > 0   ? Monotonicity::Increasing
                       : g.sign < 0 ? Monotonicity::Decreasing
                                    : Monotonicity::Flat;
      if (pa->exact) {
        // Right value at the left end, left-limit at the right end; the
        // branch is monotone so these are its image extremes, exactly.
        const Rational va = pa->r_slopes[g.first] * pa->r_breakpoints[g.first] +
                            pa->r_intercepts[g.first];
        const Rational vb = pa->r_slopes[g.last] * pa->r_breakpoints[g.last + 1] +
                            pa->r_intercepts[g.last];
        const Rational lo = va < vb ? va : vb;
        const Rational hi = va < vb ? vb : va;
        b.image = {lo.to_double(), hi.to_double()};
        b.is_full = lo == Rational(0) && hi == Rational(1);
      } else {
        const double va =
            pa->slopes[g.first] * pa->breakpoints[g.first] + pa->intercepts[g.first];
        const double vb = pa->slopes[g.last] * pa->breakpoints[g.last + 1] +
                          pa->intercepts[g.last];
        b.image = {std::min(va, vb), std::max(va, vb)};
        b.is_full = b.image.lo <= tol_full && b.image.hi >= 1.0 - tol_full;
      }
      if (b.monotonicity == Monotonicity::Flat) b.is_full = false;
      out.full_count += b.is_full ? 1 : 0;
      out.branches.push_back(b);
    }
    return out;
  }

  for (const Interval& iv : numeric_partition(expr)) {
    Branch b;
    b.interval = iv;
    const double va = map_core::eval(expr, iv.lo);
    // The right end is a left-limit when it sits on a declared jump
    // (including doubling's x = 1 convention point).
    const double vb = near_jump(expr, iv.hi) ? left_value(expr, iv.hi)
                                             : map_core::eval(expr, iv.hi);
    b.image = {std::min(va, vb), std::max(va, vb)};
    const double dmid = map_core::derivative(expr, 0.5 * (iv.lo + iv.hi));
    b.monotonicity = dmid > kDerivZeroTol    ? Monotonicity::Increasing
                     : dmid < -kDerivZeroTol ? Monotonicity::Decreasing
                                             : Monotonicity::Flat;
    b.is_full = b.monotonicity != Monotonicity::Flat &&
                b.image.lo <= tol_full && b.image.hi >= 1.0 - tol_full;
    out.full_count += b.is_full ? 1 : 0;
    out.branches.push_back(b);
  }
  return out;
}

namespace {

DistortionEstimate distortion_of_pa(const PiecewiseAffineMap& pa, int order) {
  DistortionEstimate est;
  est.order = order;
  for (const SegGroup& g : pa_groups(pa)) {
    BranchDistortion d;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t s = g.first; s <= g.last; ++s) {
      const double a = std::abs(pa.slopes[s]);
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
    if (lo < kCriticalTol) {
      d.infinite = true;
      est.any_infinite = true;
    } else {
      d.value = (lo == hi) ? 0.0 : std::log(hi) - std::log(lo);
      est.sup = std::max(est.sup, d.value);
    }
    est.per_branch.push_back(d);
  }
  return est;
}

DistortionEstimate distortion_numeric(const MapExpr& expr,
                                      const std::vector<Interval>& cells,
                                      int order, int grid_n) {
  DistortionEstimate est;
  est.order = order;
  for (const Interval& iv : cells) {
    BranchDistortion d;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int j = 0; j < grid_n; ++j) {
      const double x =
          iv.lo + (iv.hi - iv.lo) * static_cast<double>(j) / (grid_n - 1);
      const double a = std::abs(map_core::derivative(expr, x));
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
    if (lo < kNumericCriticalTol) {
      d.infinite = true;
      est.any_infinite = true;
    } else {
      d.value = (lo == hi) ? 0.0 : std::log(hi) - std::log(lo);
      est.sup = std::max(est.sup, d.value);
    }
    est.per_branch.push_back(d);
  }
  return est;
}

}  // namespace

DistortionEstimate distortion_bound(const MapExpr& expr,
                                    const BranchDecomposition& decomposition,
                                    int n, int grid_n) {
  if (n != 1 && n != 2) {
    throw std::invalid_argument("distortion order must be 1 or 2");
  }
  std::optional<PiecewiseAffineMap> pa;
  try {
    pa = fuzzy_combinators::to_piecewise_affine(expr);
  } catch (const NotPiecewiseAffine&) {
    pa.reset();
  }

  if (pa) {
    if (n == 1) return distortion_of_pa(*pa, 1);
    return distortion_of_pa(fuzzy_combinators::pa_compose(*pa, *pa), 2);
  }

  if (n == 1) {
    std::vector<Interval> cells;
    cells.reserve(decomposition.branches.size());
    for (const Branch& b : decomposition.branches) cells.push_back(b.interval);
    return distortion_numeric(expr, cells, 1, grid_n);
  }

  // Second iterate as an opaque map; its own monotone cells refine the
  // first-order partition.
  const auto ptr = expr.ptr();
  MapExpr second = map_core::custom(
      "second-iterate",
      [ptr](double x) {
        const MapExpr e(ptr);
        return map_core::eval(e, map_core::eval(e, x));
      },
      [ptr](double x) {
        const MapExpr e(ptr);
        const double y = map_core::eval(e, x);
        return map_core::derivative(e, y) * map_core::derivative(e, x);
      });
  return distortion_numeric(second, numeric_partition(second), 2, grid_n);
}

BranchDoublingReport check_branch_doubling(const MapExpr& f, double tol_full) {
  BranchDoublingReport report;
  const BranchDecomposition base = full_branch_decomposition(f, tol_full);
  report.k = base.full_count;
  if (base.full_count != static_cast<int>(base.branches.size()) ||
      base.full_count == 0) {
    report.precondition_ok = false;
    report.passes = false;
    report.note = "map is not a full-branch map (" +
                  std::to_string(base.full_count) + " of " +
                  std::to_string(base.branches.size()) + " branches full)";
    return report;
  }
  const MapExpr doubled = map_core::xor_of(f, map_core::mirror(f));
  const BranchDecomposition combined =
      full_branch_decomposition(doubled, tol_full);
  report.xor_full_count = combined.full_count;
  report.passes = combined.full_count == 2 * base.full_count;
  report.note = std::to_string(base.full_count) + " -> " +
                std::to_string(combined.full_count) + " full branches";
  return report;
}

}  // namespace xormaps::branch_analysis
