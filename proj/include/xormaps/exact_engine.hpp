#pragma once

#include <cstdint>

#include "xormaps/map_core.hpp"

namespace xormaps::chaos_diagnostics::detail {

// Fixed odd prime denominator for exact orbit arithmetic. It is a safe prime
// just above 2^61 for which 2 is a primitive root, so multiplication by ±2
// modulo kQ has multiplicative order kQ - 1 ≈ 2.3e18: integer orbits of the
// binary-slope catalog maps cannot fall onto short artificial cycles the way
// IEEE-double orbits do (doubles lose a low mantissa bit per slope-2 step and
// collapse onto exact fixed points within ~50 iterations).
inline constexpr std::int64_t kQ = 2305843009213701227LL;

// Exact orbit iterator for expressions whose leaves are all piecewise affine
// with dyadic breakpoints (tent, inverted_tent, doubling) combined by
// xor/and/or/mirror. States are rationals p/kQ held as integer numerators
// p in [0, kQ]; evaluation follows the same branch conventions as
// map_core::eval, and the per-step derivative is returned as an exact
// integer (kQ is odd, so orbit states never hit a dyadic breakpoint and the
// one-sided kink conventions are never exercised).
class ExactEngine {
 public:
  explicit ExactEngine(const map_core::MapExpr& expr) : root_(expr.ptr()) {}

  static bool eligible(const map_core::MapExpr& expr);

  struct Step {
    std::int64_t value;  // numerator of the image, in [0, kQ]
    std::int64_t deriv;  // exact derivative at the preimage
  };

  Step step(std::int64_t p) const;

  // Numerator nearest to u in [0,1], clamped into the open unit interval.
  static std::int64_t seed_numerator(double u);

  static double to_unit(std::int64_t p) {
    return static_cast<double>(p) / static_cast<double>(kQ);
  }

 private:
  map_core::NodePtr root_;
};

}  // namespace xormaps::chaos_diagnostics::detail
