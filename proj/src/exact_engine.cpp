#include "xormaps/exact_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace xormaps::chaos_diagnostics::detail {

using map_core::Kind;
using map_core::LeafId;
using map_core::Node;

namespace {

struct IntStep {
  std::int64_t v;  // value numerator in [0, kQ]
  std::int64_t d;  // exact derivative
};

// All intermediates fit int64: values stay in [0, kQ] (2*kQ < 2^63 covers
// the transient 2p), derivatives are small sums of leaf slopes.
IntStep eval_int(const Node& n, std::int64_t p) {
  switch (n.kind) {
    case Kind::Leaf:
      switch (n.leaf) {
        case LeafId::Tent:
          return 2 * p < kQ ? IntStep{2 * p, 2} : IntStep{2 * (kQ - p), -2};
        case LeafId::InvertedTent:
          return 2 * p < kQ ? IntStep{kQ - 2 * p, -2} : IntStep{2 * p - kQ, 2};
        case LeafId::Doubling:
          if (p == kQ) return {0, 2};  // eval(1) = 0 convention
          return 2 * p < kQ ? IntStep{2 * p, 2} : IntStep{2 * p - kQ, 2};
        default:
          std::abort();  // guarded by eligible()
      }
    case Kind::Xor: {
      const IntStep l = eval_int(*n.left, p);
      const IntStep r = eval_int(*n.right, p);
      if (l.v > r.v) return {l.v - r.v, l.d - r.d};
      if (l.v < r.v) return {r.v - l.v, r.d - l.d};
      return {0, std::abs(l.d - r.d)};
    }
    case Kind::And: {
      const IntStep l = eval_int(*n.left, p);
      const IntStep r = eval_int(*n.right, p);
      if (l.v < r.v) return l;
      if (l.v > r.v) return r;
      return {l.v, std::min(l.d, r.d)};
    }
    case Kind::Or: {
      const IntStep l = eval_int(*n.left, p);
      const IntStep r = eval_int(*n.right, p);
      if (l.v > r.v) return l;
      if (l.v < r.v) return r;
      return {l.v, std::max(l.d, r.d)};
    }
    case Kind::Mirror: {
      const IntStep c = eval_int(*n.left, p);
      return {kQ - c.v, -c.d};
    }
    default:
      std::abort();
  }
}

bool node_eligible(const Node& n) {
  switch (n.kind) {
    case Kind::Leaf:
      return n.leaf == LeafId::Tent || n.leaf == LeafId::InvertedTent ||
             n.leaf == LeafId::Doubling;
    case Kind::Xor:
    case Kind::And:
    case Kind::Or:
      return node_eligible(*n.left) && node_eligible(*n.right);
    case Kind::Mirror:
      return node_eligible(*n.left);
    default:
      return false;
  }
}

}  // namespace

bool ExactEngine::eligible(const map_core::MapExpr& expr) {
  return expr.valid() && node_eligible(expr.node());
}

ExactEngine::Step ExactEngine::step(std::int64_t p) const {
  const IntStep s = eval_int(*root_, p);
  return {s.v, s.d};
}

std::int64_t ExactEngine::seed_numerator(double u) {
  const double scaled = u * static_cast<double>(kQ);
  std::int64_t p = static_cast<std::int64_t>(std::llround(scaled));
  if (p < 1) p = 1;
  if (p > kQ - 1) p = kQ - 1;
  return p;
}

}  // namespace xormaps::chaos_diagnostics::detail
