#include "xormaps/fuzzy_combinators.hpp"

#include <algorithm>
#include <cmath>

namespace xormaps::fuzzy_combinators {

using map_core::Kind;
using map_core::LeafId;
using map_core::MapExpr;
using map_core::Node;

namespace {

// The PA algebra is written once, generically over the number type: exact
// rationals (authoritative) or doubles (fallback after rational overflow,
// with 1e-14 breakpoint dedup).

struct RationalOps {
  using N = Rational;
  static N from(std::int64_t n, std::int64_t d) { return {n, d}; }
  static bool eq(const N& a, const N& b) { return a == b; }
  static bool lt(const N& a, const N& b) { return a < b; }
  static int sign(const N& a) { return a.sign(); }
  static double dbl(const N& a) { return a.to_double(); }
};

struct DoubleOps {
  using N = double;
  static N from(std::int64_t n, std::int64_t d) {
    return static_cast<double>(n) / static_cast<double>(d);
  }
  static bool eq(N a, N b) { return std::abs(a - b) <= 1e-14; }
  static bool lt(N a, N b) { return a < b - 1e-14; }
  static int sign(N a) { return a > 1e-14 ? 1 : (a < -1e-14 ? -1 : 0); }
  static double dbl(N a) { return a; }
};

template <class Ops>
struct BasicPa {
  using N = typename Ops::N;
  std::vector<N> bps;
  std::vector<N> slopes;
  std::vector<N> intercepts;
  std::vector<N> jumps;
};

template <class Ops>
void sort_dedup(std::vector<typename Ops::N>& v) {
  std::sort(v.begin(), v.end(),
            [](const auto& a, const auto& b) { return Ops::lt(a, b); });
  v.erase(std::unique(v.begin(), v.end(),
                      [](const auto& a, const auto& b) { return Ops::eq(a, b); }),
          v.end());
}

// Index of the segment whose interval contains x (last segment closed).
template <class Ops>
std::size_t segment_at(const BasicPa<Ops>& pa, const typename Ops::N& x) {
  std::size_t i = 0;
  while (i + 1 < pa.slopes.size() && !Ops::lt(x, pa.bps[i + 1])) ++i;
  return i;
}

template <class Ops>
BasicPa<Ops> make_leaf(LeafId id) {
  using N = typename Ops::N;
  const N zero = Ops::from(0, 1);
  const N one = Ops::from(1, 1);
  const N half = Ops::from(1, 2);
  const N two = Ops::from(2, 1);
  BasicPa<Ops> pa;
  pa.bps = {zero, half, one};
  switch (id) {
    case LeafId::Tent:
      pa.slopes = {two, Ops::from(-2, 1)};
      pa.intercepts = {zero, two};
      break;
    case LeafId::InvertedTent:
      pa.slopes = {Ops::from(-2, 1), two};
      pa.intercepts = {one, Ops::from(-1, 1)};
      break;
    case LeafId::Doubling:
      pa.slopes = {two, two};
      pa.intercepts = {zero, Ops::from(-1, 1)};
      pa.jumps = {half, one};
      break;
    default:
      throw NotPiecewiseAffine("leaf has no exact piecewise-affine form");
  }
  return pa;
}

template <class Ops>
BasicPa<Ops> mirror_pa(const BasicPa<Ops>& a) {
  const auto one = Ops::from(1, 1);
  BasicPa<Ops> out = a;
  for (auto& s : out.slopes) s = -s;
  for (auto& i : out.intercepts) i = one - i;
  return out;
}

template <class Ops>
BasicPa<Ops> combine(const BasicPa<Ops>& a, const BasicPa<Ops>& b, Kind op) {
  using N = typename Ops::N;
  const N two = Ops::from(2, 1);

  std::vector<N> cuts = a.bps;
  cuts.insert(cuts.end(), b.bps.begin(), b.bps.end());
  sort_dedup<Ops>(cuts);

  // Refine with the roots of (f - g): an affine difference has at most one
  // root per merged segment.
  std::vector<N> roots;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    const N& u = cuts[j];
    const N& v = cuts[j + 1];
    const N mid = (u + v) / two;
    const std::size_t ia = segment_at(a, mid);
    const std::size_t ib = segment_at(b, mid);
    const N ds = a.slopes[ia] - b.slopes[ib];
    const N di = a.intercepts[ia] - b.intercepts[ib];
    if (Ops::sign(ds) != 0) {
      const N x = -di / ds;
      if (Ops::lt(u, x) && Ops::lt(x, v)) roots.push_back(x);
    }
  }
  cuts.insert(cuts.end(), roots.begin(), roots.end());
  sort_dedup<Ops>(cuts);

  BasicPa<Ops> out;
  out.bps = cuts;
  out.jumps = a.jumps;
  out.jumps.insert(out.jumps.end(), b.jumps.begin(), b.jumps.end());
  sort_dedup<Ops>(out.jumps);

  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    const N mid = (cuts[j] + cuts[j + 1]) / two;
    const std::size_t ia = segment_at(a, mid);
    const std::size_t ib = segment_at(b, mid);
    const N sa = a.slopes[ia], ia_ = a.intercepts[ia];
    const N sb = b.slopes[ib], ib_ = b.intercepts[ib];
    const N ds = sa - sb;
    const N di = ia_ - ib_;
    const int mid_sign = Ops::sign(ds * mid + di);
    switch (op) {
      case Kind::Xor:
        if (Ops::sign(ds) == 0 && Ops::sign(di) == 0) {
          // f = g on the whole segment: emit the zero segment directly.
          out.slopes.push_back(Ops::from(0, 1));
          out.intercepts.push_back(Ops::from(0, 1));
        } else if (mid_sign >= 0) {
          out.slopes.push_back(ds);
          out.intercepts.push_back(di);
        } else {
          out.slopes.push_back(-ds);
          out.intercepts.push_back(-di);
        }
        break;
      case Kind::And:
        if (mid_sign <= 0) {
          out.slopes.push_back(sa);
          out.intercepts.push_back(ia_);
        } else {
          out.slopes.push_back(sb);
          out.intercepts.push_back(ib_);
        }
        break;
      case Kind::Or:
        if (mid_sign >= 0) {
          out.slopes.push_back(sa);
          out.intercepts.push_back(ia_);
        } else {
          out.slopes.push_back(sb);
          out.intercepts.push_back(ib_);
        }
        break;
      default:
        throw std::logic_error("combine on non-combinator node");
    }
  }
  return out;
}

template <class Ops>
BasicPa<Ops> compose(const BasicPa<Ops>& outer, const BasicPa<Ops>& inner) {
  using N = typename Ops::N;
  const N two = Ops::from(2, 1);

  // Cut at the inner breakpoints plus the inner-preimages of the outer
  // breakpoints (and of the outer jump points, which stay discontinuities).
  std::vector<N> cuts = inner.bps;
  std::vector<N> extra_jumps;
  auto add_preimages = [&](const std::vector<N>& targets, bool as_jump) {
    for (std::size_t j = 0; j + 1 < inner.bps.size(); ++j) {
      const N& u = inner.bps[j];
      const N& v = inner.bps[j + 1];
      const N s = inner.slopes[j];
      if (Ops::sign(s) == 0) continue;
      for (const N& beta : targets) {
        const N x = (beta - inner.intercepts[j]) / s;
        if (Ops::lt(u, x) && Ops::lt(x, v)) {
          cuts.push_back(x);
          if (as_jump) extra_jumps.push_back(x);
        }
      }
    }
  };
  add_preimages(outer.bps, false);
  add_preimages(outer.jumps, true);
  sort_dedup<Ops>(cuts);

  BasicPa<Ops> out;
  out.bps = cuts;
  out.jumps = inner.jumps;
  out.jumps.insert(out.jumps.end(), extra_jumps.begin(), extra_jumps.end());
  sort_dedup<Ops>(out.jumps);

  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    const N mid = (cuts[j] + cuts[j + 1]) / two;
    const std::size_t ii = segment_at(inner, mid);
    const N si = inner.slopes[ii], ci = inner.intercepts[ii];
    const N y = si * mid + ci;
    const std::size_t io = segment_at(outer, y);
    const N so = outer.slopes[io], co = outer.intercepts[io];
    out.slopes.push_back(so * si);
    out.intercepts.push_back(so * ci + co);
  }
  return out;
}

template <class Ops>
BasicPa<Ops> convert(const Node& n) {
  switch (n.kind) {
    case Kind::Leaf:
      return make_leaf<Ops>(n.leaf);
    case Kind::Xor:
    case Kind::And:
    case Kind::Or:
      return combine(convert<Ops>(*n.left), convert<Ops>(*n.right), n.kind);
    case Kind::Mirror:
      return mirror_pa(convert<Ops>(*n.left));
    case Kind::Rescale:
      if (n.source.lo == 0.0 && n.source.hi == 1.0) {
        return convert<Ops>(*n.left);
      }
      throw NotPiecewiseAffine("rescale of a non-unit domain is not PA");
    case Kind::Custom:
      throw NotPiecewiseAffine("custom node has no piecewise-affine form");
  }
  throw std::logic_error("unreachable");
}

template <class Ops>
void check_unit_range(const BasicPa<Ops>& pa, bool exact) {
  using N = typename Ops::N;
  const N zero = Ops::from(0, 1);
  const N one = Ops::from(1, 1);
  for (std::size_t j = 0; j + 1 < pa.bps.size(); ++j) {
    for (const N& x : {pa.bps[j], pa.bps[j + 1]}) {
      const N v = pa.slopes[j] * x + pa.intercepts[j];
      const double d = Ops::dbl(v);
      const double tol = exact ? 0.0 : 1e-12;
      if (d < -tol || d > 1.0 + tol) {
        throw map_core::RangeViolation(
            "piecewise-affine segment escapes [0,1]");
      }
    }
  }
}

PiecewiseAffineMap finish_rational(const BasicPa<RationalOps>& pa) {
  check_unit_range(pa, /*exact=*/true);
  PiecewiseAffineMap out;
  out.exact = true;
  out.r_breakpoints = pa.bps;
  out.r_slopes = pa.slopes;
  out.r_intercepts = pa.intercepts;
  out.r_jump_points = pa.jumps;
  out.breakpoints.reserve(pa.bps.size());
  for (const auto& b : pa.bps) out.breakpoints.push_back(b.to_double());
  for (const auto& s : pa.slopes) out.slopes.push_back(s.to_double());
  for (const auto& i : pa.intercepts) out.intercepts.push_back(i.to_double());
  for (const auto& j : pa.jumps) out.jump_points.push_back(j.to_double());
  return out;
}

PiecewiseAffineMap finish_double(const BasicPa<DoubleOps>& pa) {
  check_unit_range(pa, /*exact=*/false);
  PiecewiseAffineMap out;
  out.exact = false;
  out.breakpoints = pa.bps;
  out.slopes = pa.slopes;
  out.intercepts = pa.intercepts;
  out.jump_points = pa.jumps;
  return out;
}

BasicPa<RationalOps> as_rational(const PiecewiseAffineMap& pa) {
  if (!pa.exact) throw RationalOverflow{};
  BasicPa<RationalOps> out;
  out.bps = pa.r_breakpoints;
  out.slopes = pa.r_slopes;
  out.intercepts = pa.r_intercepts;
  out.jumps = pa.r_jump_points;
  return out;
}

BasicPa<DoubleOps> as_double(const PiecewiseAffineMap& pa) {
  BasicPa<DoubleOps> out;
  out.bps = pa.breakpoints;
  out.slopes = pa.slopes;
  out.intercepts = pa.intercepts;
  out.jumps = pa.jump_points;
  return out;
}

}  // namespace

std::size_t PiecewiseAffineMap::segment_index(double x) const {
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  const std::size_t idx =
      static_cast<std::size_t>(std::distance(breakpoints.begin(), it));
  if (idx == 0) return 0;
  return std::min(idx - 1, slopes.size() - 1);
}

nlohmann::ordered_json PiecewiseAffineMap::to_json() const {
  nlohmann::ordered_json j;
  j["breakpoints"] = breakpoints;
  j["slopes"] = slopes;
  j["intercepts"] = intercepts;
  return j;
}

PiecewiseAffineMap PiecewiseAffineMap::from_json(const nlohmann::json& j) {
  PiecewiseAffineMap pa;
  pa.breakpoints = j.at("breakpoints").get<std::vector<double>>();
  pa.slopes = j.at("slopes").get<std::vector<double>>();
  pa.intercepts = j.at("intercepts").get<std::vector<double>>();
  if (pa.breakpoints.size() < 2 ||
      pa.slopes.size() + 1 != pa.breakpoints.size() ||
      pa.intercepts.size() != pa.slopes.size()) {
    throw std::invalid_argument("malformed piecewise-affine JSON");
  }
  if (!std::is_sorted(pa.breakpoints.begin(), pa.breakpoints.end())) {
    throw std::invalid_argument("piecewise-affine breakpoints not sorted");
  }
  return pa;
}

PiecewiseAffineMap to_piecewise_affine(const MapExpr& expr) {
  try {
    return finish_rational(convert<RationalOps>(expr.node()));
  } catch (const RationalOverflow&) {
    return finish_double(convert<DoubleOps>(expr.node()));
  }
}

double pa_eval(const PiecewiseAffineMap& pa, double x) {
  const std::size_t i = pa.segment_index(x);
  return pa.slopes[i] * x + pa.intercepts[i];
}

PiecewiseAffineMap pa_compose(const PiecewiseAffineMap& outer,
                              const PiecewiseAffineMap& inner) {
  if (outer.exact && inner.exact) {
    try {
      return finish_rational(compose(as_rational(outer), as_rational(inner)));
    } catch (const RationalOverflow&) {
      // fall through to the double route
    }
  }
  return finish_double(compose(as_double(outer), as_double(inner)));
}

SymmetryDefect symmetry_defect(const MapExpr& f, const MapExpr& g,
                               int grid_n) {
  if (grid_n < 2) {
    throw std::invalid_argument("symmetry_defect needs grid_n >= 2");
  }
  try {
    const PiecewiseAffineMap pf = to_piecewise_affine(f);
    const PiecewiseAffineMap pg = to_piecewise_affine(g);
    // h = f + g - 1 is affine between merged breakpoints, so |h| attains its
    // sup at (the closure of) segment endpoints.
    std::vector<double> cuts = pf.breakpoints;
    cuts.insert(cuts.end(), pg.breakpoints.begin(), pg.breakpoints.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    SymmetryDefect best;
    best.sup_defect = -1.0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      const double u = cuts[j], v = cuts[j + 1];
      const double mid = 0.5 * (u + v);
      const std::size_t fi = pf.segment_index(mid);
      const std::size_t gi = pg.segment_index(mid);
      const double s = pf.slopes[fi] + pg.slopes[gi];
      const double c = pf.intercepts[fi] + pg.intercepts[gi] - 1.0;
      for (double x : {u, v}) {
        const double d = std::abs(s * x + c);
        if (d > best.sup_defect + 1e-15) {
          best.sup_defect = d;
          best.argmax_x = x;
        }
      }
    }
    if (best.sup_defect < 0.0) best.sup_defect = 0.0;
    return best;
  } catch (const NotPiecewiseAffine&) {
    SymmetryDefect best;
    best.sup_defect = -1.0;
    for (int j = 0; j <= grid_n; ++j) {
      const double x = static_cast<double>(j) / grid_n;
      const double d = std::abs(map_core::eval(f, x) + map_core::eval(g, x) - 1.0);
      if (d > best.sup_defect + 1e-15) {
        best.sup_defect = d;
        best.argmax_x = x;
      }
    }
    return best;
  }
}

}  // namespace xormaps::fuzzy_combinators
