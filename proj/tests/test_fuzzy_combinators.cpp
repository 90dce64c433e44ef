#include <doctest.h>

#include <cmath>
#include <vector>

#include "xormaps/fuzzy_combinators.hpp"
#include "xormaps/map_core.hpp"

using namespace xormaps::fuzzy_combinators;
using xormaps::map_core::MapExpr;
using xormaps::map_core::parse_map_expr;

namespace {

PiecewiseAffineMap pa_of(const char* text) {
  return to_piecewise_affine(parse_map_expr(text));
}

}  // namespace

TEST_CASE("tent converts to its exact two-segment form") {
  const auto pa = pa_of("tent");
  REQUIRE(pa.breakpoints == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(pa.slopes == std::vector<double>{2.0, -2.0});
  CHECK(pa.intercepts == std::vector<double>{0.0, 2.0});
  CHECK(pa.exact);
  CHECK(pa.jump_points.empty());
}

TEST_CASE("the tent/inverted-tent xor has breakpoints at the exact quarters") {
  const auto pa = pa_of("xor(tent,inverted_tent)");
  REQUIRE(pa.breakpoints == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(pa.slopes == std::vector<double>{-4.0, 4.0, -4.0, 4.0});
  CHECK(pa.intercepts == std::vector<double>{1.0, -1.0, 3.0, -3.0});
  CHECK(pa.exact);

  // inverted_tent is mirror(tent); the two spellings agree segment-by-segment.
  const auto pa2 = pa_of("xor(tent,mirror(tent))");
  CHECK(pa2.breakpoints == pa.breakpoints);
  CHECK(pa2.slopes == pa.slopes);
  CHECK(pa2.intercepts == pa.intercepts);
}

TEST_CASE("doubling keeps its declared jumps through the conversion") {
  const auto pa = pa_of("doubling");
  REQUIRE(pa.breakpoints == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(pa.slopes == std::vector<double>{2.0, 2.0});
  CHECK(pa.intercepts == std::vector<double>{0.0, -1.0});
  REQUIRE(pa.jump_points.size() == 2);
  CHECK(pa.jump_points[0] == 0.5);
  CHECK(pa.jump_points[1] == 1.0);
  // The PA form follows its (closed) last segment at x = 1; the catalog map
  // uses the 2x mod 1 convention value 0 there. Everywhere else they agree.
  CHECK(pa_eval(pa, 1.0) == 1.0);
  CHECK(xormaps::map_core::eval(parse_map_expr("doubling"), 1.0) == 0.0);
}

TEST_CASE("pa_eval reproduces eval across the affine closure") {
  const char* exprs[] = {
      "tent",
      "inverted_tent",
      "doubling",
      "mirror(doubling)",
      "xor(tent,inverted_tent)",
      "and(tent,doubling)",
      "or(inverted_tent,doubling)",
      "xor(xor(tent,inverted_tent),doubling)",
      "and(mirror(tent),or(tent,inverted_tent))",
  };
  for (const char* text : exprs) {
    CAPTURE(text);
    const MapExpr expr = parse_map_expr(text);
    const auto pa = to_piecewise_affine(expr);
    for (int i = 0; i < 2000; ++i) {
      const double x = static_cast<double>(i) / 2000;
      CAPTURE(x);
      REQUIRE(pa_eval(pa, x) ==
              doctest::Approx(xormaps::map_core::eval(expr, x)).epsilon(1e-13));
    }
  }
}

TEST_CASE("non-affine leaves are rejected with NotPiecewiseAffine") {
  CHECK_THROWS_AS(pa_of("logistic(r=4)"), NotPiecewiseAffine);
  CHECK_THROWS_AS(pa_of("cubic"), NotPiecewiseAffine);
  CHECK_THROWS_AS(pa_of("xor(tent,cubic)"), NotPiecewiseAffine);
}

TEST_CASE("segment lookup is half-open with a closed last segment") {
  const auto pa = pa_of("tent");
  CHECK(pa.segment_count() == 2);
  CHECK(pa.segment_index(0.0) == 0);
  CHECK(pa.segment_index(0.49) == 0);
  CHECK(pa.segment_index(0.5) == 1);
  CHECK(pa.segment_index(1.0) == 1);
}

TEST_CASE("pa_compose matches pointwise composition") {
  const auto tent = pa_of("tent");
  const auto w = pa_of("xor(tent,inverted_tent)");
  const auto composed = pa_compose(w, tent);  // w(tent(x))
  const MapExpr tent_expr = parse_map_expr("tent");
  const MapExpr w_expr = parse_map_expr("xor(tent,inverted_tent)");
  for (int i = 0; i < 1000; ++i) {
    const double x = static_cast<double>(i) / 1000;
    const double direct = xormaps::map_core::eval(
        w_expr, xormaps::map_core::eval(tent_expr, x));
    CAPTURE(x);
    REQUIRE(pa_eval(composed, x) == doctest::Approx(direct).epsilon(1e-12));
  }
  // Slope magnitudes multiply: |±4| * |±2| = 8 on every segment.
  for (const double s : composed.slopes) CHECK(std::abs(s) == 8.0);
}

TEST_CASE("symmetry defect: exact zero for the mirror pair, 1/4 peak otherwise") {
  const auto zero = symmetry_defect(parse_map_expr("tent"),
                                    parse_map_expr("inverted_tent"));
  CHECK(zero.sup_defect == 0.0);

  // sup |4x(1-x) + |2x-1| - 1| peaks where 2x - 4x^2 does.
  const auto quarter = symmetry_defect(parse_map_expr("logistic(r=4)"),
                                       parse_map_expr("inverted_tent"));
  CHECK(quarter.sup_defect == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(quarter.argmax_x == doctest::Approx(0.25).epsilon(1e-6));

  const auto self = symmetry_defect(parse_map_expr("tent"),
                                    parse_map_expr("mirror(tent)"));
  CHECK(self.sup_defect == 0.0);
}

TEST_CASE("JSON round trip preserves the map") {
  const auto pa = pa_of("xor(tent,doubling)");
  const auto doc = pa.to_json();
  REQUIRE(doc.is_object());
  REQUIRE(doc.size() == 3);
  auto it = doc.begin();
  CHECK(it.key() == "breakpoints");
  CHECK((++it).key() == "slopes");
  CHECK((++it).key() == "intercepts");

  const auto back = PiecewiseAffineMap::from_json(doc);
  REQUIRE(back.breakpoints == pa.breakpoints);
  CHECK(back.slopes == pa.slopes);
  CHECK(back.intercepts == pa.intercepts);
  for (int i = 0; i <= 100; ++i) {
    const double x = static_cast<double>(i) / 100;
    CHECK(pa_eval(back, x) == pa_eval(pa, x));
  }
}
