#include <doctest.h>

#include <cmath>
#include <random>

#include "xormaps/map_core.hpp"

using namespace xormaps::map_core;

namespace {

MapExpr logistic(double r) { return catalog_get("logistic", {{"r", r}}); }
MapExpr get(const char* id) { return catalog_get(id); }

}  // namespace

TEST_CASE("catalog leaves evaluate per their definitions") {
  const MapExpr tent = get("tent");
  CHECK(eval(tent, 0.0) == 0.0);
  CHECK(eval(tent, 0.25) == 0.5);
  CHECK(eval(tent, 0.5) == 1.0);
  CHECK(eval(tent, 0.75) == 0.5);
  CHECK(eval(tent, 1.0) == 0.0);

  const MapExpr itent = get("inverted_tent");
  CHECK(eval(itent, 0.0) == 1.0);
  CHECK(eval(itent, 0.25) == 0.5);
  CHECK(eval(itent, 0.5) == 0.0);
  CHECK(eval(itent, 1.0) == 1.0);

  const MapExpr doubling = get("doubling");
  CHECK(eval(doubling, 0.25) == 0.5);
  CHECK(eval(doubling, 0.5) == 0.0);   // right-branch value at the jump
  CHECK(eval(doubling, 0.75) == 0.5);
  CHECK(eval(doubling, 1.0) == 0.0);   // convention point

  const MapExpr cubic = get("cubic");
  CHECK(eval(cubic, 0.0) == 0.0);
  CHECK(eval(cubic, 0.25) == 1.0);   // x*(4x-3)^2 = 0.25 * 4
  CHECK(eval(cubic, 0.75) == 0.0);
  CHECK(eval(cubic, 1.0) == 1.0);

  CHECK(eval(logistic(4.0), 0.5) == 1.0);
  CHECK(eval(logistic(4.0), 0.25) == 0.75);
  CHECK(eval(logistic(2.0), 0.5) == 0.5);
}

TEST_CASE("combinators implement |f-g|, min, max, 1-f pointwise") {
  const MapExpr f = get("tent");
  const MapExpr g = get("doubling");
  const MapExpr h_xor = xor_of(f, g);
  const MapExpr h_and = and_of(f, g);
  const MapExpr h_or = or_of(f, g);
  const MapExpr h_mirror = mirror(f);
  for (int i = 0; i <= 64; ++i) {
    const double x = static_cast<double>(i) / 64;
    const double fv = eval(f, x);
    const double gv = eval(g, x);
    CAPTURE(x);
    CHECK(eval(h_xor, x) == std::abs(fv - gv));
    CHECK(eval(h_and, x) == std::min(fv, gv));
    CHECK(eval(h_or, x) == std::max(fv, gv));
    CHECK(eval(h_mirror, x) == 1.0 - fv);
  }
}

TEST_CASE("logistic-tent composite has its known fixed point") {
  // Solve |r x(1-x) - 2x| = x on the left half: (r-2)x - r x^2 = x
  // => x = (r-3)/r at r = 3.9: x = 0.9/3.9.
  const MapExpr h = xor_of(logistic(3.9), get("tent"));
  const double x_star = 0.9 / 3.9;
  CHECK(eval(h, x_star) == doctest::Approx(x_star).epsilon(1e-14));
}

TEST_CASE("derivative: chain rule, one-sided and tie conventions") {
  const MapExpr tent = get("tent");
  CHECK(derivative(tent, 0.25) == 2.0);
  CHECK(derivative(tent, 0.75) == -2.0);
  CHECK(derivative(tent, 0.5) == -2.0);  // right derivative at the peak
  CHECK(derivative(tent, 1.0) == -2.0);  // left derivative at x = 1

  CHECK(derivative(get("inverted_tent"), 0.25) == -2.0);
  CHECK(derivative(get("doubling"), 0.75) == 2.0);
  CHECK(derivative(get("cubic"), 0.5) == doctest::Approx(-3.0));  // (4x-3)(12x-3)
  CHECK(derivative(logistic(4.0), 0.25) == 2.0);

  // Xor at a value tie: right derivative of |l - r| is |l' - r'|.
  const MapExpr h = xor_of(logistic(3.9), tent);
  CHECK(derivative(h, 0.0) == doctest::Approx(1.9).epsilon(1e-14));

  // And/Or value ties take min/max of the one-sided slopes.
  const MapExpr a = and_of(tent, get("inverted_tent"));
  const MapExpr o = or_of(tent, get("inverted_tent"));
  // At x = 0.25 both sides equal 0.5; slopes are 2 and -2.
  CHECK(derivative(a, 0.25) == -2.0);
  CHECK(derivative(o, 0.25) == 2.0);

  // Mirror flips the sign.
  CHECK(derivative(mirror(tent), 0.25) == -2.0);

  // Away from ties the derivative follows the active branch.
  CHECK(derivative(h, 0.1) == doctest::Approx(3.9 - 7.8 * 0.1 - 2.0));
}

TEST_CASE("derivative matches finite differences on smooth composites") {
  const MapExpr h = xor_of(logistic(3.7), get("cubic"));
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(0.01, 0.99);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const double x = dist(gen);
    const double fd =
        (eval(h, x + 1e-7) - eval(h, x - 1e-7)) / 2e-7;
    const double d = derivative(h, x);
    // Skip the kinks of |f-g| where the finite difference straddles a corner.
    if (std::abs(eval(h, x)) < 1e-3) continue;
    ++checked;
    CAPTURE(x);
    CHECK(d == doctest::Approx(fd).epsilon(1e-4));
  }
  CHECK(checked > 150);
}

TEST_CASE("eval enforces the domain and range contracts") {
  const MapExpr tent = get("tent");
  CHECK_THROWS_AS(eval(tent, -0.1), EvalDomainError);
  CHECK_THROWS_AS(eval(tent, 1.5), EvalDomainError);
  CHECK_THROWS_AS(derivative(tent, 2.0), EvalDomainError);

  // A custom node violating the unit range trips RangeViolation...
  const MapExpr bad = custom("bad", [](double) { return 2.0; });
  CHECK_THROWS_AS(eval(bad, 0.5), RangeViolation);
  // ...while sub-tolerance overshoots clamp silently.
  const MapExpr fuzzy = custom("fuzzy", [](double) { return 1.0 + 1e-13; });
  CHECK(eval(fuzzy, 0.5) == 1.0);
}

TEST_CASE("catalog parameters are validated") {
  CHECK_THROWS_AS(catalog_get("nope"), EvalDomainError);
  CHECK_THROWS_AS(logistic(0.0), EvalDomainError);   // r > 0 strictly
  CHECK_THROWS_AS(logistic(4.5), EvalDomainError);
  CHECK_THROWS_AS(catalog_get("logistic", {{"q", 1.0}}), EvalDomainError);
  CHECK_THROWS_AS(catalog_get("tent", {{"r", 1.0}}), EvalDomainError);
  CHECK(eval(logistic(0.5), 0.5) == 0.125);
  // Default parameter.
  CHECK(eval(catalog_get("logistic"), 0.5) == 1.0);
}

TEST_CASE("catalog listing is ordered and annotated") {
  const auto& entries = catalog_entries();
  REQUIRE(entries.size() == 5);
  CHECK(entries[0].id == "logistic");
  CHECK(entries[1].id == "tent");
  CHECK(entries[2].id == "inverted_tent");
  CHECK(entries[3].id == "doubling");
  CHECK(entries[4].id == "cubic");
  CHECK(entries[0].full_branches == 2);
  CHECK(entries[4].full_branches == 3);
  CHECK(entries[1].has_exact_pa);
  CHECK_FALSE(entries[0].has_exact_pa);
  REQUIRE(entries[0].params.size() == 1);
  CHECK(entries[0].params[0].name == "r");
  CHECK(entries[0].params[0].def == 4.0);
  CHECK(entries[0].params[0].min_exclusive);
}

TEST_CASE("parser: grammar, canonical text and round trips") {
  const MapExpr h = parse_map_expr("xor(logistic(r=3.9), tent)");
  REQUIRE(h.node().kind == Kind::Xor);
  CHECK(h.node().left->kind == Kind::Leaf);
  CHECK(h.node().left->leaf == LeafId::Logistic);
  CHECK(h.node().left->r == 3.9);
  CHECK(h.node().right->leaf == LeafId::Tent);
  CHECK(to_string(h) == "xor(logistic(r=3.9),tent)");

  // to_string . parse is the identity on canonical text.
  const char* samples[] = {
      "tent",
      "logistic(r=3.9)",
      "xor(tent,inverted_tent)",
      "and(or(tent,doubling),mirror(cubic))",
      "mirror(xor(logistic(r=4.0),cubic))",
  };
  for (const char* s : samples) {
    CAPTURE(s);
    CHECK(to_string(parse_map_expr(s)) == s);
  }

  // Whitespace-insensitive.
  CHECK(to_string(parse_map_expr("  xor( tent ,\tmirror( tent ) ) ")) ==
        "xor(tent,mirror(tent))");
}

TEST_CASE("parser rejects malformed input with a position") {
  const auto offset_of = [](const char* text) -> std::size_t {
    try {
      parse_map_expr(text);
    } catch (const ParseError& e) {
      return e.offset;
    }
    const std::string message = std::string("expected ParseError for ") + text;
    FAIL(message);
    return static_cast<std::size_t>(-1);
  };

  CHECK(offset_of("xor(tent") == 8);            // missing ','
  CHECK(offset_of("xor(tent,doubling") == 17);  // missing ')'
  CHECK(offset_of("frob") == 0);                // unknown leaf, named at start
  CHECK(offset_of("xor(tent,frob)") == 9);
  CHECK(offset_of("tent tent") == 5);           // trailing input
  CHECK(offset_of("logistic(r=9)") == 0);       // out-of-range parameter
  CHECK(offset_of("logistic(q=2)") == 0);       // unknown parameter
  CHECK(offset_of("") == 0);

  // The what() text carries the offset too.
  try {
    parse_map_expr("xor(tent");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("at offset 8") != std::string::npos);
  }
}

TEST_CASE("rescale conjugates a self-map of [a,b] onto the unit interval") {
  // g(t) = 2 + (t-2)^2 maps [1,3] into [2,3] ⊂ [1,3].
  const MapExpr g = custom(
      "shifted-parabola", [](double t) { return 2.0 + (t - 2.0) * (t - 2.0); },
      [](double t) { return 2.0 * (t - 2.0); });
  const MapExpr h = rescale(g, Interval{1.0, 3.0});
  // h(x) = (g(1+2x) - 1) / 2.
  CHECK(eval(h, 0.0) == doctest::Approx(1.0));
  CHECK(eval(h, 0.5) == doctest::Approx(0.5));
  CHECK(eval(h, 1.0) == doctest::Approx(1.0));
  // Affine conjugation preserves slopes: h'(x) = g'(1+2x).
  CHECK(derivative(h, 0.75) == doctest::Approx(1.0));

  // A child escaping its own interval is rejected.
  const MapExpr runaway = custom("runaway", [](double t) { return t + 1.0; });
  CHECK_THROWS_AS(rescale(runaway, Interval{0.0, 0.5}), RangeViolation);
  CHECK_THROWS_AS(rescale(g, Interval{3.0, 1.0}), EvalDomainError);
}

TEST_CASE("jump points: doubling contributes 1/2 and the x=1 convention") {
  CHECK(jump_points(get("tent")).empty());
  const auto jd = jump_points(get("doubling"));
  REQUIRE(jd.size() == 2);
  CHECK(jd[0] == 0.5);
  CHECK(jd[1] == 1.0);
  // De-duplicated across the tree.
  const auto jx = jump_points(xor_of(get("doubling"), mirror(get("doubling"))));
  CHECK(jx == jd);
}

TEST_CASE("hashing is deterministic and text-canonical") {
  CHECK(text_hash("") == 0xcbf29ce484222325ull);  // FNV-1a offset basis
  CHECK(text_hash("a") != text_hash("b"));
  const MapExpr a = parse_map_expr("xor( tent , doubling )");
  const MapExpr b = parse_map_expr("xor(tent,doubling)");
  CHECK(expression_hash(a) == expression_hash(b));
  CHECK(expression_hash(a) == text_hash("xor(tent,doubling)"));
}
