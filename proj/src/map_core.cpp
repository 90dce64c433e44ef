#include "xormaps/map_core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

namespace xormaps::map_core {

namespace {

double clamp_unit(double v, const char* where) {
  if (v < 0.0) {
    if (v < -kClampTolerance) {
      throw RangeViolation(std::string(where) + " produced " +
                           nlohmann::json(v).dump() +
                           ", outside [0,1] beyond the clamp tolerance");
    }
    return 0.0;
  }
  if (v > 1.0) {
    if (v > 1.0 + kClampTolerance) {
      throw RangeViolation(std::string(where) + " produced " +
                           nlohmann::json(v).dump() +
                           ", outside [0,1] beyond the clamp tolerance");
    }
    return 1.0;
  }
  return v;
}

double leaf_eval(const Node& n, double x) {
  switch (n.leaf) {
    case LeafId::Logistic:
      return n.r * x * (1.0 - x);
    case LeafId::Tent:
      return std::min(2.0 * x, 2.0 - 2.0 * x);
    case LeafId::InvertedTent:
      return std::abs(2.0 * x - 1.0);
    case LeafId::Doubling:
      // Value at the discontinuity x = 1/2 comes from the right branch;
      // value at 1 is 0 by convention, keeping [0,1] invariant.
      if (x >= 1.0) return 0.0;
      return x < 0.5 ? 2.0 * x : 2.0 * x - 1.0;
    case LeafId::Cubic: {
      const double t = 4.0 * x - 3.0;
      return x * t * t;
    }
  }
  return 0.0;
}

double leaf_derivative(const Node& n, double x) {
  switch (n.leaf) {
    case LeafId::Logistic:
      return n.r - 2.0 * n.r * x;
    case LeafId::Tent:
      // Right derivative at the peak, left derivative at x = 1.
      return (x < 0.5) ? 2.0 : -2.0;
    case LeafId::InvertedTent:
      return (x < 0.5) ? -2.0 : 2.0;
    case LeafId::Doubling:
      return 2.0;
    case LeafId::Cubic:
      return (4.0 * x - 3.0) * (12.0 * x - 3.0);
  }
  return 0.0;
}

double finite_difference(const std::function<double(double)>& f, double x) {
  const double h = 1e-7;
  const double a = std::max(0.0, x - h);
  const double b = std::min(1.0, x + h);
  return (f(b) - f(a)) / (b - a);
}

double eval_node(const Node& n, double x);

double eval_node_raw(const Node& n, double x) {
  switch (n.kind) {
    case Kind::Leaf:
      return leaf_eval(n, x);
    case Kind::Xor:
      return std::abs(eval_node(*n.left, x) - eval_node(*n.right, x));
    case Kind::And:
      return std::min(eval_node(*n.left, x), eval_node(*n.right, x));
    case Kind::Or:
      return std::max(eval_node(*n.left, x), eval_node(*n.right, x));
    case Kind::Mirror:
      return 1.0 - eval_node(*n.left, x);
    case Kind::Rescale: {
      // Conjugate by the affine bijection phi: [a,b] -> [0,1]. The child is
      // a self-map of [a,b], so it is evaluated without the unit-range
      // contract; the Rescale node itself re-enters it.
      const double a = n.source.lo;
      const double w = n.source.hi - n.source.lo;
      const double t = a + x * w;
      const double y = n.left->kind == Kind::Custom && n.left->custom_eval
                           ? n.left->custom_eval(t)
                           : eval_node_raw(*n.left, t);
      return (y - a) / w;
    }
    case Kind::Custom:
      return n.custom_eval(x);
  }
  return 0.0;
}

double eval_node(const Node& n, double x) {
  return clamp_unit(eval_node_raw(n, x), "map expression");
}

double derivative_node(const Node& n, double x) {
  switch (n.kind) {
    case Kind::Leaf:
      return leaf_derivative(n, x);
    case Kind::Xor: {
      const double l = eval_node(*n.left, x);
      const double r = eval_node(*n.right, x);
      const double dl = derivative_node(*n.left, x);
      const double dr = derivative_node(*n.right, x);
      if (l > r) return dl - dr;
      if (l < r) return dr - dl;
      // Kink l = r: right derivative of |l - r|.
      return std::abs(dl - dr);
    }
    case Kind::And: {
      const double l = eval_node(*n.left, x);
      const double r = eval_node(*n.right, x);
      const double dl = derivative_node(*n.left, x);
      const double dr = derivative_node(*n.right, x);
      if (l < r) return dl;
      if (l > r) return dr;
      return std::min(dl, dr);  // right derivative of the min at a tie
    }
    case Kind::Or: {
      const double l = eval_node(*n.left, x);
      const double r = eval_node(*n.right, x);
      const double dl = derivative_node(*n.left, x);
      const double dr = derivative_node(*n.right, x);
      if (l > r) return dl;
      if (l < r) return dr;
      return std::max(dl, dr);
    }
    case Kind::Mirror:
      return -derivative_node(*n.left, x);
    case Kind::Rescale: {
      // Affine conjugation preserves the derivative.
      const double t = n.source.lo + x * (n.source.hi - n.source.lo);
      if (n.left->kind == Kind::Custom) {
        if (n.left->custom_deriv) return n.left->custom_deriv(t);
        return finite_difference(n.left->custom_eval, t);
      }
      return derivative_node(*n.left, t);
    }
    case Kind::Custom:
      if (n.custom_deriv) return n.custom_deriv(x);
      return finite_difference(n.custom_eval, x);
  }
  return 0.0;
}

const CatalogEntry* find_entry(const std::string& id) {
  for (const auto& e : catalog_entries()) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"logistic",
       LeafId::Logistic,
       {{"r", 0.0, 4.0, 4.0, /*min_exclusive=*/true}},
       2,
       false,
       "r*x*(1-x)"},
      {"tent", LeafId::Tent, {}, 2, true, "min(2x, 2-2x)"},
      {"inverted_tent", LeafId::InvertedTent, {}, 2, true, "|2x-1|"},
      {"doubling", LeafId::Doubling, {}, 2, true, "2x mod 1"},
      {"cubic", LeafId::Cubic, {}, 3, false, "x*(4x-3)^2"},
  };
  return entries;
}

MapExpr catalog_get(const std::string& id,
                    const std::map<std::string, double>& params) {
  const CatalogEntry* entry = find_entry(id);
  if (entry == nullptr) {
    throw EvalDomainError("unknown map name '" + id + "'");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::Leaf;
  node->leaf = entry->leaf;
  for (const auto& [name, value] : params) {
    const ParamSpec* spec = nullptr;
    for (const auto& p : entry->params) {
      if (p.name == name) spec = &p;
    }
    if (spec == nullptr) {
      throw EvalDomainError("map '" + id + "' has no parameter '" + name + "'");
    }
    const bool below = spec->min_exclusive ? value <= spec->min : value < spec->min;
    if (below || value > spec->max) {
      throw EvalDomainError("parameter '" + name + "' of '" + id +
                            "' out of range");
    }
    node->r = value;
  }
  if (params.empty()) {
    for (const auto& p : entry->params) node->r = p.def;
  }
  return MapExpr(std::move(node));
}

namespace {

MapExpr binary(Kind kind, const MapExpr& l, const MapExpr& r) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->left = l.ptr();
  node->right = r.ptr();
  return MapExpr(std::move(node));
}

}  // namespace

MapExpr xor_of(const MapExpr& l, const MapExpr& r) {
  return binary(Kind::Xor, l, r);
}
MapExpr and_of(const MapExpr& l, const MapExpr& r) {
  return binary(Kind::And, l, r);
}
MapExpr or_of(const MapExpr& l, const MapExpr& r) {
  return binary(Kind::Or, l, r);
}

MapExpr mirror(const MapExpr& child) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Mirror;
  node->left = child.ptr();
  return MapExpr(std::move(node));
}

MapExpr rescale(const MapExpr& child, const Interval& source) {
  if (!(source.lo < source.hi)) {
    throw EvalDomainError("rescale needs a nondegenerate source interval");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::Rescale;
  node->left = child.ptr();
  node->source = source;
  // Invariance check: the child must map [a,b] into [a,b].
  const int kProbes = 512;
  for (int i = 0; i <= kProbes; ++i) {
    const double t =
        source.lo + (source.hi - source.lo) * static_cast<double>(i) / kProbes;
    const double y = child.node().kind == Kind::Custom
                         ? child.node().custom_eval(t)
                         : eval_raw(child, t);
    if (y < source.lo - 1e-9 || y > source.hi + 1e-9) {
      throw RangeViolation("rescale child escapes its source interval at x=" +
                           nlohmann::json(t).dump());
    }
  }
  return MapExpr(std::move(node));
}

MapExpr custom(std::string name, std::function<double(double)> eval,
               std::function<double(double)> deriv) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Custom;
  node->custom_name = std::move(name);
  node->custom_eval = std::move(eval);
  node->custom_deriv = std::move(deriv);
  return MapExpr(std::move(node));
}

double eval(const MapExpr& expr, double x) {
  if (x < 0.0 || x > 1.0) {
    throw EvalDomainError("eval argument " + nlohmann::json(x).dump() +
                          " outside [0,1]");
  }
  return eval_node(expr.node(), x);
}

double eval_raw(const MapExpr& expr, double x) {
  return eval_node_raw(expr.node(), x);
}

double derivative(const MapExpr& expr, double x) {
  if (x < 0.0 || x > 1.0) {
    throw EvalDomainError("derivative argument outside [0,1]");
  }
  return derivative_node(expr.node(), x);
}

// -------------------------------------------------------------------- parse

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos{0};

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!consume(c)) {
      throw ParseError(std::string("expected '") + c + "' (" + what + ")", pos);
    }
  }

  std::string ident() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_')) {
      ++pos;
    }
    if (start == pos) throw ParseError("expected identifier", pos);
    return text.substr(start, pos - start);
  }

  double decimal() {
    skip_ws();
    const char* begin = text.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("expected decimal number", pos);
    pos += static_cast<std::size_t>(end - begin);
    return v;
  }

  MapExpr expr() {
    const std::size_t name_at = pos;
    const std::string name = ident();
    if (name == "xor" || name == "and" || name == "or") {
      expect('(', "combinator arguments");
      MapExpr l = expr();
      expect(',', "second combinator argument");
      MapExpr r = expr();
      expect(')', "closing combinator");
      if (name == "xor") return xor_of(l, r);
      if (name == "and") return and_of(l, r);
      return or_of(l, r);
    }
    if (name == "mirror") {
      expect('(', "mirror argument");
      MapExpr c = expr();
      expect(')', "closing mirror");
      return mirror(c);
    }
    // Leaf: name with optional parameter list.
    std::map<std::string, double> params;
    skip_ws();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      while (true) {
        const std::string pname = ident();
        expect('=', "parameter value");
        params[pname] = decimal();
        if (consume(')')) break;
        expect(',', "next parameter");
      }
    }
    try {
      return catalog_get(name, params);
    } catch (const EvalDomainError& e) {
      throw ParseError(e.what(), name_at);
    }
  }
};

void format_node(const Node& n, std::ostream& out) {
  switch (n.kind) {
    case Kind::Leaf:
      for (const auto& e : catalog_entries()) {
        if (e.leaf == n.leaf) {
          out << e.id;
          if (!e.params.empty()) {
            out << '(' << e.params[0].name << '='
                << nlohmann::json(n.r).dump() << ')';
          }
          return;
        }
      }
      return;
    case Kind::Xor:
    case Kind::And:
    case Kind::Or: {
      out << (n.kind == Kind::Xor ? "xor" : n.kind == Kind::And ? "and" : "or")
          << '(';
      format_node(*n.left, out);
      out << ',';
      format_node(*n.right, out);
      out << ')';
      return;
    }
    case Kind::Mirror:
      out << "mirror(";
      format_node(*n.left, out);
      out << ')';
      return;
    case Kind::Rescale:
      out << "rescale(";
      format_node(*n.left, out);
      out << ',' << nlohmann::json(n.source.lo).dump() << ','
          << nlohmann::json(n.source.hi).dump() << ')';
      return;
    case Kind::Custom:
      out << "custom:" << n.custom_name;
      return;
  }
}

void collect_jumps(const Node& n, std::vector<double>& out) {
  switch (n.kind) {
    case Kind::Leaf:
      if (n.leaf == LeafId::Doubling) {
        out.push_back(0.5);
        out.push_back(1.0);
      }
      return;
    case Kind::Xor:
    case Kind::And:
    case Kind::Or:
      collect_jumps(*n.left, out);
      collect_jumps(*n.right, out);
      return;
    case Kind::Mirror:
    case Kind::Rescale:
      collect_jumps(*n.left, out);
      return;
    case Kind::Custom:
      return;
  }
}

}  // namespace

MapExpr parse_map_expr(const std::string& text) {
  Parser p{text};
  MapExpr e = p.expr();
  p.skip_ws();
  if (p.pos != text.size()) {
    throw ParseError("unexpected trailing input", p.pos);
  }
  return e;
}

std::string to_string(const MapExpr& expr) {
  std::ostringstream out;
  format_node(expr.node(), out);
  return out.str();
}

std::vector<double> jump_points(const MapExpr& expr) {
  std::vector<double> out;
  collect_jumps(expr.node(), out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint64_t text_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a 64 offset basis
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;  // FNV prime
  }
  return h;
}

std::uint64_t expression_hash(const MapExpr& expr) {
  return text_hash(to_string(expr));
}

}  // namespace xormaps::map_core
