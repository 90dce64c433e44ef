#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace xormaps::map_core {

// ----------------------------------------------------------------- Interval

struct Interval {
  double lo{0.0};
  double hi{1.0};

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// ------------------------------------------------------------------- errors

struct EvalDomainError : std::domain_error {
  explicit EvalDomainError(const std::string& what) : std::domain_error(what) {}
};

// A value escaped [0,1] by more than the rounding clamp tolerance — means a
// broken map definition, not floating noise.
struct RangeViolation : std::runtime_error {
  explicit RangeViolation(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& message, std::size_t offset)
      : std::runtime_error(message + " at offset " + std::to_string(offset)),
        offset(offset) {}
  std::size_t offset;
};

inline constexpr double kClampTolerance = 1e-12;

// ------------------------------------------------------------------ MapExpr

enum class Kind { Leaf, Xor, And, Or, Mirror, Rescale, Custom };

enum class LeafId { Logistic, Tent, InvertedTent, Doubling, Cubic };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Kind kind{Kind::Leaf};

  // Leaf payload.
  LeafId leaf{LeafId::Tent};
  double r{4.0};  // logistic parameter; ignored by other leaves

  // Children (right empty for unary nodes).
  NodePtr left;
  NodePtr right;

  // Rescale payload: the child's native domain.
  Interval source{0.0, 1.0};

  // Custom payload: an opaque map, used for rescaling arbitrary functions
  // and for internal composite maps. Not producible by the text grammar.
  std::string custom_name;
  std::function<double(double)> custom_eval;
  std::function<double(double)> custom_deriv;  // may be empty
};

// Immutable expression tree over the catalog and the fuzzy combinators.
class MapExpr {
 public:
  MapExpr() = default;
  explicit MapExpr(NodePtr node) : node_(std::move(node)) {}

  const Node& node() const { return *node_; }
  const NodePtr& ptr() const { return node_; }
  bool valid() const { return node_ != nullptr; }

 private:
  NodePtr node_;
};

// ------------------------------------------------------------ construction

MapExpr catalog_get(const std::string& id,
                    const std::map<std::string, double>& params = {});

MapExpr xor_of(const MapExpr& left, const MapExpr& right);
MapExpr and_of(const MapExpr& left, const MapExpr& right);
MapExpr or_of(const MapExpr& left, const MapExpr& right);
MapExpr mirror(const MapExpr& child);

// Conjugates a self-map of [source.lo, source.hi] onto [0,1].
MapExpr rescale(const MapExpr& child, const Interval& source);

// Wraps an arbitrary function as an expression node (not parseable, used for
// rescale inputs and internal composites). `deriv` may be null; central
// finite differences are used then.
MapExpr custom(std::string name, std::function<double(double)> eval,
               std::function<double(double)> deriv = nullptr);

// ------------------------------------------------------------------ catalog

struct ParamSpec {
  std::string name;
  double min;
  double max;
  double def;
  bool min_exclusive{false};
};

struct CatalogEntry {
  std::string id;
  LeafId leaf;
  std::vector<ParamSpec> params;
  int full_branches;  // nominal full-branch count k on default parameters
  bool has_exact_pa;
  std::string description;
};

const std::vector<CatalogEntry>& catalog_entries();

// ---------------------------------------------------------------- semantics

// Evaluates the tree at x in [0,1]; every node's value is range-checked
// against [0,1] (clamp up to kClampTolerance, error beyond).
double eval(const MapExpr& expr, double x);

// Chain-rule derivative; one-sided right derivative at kinks (left at x=1).
double derivative(const MapExpr& expr, double x);

// Raw evaluation without the [0,1] range contract (used by Rescale children
// whose native domain is not [0,1]).
double eval_raw(const MapExpr& expr, double x);

// ------------------------------------------------------------------ parsing

// Grammar (whitespace-insensitive):
//   expr  := leaf | "xor(" expr "," expr ")" | "and(" expr "," expr ")"
//          | "or(" expr "," expr ")" | "mirror(" expr ")"
//   leaf  := name | name "(" param ("," param)* ")"
//   param := ident "=" decimal
//   name  := "logistic" | "tent" | "inverted_tent" | "doubling" | "cubic"
MapExpr parse_map_expr(const std::string& text);

// Canonical text form; parse(to_string(e)) reproduces e for grammar trees.
std::string to_string(const MapExpr& expr);

// Declared discontinuities of the expression inside (0,1) plus the x = 1
// convention point where applicable (doubling leaves contribute both).
std::vector<double> jump_points(const MapExpr& expr);

// FNV-1a 64-bit hash (report file naming).
std::uint64_t text_hash(const std::string& text);
std::uint64_t expression_hash(const MapExpr& expr);

}  // namespace xormaps::map_core
