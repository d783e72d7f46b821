#pragma once

// Scalar fields over chart coordinates, as immutable expression trees.
//
// Grammar (whitespace between tokens is ignored):
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-'? atom ('^' integer)?
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//
// Unary minus binds tighter than '^', so "-x^2" is (-x)^2. A minus sign applied
// directly to a bare number literal yields a negative constant.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pqgeom {

enum class NodeKind { constant, coordinate, add, sub, mul, div, neg, power, function };

enum class UnaryFn { exp, log, sin, cos, sinh, cosh, tanh, sqrt };

std::string_view function_name(UnaryFn fn);

class ScalarExpr {
public:
    struct Node;

    /// The constant 0.
    ScalarExpr();

    static ScalarExpr constant(double value);
    static ScalarExpr coordinate(std::size_t index);
    static ScalarExpr power(ScalarExpr base, int exponent);
    static ScalarExpr apply(UnaryFn fn, ScalarExpr operand);

    friend ScalarExpr operator+(ScalarExpr a, ScalarExpr b);
    friend ScalarExpr operator-(ScalarExpr a, ScalarExpr b);
    friend ScalarExpr operator*(ScalarExpr a, ScalarExpr b);
    friend ScalarExpr operator/(ScalarExpr a, ScalarExpr b);
    friend ScalarExpr operator-(ScalarExpr a);

    NodeKind kind() const noexcept;
    double value() const noexcept;          // constant
    std::size_t index() const noexcept;     // coordinate
    int exponent() const noexcept;          // power
    UnaryFn function() const noexcept;      // function
    ScalarExpr lhs() const;                 // binary nodes; also the operand of neg/power/function
    ScalarExpr rhs() const;                 // binary nodes

    bool is_constant() const noexcept;      // no coordinate anywhere below
    bool is_zero() const noexcept;          // literally the constant 0
    /// One past the largest coordinate index referenced (0 when constant).
    std::size_t coordinate_bound() const noexcept;
    std::size_t depth() const noexcept;

    const Node& node() const noexcept { return *node_; }

    /// Structural equality; constants compare with ==.
    friend bool operator==(const ScalarExpr& a, const ScalarExpr& b);

private:
    explicit ScalarExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct ScalarExpr::Node {
    NodeKind kind = NodeKind::constant;
    double value = 0.0;
    std::size_t index = 0;
    int exponent = 0;
    UnaryFn fn = UnaryFn::exp;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
    std::size_t bound = 0;
    std::size_t depth = 1;
};

/// Validates a coordinate-name list: non-empty, unique, [a-zA-Z][a-zA-Z0-9_]*, not a function name.
void validate_coordinate_names(std::span<const std::string> coords);

ScalarExpr parse_expr(std::string_view text, std::span<const std::string> coords);

/// Fully parenthesized infix text that re-parses to a structurally identical tree.
std::string serialize_expr(const ScalarExpr& e, std::span<const std::string> coords);

/// Shortest decimal text that round-trips the double.
std::string format_number(double v);

/// Plain evaluation. Throws EvalError at poles.
double evaluate(const ScalarExpr& e, std::span<const double> point);

} // namespace pqgeom
