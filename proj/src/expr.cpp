#include "pqgeom/expr.hpp"

#include "pqgeom/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace pqgeom {

namespace {

constexpr std::array<std::pair<std::string_view, UnaryFn>, 8> kFunctions{{
    {"exp", UnaryFn::exp},
    {"log", UnaryFn::log},
    {"sin", UnaryFn::sin},
    {"cos", UnaryFn::cos},
    {"sinh", UnaryFn::sinh},
    {"cosh", UnaryFn::cosh},
    {"tanh", UnaryFn::tanh},
    {"sqrt", UnaryFn::sqrt},
}};

using NodePtr = std::shared_ptr<const ScalarExpr::Node>;

NodePtr make_node(ScalarExpr::Node n)
{
    n.bound = std::max(n.a ? n.a->bound : 0, n.b ? n.b->bound : 0);
    n.depth = 1 + std::max(n.a ? n.a->depth : 0, n.b ? n.b->depth : 0);
    if (n.kind == NodeKind::coordinate) {
        n.bound = n.index + 1;
    }
    return std::make_shared<const ScalarExpr::Node>(std::move(n));
}

const NodePtr& zero_node()
{
    static const NodePtr zero = make_node({});
    return zero;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

bool lookup_function(std::string_view name, UnaryFn& out)
{
    for (const auto& [n, fn] : kFunctions) {
        if (n == name) {
            out = fn;
            return true;
        }
    }
    return false;
}

class Parser {
public:
    Parser(std::string_view text, std::span<const std::string> coords) : text_(text), coords_(coords) {}

    ScalarExpr run()
    {
        ScalarExpr e = expr();
        skip_ws();
        if (pos_ != text_.size()) {
            throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        }
        return e;
    }

private:
    std::string_view text_;
    std::span<const std::string> coords_;
    std::size_t pos_ = 0;

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
    }

    char peek()
    {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    void expect(char c)
    {
        if (peek() != c) {
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
        ++pos_;
    }

    ScalarExpr expr()
    {
        ScalarExpr lhs = term();
        for (;;) {
            const char c = peek();
            if (c == '+') {
                ++pos_;
                lhs = lhs + term();
            } else if (c == '-') {
                ++pos_;
                lhs = lhs - term();
            } else {
                return lhs;
            }
        }
    }

    ScalarExpr term()
    {
        ScalarExpr lhs = factor();
        for (;;) {
            const char c = peek();
            if (c == '*') {
                ++pos_;
                lhs = lhs * factor();
            } else if (c == '/') {
                ++pos_;
                lhs = lhs / factor();
            } else {
                return lhs;
            }
        }
    }

    ScalarExpr factor()
    {
        bool negate = false;
        if (peek() == '-') {
            ++pos_;
            negate = true;
        }
        bool bare_number = false;
        ScalarExpr base = atom(bare_number);
        if (negate) {
            base = bare_number ? ScalarExpr::constant(-base.value()) : -base;
        }
        if (peek() == '^') {
            ++pos_;
            base = ScalarExpr::power(std::move(base), integer());
        }
        return base;
    }

    int integer()
    {
        skip_ws();
        const std::size_t start = pos_;
        std::size_t p = pos_;
        if (p < text_.size() && text_[p] == '-') {
            ++p;
        }
        if (p >= text_.size() || std::isdigit(static_cast<unsigned char>(text_[p])) == 0) {
            throw ParseError("expected integer exponent", start);
        }
        int value = 0;
        auto [end, ec] = std::from_chars(text_.data() + start, text_.data() + text_.size(), value);
        if (ec != std::errc{}) {
            throw ParseError("integer exponent out of range", start);
        }
        pos_ = static_cast<std::size_t>(end - text_.data());
        if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
            throw ParseError("exponent must be an integer literal", start);
        }
        return value;
    }

    ScalarExpr number()
    {
        const std::size_t start = pos_;
        std::size_t p = pos_;
        auto digits = [&] {
            const std::size_t s = p;
            while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p])) != 0) {
                ++p;
            }
            return p - s;
        };
        std::size_t n = digits();
        if (p < text_.size() && text_[p] == '.') {
            ++p;
            n += digits();
        }
        if (n == 0) {
            throw ParseError("malformed number", start);
        }
        if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
            ++p;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) {
                ++p;
            }
            if (digits() == 0) {
                throw ParseError("malformed exponent in number", start);
            }
        }
        double value = 0.0;
        auto [end, ec] = std::from_chars(text_.data() + start, text_.data() + p, value);
        if (ec != std::errc{} || end != text_.data() + p || !std::isfinite(value)) {
            throw ParseError("number out of range", start);
        }
        pos_ = p;
        return ScalarExpr::constant(value);
    }

    ScalarExpr atom(bool& bare_number)
    {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            ScalarExpr inner = expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.') {
            bare_number = true;
            return number();
        }
        if (is_ident_start(c)) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
                ++pos_;
            }
            const std::string_view name = text_.substr(start, pos_ - start);
            if (peek() == '(') {
                UnaryFn fn{};
                if (!lookup_function(name, fn)) {
                    throw ParseError("unknown function '" + std::string(name) + "'", start);
                }
                ++pos_;
                ScalarExpr arg = expr();
                expect(')');
                return ScalarExpr::apply(fn, std::move(arg));
            }
            for (std::size_t i = 0; i < coords_.size(); ++i) {
                if (coords_[i] == name) {
                    return ScalarExpr::coordinate(i);
                }
            }
            throw ParseError("unknown identifier '" + std::string(name) + "'", start);
        }
        if (c == '\0') {
            throw ParseError("unexpected end of input", pos_);
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }
};

void serialize(const ScalarExpr::Node& n, std::span<const std::string> coords, std::string& out);

// Operand of unary minus or base of a power: must re-parse as a single atom
// without being folded into a negative literal.
void serialize_atom(const ScalarExpr::Node& n, std::span<const std::string> coords, std::string& out)
{
    if (n.kind == NodeKind::constant && !std::signbit(n.value)) {
        out += '(';
        out += format_number(n.value);
        out += ')';
        return;
    }
    serialize(n, coords, out);
}

void serialize(const ScalarExpr::Node& n, std::span<const std::string> coords, std::string& out)
{
    auto binary = [&](char op) {
        out += '(';
        serialize(*n.a, coords, out);
        out += op;
        serialize(*n.b, coords, out);
        out += ')';
    };
    switch (n.kind) {
    case NodeKind::constant:
        if (std::signbit(n.value)) {
            out += "(-";
            out += format_number(-n.value);
            out += ')';
        } else {
            out += format_number(n.value);
        }
        return;
    case NodeKind::coordinate:
        out += n.index < coords.size() ? coords[n.index] : "x" + std::to_string(n.index + 1);
        return;
    case NodeKind::add: binary('+'); return;
    case NodeKind::sub: binary('-'); return;
    case NodeKind::mul: binary('*'); return;
    case NodeKind::div: binary('/'); return;
    case NodeKind::neg:
        out += "(-";
        serialize_atom(*n.a, coords, out);
        out += ')';
        return;
    case NodeKind::power:
        out += '(';
        serialize_atom(*n.a, coords, out);
        out += '^';
        out += std::to_string(n.exponent);
        out += ')';
        return;
    case NodeKind::function:
        out += function_name(n.fn);
        out += '(';
        serialize(*n.a, coords, out);
        out += ')';
        return;
    }
}

[[noreturn]] void pole(const ScalarExpr::Node& n, std::string_view why, std::span<const double> point)
{
    std::ostringstream os;
    os << why << " in node ";
    std::string text;
    serialize(n, {}, text);
    os << text << " at point (";
    for (std::size_t i = 0; i < point.size(); ++i) {
        os << (i ? ", " : "") << format_number(point[i]);
    }
    os << ")";
    throw EvalError(os.str());
}

double eval(const ScalarExpr::Node& n, std::span<const double> p)
{
    switch (n.kind) {
    case NodeKind::constant: return n.value;
    case NodeKind::coordinate: return p[n.index];
    case NodeKind::add: return eval(*n.a, p) + eval(*n.b, p);
    case NodeKind::sub: return eval(*n.a, p) - eval(*n.b, p);
    case NodeKind::mul: return eval(*n.a, p) * eval(*n.b, p);
    case NodeKind::div: {
        const double den = eval(*n.b, p);
        if (den == 0.0) {
            pole(n, "division by zero", p);
        }
        return eval(*n.a, p) / den;
    }
    case NodeKind::neg: return -eval(*n.a, p);
    case NodeKind::power: {
        const double base = eval(*n.a, p);
        if (base == 0.0 && n.exponent < 0) {
            pole(n, "negative power of zero", p);
        }
        return std::pow(base, n.exponent);
    }
    case NodeKind::function: {
        const double u = eval(*n.a, p);
        switch (n.fn) {
        case UnaryFn::exp: return std::exp(u);
        case UnaryFn::log:
            if (!(u > 0.0)) {
                pole(n, "log of non-positive value", p);
            }
            return std::log(u);
        case UnaryFn::sin: return std::sin(u);
        case UnaryFn::cos: return std::cos(u);
        case UnaryFn::sinh: return std::sinh(u);
        case UnaryFn::cosh: return std::cosh(u);
        case UnaryFn::tanh: return std::tanh(u);
        case UnaryFn::sqrt:
            if (u < 0.0) {
                pole(n, "sqrt of negative value", p);
            }
            return std::sqrt(u);
        }
    }
    }
    return 0.0;
}

bool equal(const ScalarExpr::Node* a, const ScalarExpr::Node* b)
{
    if (a == b) {
        return true;
    }
    if (!a || !b || a->kind != b->kind) {
        return false;
    }
    switch (a->kind) {
    case NodeKind::constant: return a->value == b->value;
    case NodeKind::coordinate: return a->index == b->index;
    case NodeKind::power: return a->exponent == b->exponent && equal(a->a.get(), b->a.get());
    case NodeKind::function: return a->fn == b->fn && equal(a->a.get(), b->a.get());
    case NodeKind::neg: return equal(a->a.get(), b->a.get());
    default: return equal(a->a.get(), b->a.get()) && equal(a->b.get(), b->b.get());
    }
}

} // namespace

std::string_view function_name(UnaryFn fn)
{
    for (const auto& [n, f] : kFunctions) {
        if (f == fn) {
            return n;
        }
    }
    return "?";
}

ScalarExpr::ScalarExpr() : node_(zero_node()) {}

ScalarExpr ScalarExpr::constant(double value)
{
    if (value == 0.0 && !std::signbit(value)) {
        return ScalarExpr();
    }
    Node n;
    n.value = value;
    return ScalarExpr(make_node(n));
}

ScalarExpr ScalarExpr::coordinate(std::size_t index)
{
    Node n;
    n.kind = NodeKind::coordinate;
    n.index = index;
    return ScalarExpr(make_node(n));
}

ScalarExpr ScalarExpr::power(ScalarExpr base, int exponent)
{
    Node n;
    n.kind = NodeKind::power;
    n.exponent = exponent;
    n.a = std::move(base.node_);
    return ScalarExpr(make_node(std::move(n)));
}

ScalarExpr ScalarExpr::apply(UnaryFn fn, ScalarExpr operand)
{
    Node n;
    n.kind = NodeKind::function;
    n.fn = fn;
    n.a = std::move(operand.node_);
    return ScalarExpr(make_node(std::move(n)));
}

namespace {
ScalarExpr::Node binary_node(NodeKind kind, std::shared_ptr<const ScalarExpr::Node> a,
                             std::shared_ptr<const ScalarExpr::Node> b)
{
    ScalarExpr::Node n;
    n.kind = kind;
    n.a = std::move(a);
    n.b = std::move(b);
    return n;
}
} // namespace

ScalarExpr operator+(ScalarExpr a, ScalarExpr b)
{
    return ScalarExpr(make_node(binary_node(NodeKind::add, std::move(a.node_), std::move(b.node_))));
}

ScalarExpr operator-(ScalarExpr a, ScalarExpr b)
{
    return ScalarExpr(make_node(binary_node(NodeKind::sub, std::move(a.node_), std::move(b.node_))));
}

ScalarExpr operator*(ScalarExpr a, ScalarExpr b)
{
    return ScalarExpr(make_node(binary_node(NodeKind::mul, std::move(a.node_), std::move(b.node_))));
}

ScalarExpr operator/(ScalarExpr a, ScalarExpr b)
{
    return ScalarExpr(make_node(binary_node(NodeKind::div, std::move(a.node_), std::move(b.node_))));
}

ScalarExpr operator-(ScalarExpr a)
{
    ScalarExpr::Node n;
    n.kind = NodeKind::neg;
    n.a = std::move(a.node_);
    return ScalarExpr(make_node(std::move(n)));
}

NodeKind ScalarExpr::kind() const noexcept { return node_->kind; }
double ScalarExpr::value() const noexcept { return node_->value; }
std::size_t ScalarExpr::index() const noexcept { return node_->index; }
int ScalarExpr::exponent() const noexcept { return node_->exponent; }
UnaryFn ScalarExpr::function() const noexcept { return node_->fn; }
ScalarExpr ScalarExpr::lhs() const { return node_->a ? ScalarExpr(node_->a) : ScalarExpr(); }
ScalarExpr ScalarExpr::rhs() const { return node_->b ? ScalarExpr(node_->b) : ScalarExpr(); }
bool ScalarExpr::is_constant() const noexcept { return node_->bound == 0; }
bool ScalarExpr::is_zero() const noexcept { return node_->kind == NodeKind::constant && node_->value == 0.0; }
std::size_t ScalarExpr::coordinate_bound() const noexcept { return node_->bound; }
std::size_t ScalarExpr::depth() const noexcept { return node_->depth; }

bool operator==(const ScalarExpr& a, const ScalarExpr& b) { return equal(a.node_.get(), b.node_.get()); }

void validate_coordinate_names(std::span<const std::string> coords)
{
    if (coords.empty()) {
        throw SpecError("coordinate list is empty");
    }
    std::set<std::string> seen;
    for (const auto& name : coords) {
        if (name.empty() || !is_ident_start(name.front()) ||
            !std::all_of(name.begin(), name.end(), is_ident_char)) {
            throw SpecError("invalid coordinate name '" + name + "'");
        }
        UnaryFn fn{};
        if (lookup_function(name, fn)) {
            throw SpecError("coordinate name '" + name + "' collides with a function name");
        }
        if (!seen.insert(name).second) {
            throw SpecError("duplicate coordinate name '" + name + "'");
        }
    }
}

ScalarExpr parse_expr(std::string_view text, std::span<const std::string> coords)
{
    return Parser(text, coords).run();
}

std::string serialize_expr(const ScalarExpr& e, std::span<const std::string> coords)
{
    std::string out;
    serialize(e.node(), coords, out);
    return out;
}

std::string format_number(double v)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    std::string s(buf.data(), end);
    // to_chars may emit "1e+20"; the grammar accepts that form.
    return s;
}

double evaluate(const ScalarExpr& e, std::span<const double> point)
{
    if (e.coordinate_bound() > point.size()) {
        throw EvalError("expression references coordinate " + std::to_string(e.coordinate_bound()) +
                        " beyond point dimension " + std::to_string(point.size()));
    }
    const double v = eval(e.node(), point);
    if (!std::isfinite(v)) {
        pole(e.node(), "non-finite value", point);
    }
    return v;
}

} // namespace pqgeom
