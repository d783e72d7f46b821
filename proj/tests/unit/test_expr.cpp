#include <doctest.h>

#include "pqgeom/algebra.hpp"
#include "pqgeom/errors.hpp"
#include "pqgeom/expr.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace pqgeom;

namespace {

const std::vector<std::string> kXY{"x", "y", "u", "v"};

double eval_at(const std::string& text, std::vector<double> p)
{
    return evaluate(parse_expr(text, kXY), p);
}

// Random well-defined expressions (no division, guarded log/sqrt) for round-trip tests.
ScalarExpr random_expr(Rng& rng, int depth)
{
    const double r = rng.uniform();
    if (depth == 0 || r < 0.2) {
        if (rng.uniform() < 0.5) {
            return ScalarExpr::coordinate(static_cast<std::size_t>(rng.uniform() * 4.0));
        }
        return ScalarExpr::constant(std::round(rng.uniform(-5.0, 5.0) * 1000.0) / 1000.0);
    }
    const int pick = static_cast<int>(rng.uniform() * 7.0);
    switch (pick) {
    case 0: return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 1: return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
    case 2: return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
    case 3: return -random_expr(rng, depth - 1);
    case 4: return ScalarExpr::power(random_expr(rng, depth - 1), static_cast<int>(rng.uniform() * 4.0));
    case 5: return ScalarExpr::apply(UnaryFn::sin, random_expr(rng, depth - 1));
    default: return ScalarExpr::apply(UnaryFn::exp, ScalarExpr::constant(0.1) * random_expr(rng, depth - 1));
    }
}

} // namespace

TEST_CASE("arithmetic precedence")
{
    CHECK(eval_at("2*x+3", {1.5, 0, 0, 0}) == doctest::Approx(6.0));
    CHECK(eval_at("x-y-u", {1, 2, 3, 0}) == doctest::Approx(-4.0));
    CHECK(eval_at("x/y/u", {8, 2, 2, 0}) == doctest::Approx(2.0));
    CHECK(eval_at("-x^2", {3, 0, 0, 0}) == doctest::Approx(9.0));
    CHECK(eval_at("2^-2", {0, 0, 0, 0}) == doctest::Approx(0.25));
    CHECK(eval_at("x^0", {0, 0, 0, 0}) == doctest::Approx(1.0));
    CHECK(eval_at("1e-3*u", {0, 0, 2, 0}) == doctest::Approx(2e-3));
    CHECK(eval_at("exp(log(2))+sqrt(9)+cosh(0)-sinh(0)+tanh(0)", {0, 0, 0, 0}) == doctest::Approx(6.0));
    CHECK(eval_at("sin(x)^2+cos(x)^2", {0.7, 0, 0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("negative literals fold into constants")
{
    const ScalarExpr e = parse_expr("-2", kXY);
    CHECK(e.kind() == NodeKind::constant);
    CHECK(e.value() == -2.0);
    CHECK(parse_expr("-x", kXY).kind() == NodeKind::neg);
}

TEST_CASE("parse errors carry offsets")
{
    try {
        parse_expr("x+*y", kXY);
        FAIL("accepted");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
    }
    CHECK_THROWS_AS(parse_expr("q+1", kXY), ParseError);
    CHECK_THROWS_AS(parse_expr("foo(x)", kXY), ParseError);
    CHECK_THROWS_AS(parse_expr("x^1.5", kXY), ParseError);
    CHECK_THROWS_AS(parse_expr("(x+1", kXY), ParseError);
    CHECK_THROWS_AS(parse_expr("", kXY), ParseError);
    CHECK_THROWS_AS(parse_expr("x y", kXY), ParseError);
}

TEST_CASE("poles raise EvalError")
{
    CHECK_THROWS_AS(eval_at("1/x", {0, 0, 0, 0}), EvalError);
    CHECK_THROWS_AS(eval_at("x^-1", {0, 0, 0, 0}), EvalError);
    CHECK_THROWS_AS(eval_at("log(x)", {-1, 0, 0, 0}), EvalError);
    CHECK_THROWS_AS(eval_at("sqrt(x)", {-1, 0, 0, 0}), EvalError);
    CHECK_THROWS_AS(eval_at("exp(x)", {1000, 0, 0, 0}), EvalError);
}

TEST_CASE("coordinate names")
{
    CHECK_NOTHROW(validate_coordinate_names(std::vector<std::string>{"x1", "y_2"}));
    CHECK_THROWS(validate_coordinate_names(std::vector<std::string>{"x", "x"}));
    CHECK_THROWS(validate_coordinate_names(std::vector<std::string>{"1x"}));
    CHECK_THROWS(validate_coordinate_names(std::vector<std::string>{"exp"}));
    CHECK_THROWS(validate_coordinate_names(std::vector<std::string>{}));
}

TEST_CASE("format_number round-trips")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-2.0) == "-2");
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.uniform(-1e6, 1e6) * std::pow(10.0, rng.uniform(-20.0, 20.0));
        CHECK(std::stod(format_number(v)) == v);
    }
}

TEST_CASE("serialize then parse is the identity (property)")
{
    Rng rng(2024);
    const std::vector<double> p{0.3, -0.7, 0.2, 0.9};
    for (int i = 0; i < 500; ++i) {
        const ScalarExpr e = random_expr(rng, 5);
        const std::string text = serialize_expr(e, kXY);
        const ScalarExpr back = parse_expr(text, kXY);
        REQUIRE_MESSAGE(back == e, text);
        CHECK(serialize_expr(back, kXY) == text);
        CHECK(evaluate(back, p) == evaluate(e, p));
    }
}

TEST_CASE("structural queries")
{
    const ScalarExpr e = parse_expr("x*exp(v)+3", kXY);
    CHECK(e.coordinate_bound() == 4);
    CHECK_FALSE(e.is_constant());
    CHECK(parse_expr("2*3", kXY).is_constant());
    CHECK(ScalarExpr().is_zero());
    CHECK_FALSE(parse_expr("0*x", kXY).is_zero());
    CHECK_THROWS_AS(evaluate(e, std::vector<double>{1.0, 2.0}), EvalError);
}
