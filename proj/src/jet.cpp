#include "pqgeom/jet.hpp"

#include "pqgeom/errors.hpp"

#include <cmath>
#include <string>

namespace pqgeom {

Jet2::Jet2(std::size_t d, double value) : value_(value), grad_(d, 0.0), hess_(d * (d + 1) / 2, 0.0) {}

Jet2 Jet2::seed(std::size_t d, std::size_t k, double value)
{
    Jet2 j(d, value);
    j.grad_[k] = 1.0;
    return j;
}

Jet2& Jet2::operator+=(const Jet2& o)
{
    value_ += o.value_;
    for (std::size_t i = 0; i < grad_.size(); ++i) {
        grad_[i] += o.grad_[i];
    }
    for (std::size_t i = 0; i < hess_.size(); ++i) {
        hess_[i] += o.hess_[i];
    }
    return *this;
}

Jet2& Jet2::operator-=(const Jet2& o)
{
    value_ -= o.value_;
    for (std::size_t i = 0; i < grad_.size(); ++i) {
        grad_[i] -= o.grad_[i];
    }
    for (std::size_t i = 0; i < hess_.size(); ++i) {
        hess_[i] -= o.hess_[i];
    }
    return *this;
}

Jet2& Jet2::operator*=(double s)
{
    value_ *= s;
    for (double& g : grad_) {
        g *= s;
    }
    for (double& h : hess_) {
        h *= s;
    }
    return *this;
}

Jet2 operator*(const Jet2& a, const Jet2& b)
{
    const std::size_t d = a.dim();
    Jet2 r(d, a.value_ * b.value_);
    for (std::size_t i = 0; i < d; ++i) {
        r.grad_[i] = a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
        for (std::size_t j = 0; j <= i; ++j) {
            const std::size_t s = Jet2::slot(i, j);
            r.hess_[s] = a.value_ * b.hess_[s] + b.value_ * a.hess_[s] + a.grad_[i] * b.grad_[j] +
                         a.grad_[j] * b.grad_[i];
        }
    }
    return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b)
{
    const double v = b.value_;
    return a * b.compose(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

Jet2 Jet2::compose(double f0, double f1, double f2) const
{
    const std::size_t d = dim();
    Jet2 r(d, f0);
    for (std::size_t i = 0; i < d; ++i) {
        r.grad_[i] = f1 * grad_[i];
        for (std::size_t j = 0; j <= i; ++j) {
            const std::size_t s = slot(i, j);
            r.hess_[s] = f1 * hess_[s] + f2 * grad_[i] * grad_[j];
        }
    }
    return r;
}

namespace {

[[noreturn]] void pole(const ScalarExpr& e, const char* why, std::span<const double> p)
{
    std::string text = std::string(why) + " in node " + serialize_expr(e, {}) + " at point (";
    for (std::size_t i = 0; i < p.size(); ++i) {
        text += (i ? ", " : "") + format_number(p[i]);
    }
    throw EvalError(text + ")");
}

Jet2 eval(const ScalarExpr& e, std::span<const double> p)
{
    const std::size_t d = p.size();
    switch (e.kind()) {
    case NodeKind::constant: return Jet2(d, e.value());
    case NodeKind::coordinate: return Jet2::seed(d, e.index(), p[e.index()]);
    case NodeKind::add: return eval(e.lhs(), p) + eval(e.rhs(), p);
    case NodeKind::sub: return eval(e.lhs(), p) - eval(e.rhs(), p);
    case NodeKind::mul: return eval(e.lhs(), p) * eval(e.rhs(), p);
    case NodeKind::div: {
        Jet2 den = eval(e.rhs(), p);
        if (den.value() == 0.0) {
            pole(e, "division by zero", p);
        }
        return eval(e.lhs(), p) / den;
    }
    case NodeKind::neg: return -eval(e.lhs(), p);
    case NodeKind::power: {
        const Jet2 u = eval(e.lhs(), p);
        const int k = e.exponent();
        const double t = u.value();
        if (k == 0) {
            return Jet2(d, 1.0);
        }
        if (t == 0.0 && k < 0) {
            pole(e, "negative power of zero", p);
        }
        const double f1 = k * std::pow(t, k - 1);
        const double f2 = (k == 1) ? 0.0 : double(k) * (k - 1) * std::pow(t, k - 2);
        return u.compose(std::pow(t, k), f1, f2);
    }
    case NodeKind::function: {
        const Jet2 u = eval(e.lhs(), p);
        const double t = u.value();
        switch (e.function()) {
        case UnaryFn::exp: {
            const double v = std::exp(t);
            return u.compose(v, v, v);
        }
        case UnaryFn::log:
            if (!(t > 0.0)) {
                pole(e, "log of non-positive value", p);
            }
            return u.compose(std::log(t), 1.0 / t, -1.0 / (t * t));
        case UnaryFn::sin: return u.compose(std::sin(t), std::cos(t), -std::sin(t));
        case UnaryFn::cos: return u.compose(std::cos(t), -std::sin(t), -std::cos(t));
        case UnaryFn::sinh: return u.compose(std::sinh(t), std::cosh(t), std::sinh(t));
        case UnaryFn::cosh: return u.compose(std::cosh(t), std::sinh(t), std::cosh(t));
        case UnaryFn::tanh: {
            const double th = std::tanh(t);
            const double s2 = 1.0 - th * th;
            return u.compose(th, s2, -2.0 * th * s2);
        }
        case UnaryFn::sqrt: {
            if (!(t > 0.0)) {
                pole(e, "sqrt jet at non-positive value", p);
            }
            const double r = std::sqrt(t);
            return u.compose(r, 0.5 / r, -0.25 / (r * t));
        }
        }
    }
    }
    return Jet2(d, 0.0);
}

bool finite(const Jet2& j)
{
    if (!std::isfinite(j.value())) {
        return false;
    }
    for (std::size_t i = 0; i < j.dim(); ++i) {
        if (!std::isfinite(j.grad(i))) {
            return false;
        }
        for (std::size_t k = 0; k <= i; ++k) {
            if (!std::isfinite(j.hess(i, k))) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

Jet2 jet_eval(const ScalarExpr& e, std::span<const double> p)
{
    if (e.coordinate_bound() > p.size()) {
        throw EvalError("expression references coordinate " + std::to_string(e.coordinate_bound()) +
                        " beyond point dimension " + std::to_string(p.size()));
    }
    Jet2 r = eval(e, p);
    if (!finite(r)) {
        pole(e, "non-finite jet", p);
    }
    return r;
}

} // namespace pqgeom
