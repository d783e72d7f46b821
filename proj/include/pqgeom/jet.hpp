#pragma once

// Order-2 jets: value, gradient and Hessian of a scalar field at one point.

#include "pqgeom/expr.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace pqgeom {

class Jet2 {
public:
    Jet2() = default;
    /// Constant jet in dimension d.
    Jet2(std::size_t d, double value);

    /// Jet of the coordinate function x_k at `value`.
    static Jet2 seed(std::size_t d, std::size_t k, double value);

    std::size_t dim() const noexcept { return grad_.size(); }
    double value() const noexcept { return value_; }
    double grad(std::size_t i) const { return grad_[i]; }
    /// Symmetric by storage: hess(i,j) and hess(j,i) read the same slot.
    double hess(std::size_t i, std::size_t j) const { return hess_[slot(i, j)]; }

    void set_value(double v) noexcept { value_ = v; }
    void set_grad(std::size_t i, double v) { grad_[i] = v; }
    void set_hess(std::size_t i, std::size_t j, double v) { hess_[slot(i, j)] = v; }

    Jet2& operator+=(const Jet2& o);
    Jet2& operator-=(const Jet2& o);
    Jet2& operator*=(double s);

    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
    friend Jet2 operator*(Jet2 a, double s) { return a *= s; }
    friend Jet2 operator*(double s, Jet2 a) { return a *= s; }
    friend Jet2 operator-(Jet2 a) { return a *= -1.0; }
    friend Jet2 operator*(const Jet2& a, const Jet2& b);
    friend Jet2 operator/(const Jet2& a, const Jet2& b);

    /// f(u) given f(u0), f'(u0), f''(u0).
    Jet2 compose(double f0, double f1, double f2) const;

private:
    static std::size_t slot(std::size_t i, std::size_t j) noexcept
    {
        if (i < j) {
            std::swap(i, j);
        }
        return i * (i + 1) / 2 + j;
    }

    double value_ = 0.0;
    std::vector<double> grad_;
    std::vector<double> hess_;
};

/// Exact order-2 Taylor data of e at p. Throws EvalError at poles.
Jet2 jet_eval(const ScalarExpr& e, std::span<const double> p);

} // namespace pqgeom
