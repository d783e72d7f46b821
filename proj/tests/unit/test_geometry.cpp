#include <doctest.h>

#include "pqgeom/catalog.hpp"
#include "pqgeom/errors.hpp"
#include "pqgeom/geometry.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace pqgeom;

namespace {

PointFrame lc_at(const std::string& name, std::vector<double> p)
{
    EvalOptions o;
    o.levi_civita = true;
    return evaluate_point(catalog_get(name), p, o);
}

// g(R(e_a,e_b)e_c, e_d)
double rm(const PointFrame& f, std::size_t a, std::size_t b, std::size_t c, std::size_t e)
{
    double s = 0.0;
    for (std::size_t i = 0; i < f.d; ++i) {
        s += f.g(e, i) * f.curvature(a, b)(i, c);
    }
    return s;
}

// Weyl tensor from the Ricci decomposition, written out directly from R.
std::vector<double> weyl_oracle(const PointFrame& f)
{
    const std::size_t d = f.d;
    Mat ric = Mat::Zero(d, d); // Ric(e_b, e_c) = tr(X -> R(X, e_b) e_c)
    for (std::size_t b = 0; b < d; ++b) {
        for (std::size_t c = 0; c < d; ++c) {
            for (std::size_t i = 0; i < d; ++i) {
                ric(b, c) += f.curvature(i, b)(i, c);
            }
        }
    }
    const double s = (f.ginv * ric).trace();
    const double n = static_cast<double>(d);
    const Mat& g = f.g;
    std::vector<double> w(d * d * d * d);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            for (std::size_t c = 0; c < d; ++c) {
                for (std::size_t e = 0; e < d; ++e) {
                    const double kn = g(b, c) * g(a, e) - g(a, c) * g(b, e);
                    const double ricg = ric(b, c) * g(a, e) - ric(a, c) * g(b, e) + g(b, c) * ric(a, e) -
                                        g(a, c) * ric(b, e);
                    w[((a * d + b) * d + c) * d + e] =
                        rm(f, a, b, c, e) - ricg / (n - 2) + s * kn / ((n - 1) * (n - 2));
                }
            }
        }
    }
    return w;
}

double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

const std::vector<double> kP{0.3, -0.2, 0.1, 0.4};

} // namespace

TEST_CASE("flat model has vanishing geometry")
{
    for (const char* name : {"flat-r4", "flat-r8"}) {
        const ManifoldSpec s = catalog_get(name);
        const std::vector<double> p(s.dim, 0.25);
        const PointFrame f = evaluate_point(s, p);
        CHECK(f.gamma.max_abs() == 0.0);
        CHECK(f.T.max_abs() == 0.0);
        for (const auto& r : f.R) {
            CHECK(max_abs(r) == 0.0);
        }
        for (std::size_t a = 0; a < 3; ++a) {
            CHECK(f.N[a].max_abs() == 0.0);
            CHECK(f.omega[a].cwiseAbs().maxCoeff() == 0.0);
        }
        CHECK(compatibility_residual(f) == 0.0);
    }
}

TEST_CASE("conformally flat Christoffel symbols match the closed form")
{
    // g = e^{2f} eta, f = 0.1 x y
    const PointFrame f = lc_at("conf-flat", kP);
    const std::vector<double> df{0.1 * kP[1], 0.1 * kP[0], 0.0, 0.0};
    const std::vector<double> eta{1, 1, -1, -1};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            for (std::size_t k = 0; k < 4; ++k) {
                const double expect = (i == j ? df[k] : 0.0) + (i == k ? df[j] : 0.0) -
                                      (j == k ? eta[j] * eta[i] * df[i] : 0.0);
                CHECK(f.gamma(i, j, k) == doctest::Approx(expect).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("Riemann tensor symmetries and first Bianchi identity")
{
    for (const char* name : {"conf-flat:0.3*sin(x)*u+0.1*v^2", "prod-surfaces:2,0.5"}) {
        const PointFrame f = lc_at(name, kP);
        double worst = 0.0;
        for (std::size_t a = 0; a < 4; ++a) {
            for (std::size_t b = 0; b < 4; ++b) {
                for (std::size_t c = 0; c < 4; ++c) {
                    for (std::size_t e = 0; e < 4; ++e) {
                        const double r = rm(f, a, b, c, e);
                        worst = std::max(worst, std::abs(r + rm(f, b, a, c, e)));
                        worst = std::max(worst, std::abs(r + rm(f, a, b, e, c)));
                        worst = std::max(worst, std::abs(r - rm(f, c, e, a, b)));
                        worst = std::max(worst, std::abs(r + rm(f, b, c, a, e) + rm(f, c, a, b, e)));
                    }
                }
            }
        }
        CHECK_MESSAGE(worst < 1e-12, name);
    }
}

TEST_CASE("jet and finite-difference paths agree")
{
    const ManifoldSpec s = catalog_get("conf-flat:0.3*sin(x)*u+0.1*v^2");
    EvalOptions fd;
    fd.diff = Differentiation::finite_difference;
    fd.step = 1e-4;
    const PointFrame a = evaluate_point(s, kP);
    const PointFrame b = evaluate_point(s, kP, fd);
    CHECK((a.gamma - b.gamma).max_abs() < 1e-7);
    for (std::size_t i = 0; i < a.R.size(); ++i) {
        CHECK(max_abs(a.R[i] - b.R[i]) < 1e-5);
    }
}

TEST_CASE("product of surfaces has the prescribed sectional curvatures")
{
    for (auto [k1, k2] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{-0.7, 1.3}}) {
        const std::string name = "prod-surfaces:" + format_number(k1) + "," + format_number(k2);
        const PointFrame f = lc_at(name, kP);
        auto K = [&](std::size_t i, std::size_t j) {
            return rm(f, i, j, j, i) / (f.g(i, i) * f.g(j, j) - f.g(i, j) * f.g(i, j));
        };
        CHECK(K(0, 1) == doctest::Approx(k1).epsilon(1e-12));
        CHECK(K(2, 3) == doctest::Approx(k2).epsilon(1e-12));
        CHECK(std::abs(K(0, 2)) < 1e-12);
        CHECK(std::abs(K(1, 3)) < 1e-12);
    }
}

TEST_CASE("Weyl tensor matches the Ricci decomposition oracle")
{
    for (const char* name : {"conf-flat:0.3*sin(x)*u+0.1*v^2", "prod-surfaces:1,1", "prod-surfaces:2,0.5"}) {
        const PointFrame f = lc_at(name, kP);
        const std::vector<double> lib = weyl_tensor(f);
        const std::vector<double> ref = weyl_oracle(f);
        REQUIRE(lib.size() == ref.size());
        double dev = 0.0;
        for (std::size_t i = 0; i < lib.size(); ++i) {
            dev = std::max(dev, std::abs(lib[i] - ref[i]));
        }
        CHECK_MESSAGE(dev < 1e-12 * std::max(1.0, max_abs(ref)), name);
        // totally trace-free
        for (std::size_t b = 0; b < 4; ++b) {
            for (std::size_t c = 0; c < 4; ++c) {
                double tr = 0.0;
                for (std::size_t a = 0; a < 4; ++a) {
                    for (std::size_t e = 0; e < 4; ++e) {
                        tr += f.ginv(a, e) * lib[((a * 4 + b) * 4 + c) * 4 + e];
                    }
                }
                CHECK(std::abs(tr) < 1e-12);
            }
        }
    }
}

TEST_CASE("Weyl parts of conformally flat metrics vanish")
{
    for (const char* name : {"conf-flat", "conf-flat:0.3*sin(x)*u+0.1*v^2", "prod-surfaces:1,-1", "prod-surfaces:0.4,-0.4"}) {
        const WeylParts w = weyl_asd(lc_at(name, kP));
        CHECK_MESSAGE(w.wplus < 1e-12, name);
        CHECK_MESSAGE(w.wminus < 1e-12, name);
        CHECK(w.forms_residual < 1e-12);
    }
}

TEST_CASE("Weyl part at the origin is proportional to k1 + k2")
{
    // g = eta and dg = 0 at the origin, so W is linear in (k1, k2) there and
    // vanishes on k1 + k2 = 0.
    const std::vector<double> o{0, 0, 0, 0};
    const double unit = weyl_asd(lc_at("prod-surfaces:1,0", o)).wplus;
    CHECK(unit > 0.1);
    for (auto [k1, k2] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{-0.3, 1.7}}) {
        const std::string name = "prod-surfaces:" + format_number(k1) + "," + format_number(k2);
        const WeylParts w = weyl_asd(lc_at(name, o));
        CHECK(w.wplus == doctest::Approx(std::abs(k1 + k2) * unit).epsilon(1e-12));
        CHECK(w.wminus == doctest::Approx(std::abs(k1 + k2) * unit).epsilon(1e-12));
    }
}

TEST_CASE("golden Weyl value off the origin")
{
    // Frozen after agreement with the decomposition oracle above.
    const WeylParts w = weyl_asd(lc_at("prod-surfaces:1,1", kP));
    CHECK(w.wplus == doctest::Approx(0.8227113065870294).epsilon(1e-10));
}

TEST_CASE("weyl_asd refuses non Levi-Civita frames and other dimensions")
{
    CHECK_THROWS_AS(weyl_asd(evaluate_point(catalog_get("flat-r4-s-rel"), kP)), ArgumentError);
    CHECK_THROWS_AS(weyl_asd(lc_at("flat-r8", std::vector<double>(8, 0.1))), ArgumentError);
}

TEST_CASE("curvature splitting commutes with the structure")
{
    const std::array<double, 3> wrong{1.0, 1.0, -1.0};
    for (const char* name : {"conf-flat", "prod-surfaces:2,0.5"}) {
        const PointFrame f = lc_at(name, kP);
        CHECK_MESSAGE(curvature_split(f).commutator < 1e-12, name);
        CHECK(curvature_commutators(f).residual < 1e-12);
        CHECK(curvature_commutators(f).rho_vs_A < 1e-12);
    }
    // the sign control only bites where rho_3 is nonzero
    const PointFrame f = lc_at("prod-surfaces:2,0.5", kP);
    CHECK(curvature_split(f, wrong).commutator > 1e-2);
}

TEST_CASE("singular metrics and poles")
{
    ManifoldSpec s = catalog_get("flat-r4");
    s.g_at(0, 0) = parse_expr("x", s.coords);
    CHECK_THROWS_AS(evaluate_point(s, std::vector<double>{0, 0, 0, 0}), DegeneracyError);
    // a = 0 on the unit circle is a pole of the metric, not a degenerate point
    CHECK_THROWS_AS(evaluate_point(catalog_get("prod-surfaces:-4,1"), std::vector<double>{1, 0, 0, 0}), EvalError);
}
