#include <doctest.h>

#include "pqgeom/algebra.hpp"
#include "pqgeom/errors.hpp"

#include <cmath>

using namespace pqgeom;

namespace {

// Basis 1, j1, j2, j3 as (x, y, z, w).
const ParaQuaternion kBasis[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};

// Model coordinates (x, y, u, v) stand for x + y j3 + u j1 + v j2.
ParaQuaternion to_pq(const Vec& c) { return {c(0), c(2), c(3), c(1)}; }
Vec to_coords(const ParaQuaternion& q)
{
    Vec c(4);
    c << q.x, q.w, q.y, q.z;
    return c;
}

Tensor3 random_tensor(std::size_t d, Rng& rng)
{
    Tensor3 t(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < d; ++k) {
                t(i, j, k) = rng.uniform(-1.0, 1.0);
            }
        }
    }
    return t;
}

Mat random_mat(std::size_t d, Rng& rng)
{
    Mat m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            m(i, j) = rng.uniform(-1.0, 1.0);
        }
    }
    return m;
}

} // namespace

TEST_CASE("multiplication table of the para-quaternions")
{
    // Rows: left factor 1, j1, j2, j3; entries as (sign, basis index).
    const int table[4][4][2] = {
        {{1, 0}, {1, 1}, {1, 2}, {1, 3}},
        {{1, 1}, {1, 0}, {1, 3}, {1, 2}},
        {{1, 2}, {-1, 3}, {1, 0}, {-1, 1}},
        {{1, 3}, {-1, 2}, {1, 1}, {-1, 0}},
    };
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const ParaQuaternion p = pq_mul(kBasis[a], kBasis[b]);
            const double s = table[a][b][0];
            const ParaQuaternion& e = kBasis[table[a][b][1]];
            CHECK(p == ParaQuaternion{s * e.x, s * e.y, s * e.z, s * e.w});
        }
    }
}

TEST_CASE("conjugation and the neutral norm")
{
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const ParaQuaternion q{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
        const ParaQuaternion n = pq_mul(q, pq_conj(q));
        CHECK(n.x == doctest::Approx(q.x * q.x - q.y * q.y - q.z * q.z + q.w * q.w));
        CHECK(std::abs(n.y) + std::abs(n.z) + std::abs(n.w) < 1e-14);
    }
}

TEST_CASE("standard triple is minus right multiplication")
{
    for (std::size_t n : {1u, 2u}) {
        const StructureTriple t = standard_triple(n);
        const ParaQuaternion ja[3] = {kBasis[1], kBasis[2], kBasis[3]};
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t blk = 0; blk < n; ++blk) {
                for (std::size_t k = 0; k < 4; ++k) {
                    Vec e = Vec::Zero(4);
                    e(static_cast<Eigen::Index>(k)) = 1.0;
                    ParaQuaternion r = pq_mul(to_pq(e), ja[a]);
                    r = {-r.x, -r.y, -r.z, -r.w};
                    const Vec expect = to_coords(r);
                    const auto col = t.J[a].col(static_cast<Eigen::Index>(4 * blk + k));
                    for (std::size_t i = 0; i < 4 * n; ++i) {
                        const bool in_block = i / 4 == blk;
                        CHECK(col(static_cast<Eigen::Index>(i)) == (in_block ? expect(static_cast<Eigen::Index>(i % 4)) : 0.0));
                    }
                }
            }
        }
    }
}

TEST_CASE("para-quaternionic identities of the model triple")
{
    for (std::size_t n : {1u, 2u, 3u}) {
        const auto& J = standard_triple(n).J;
        const Mat I = Mat::Identity(4 * n, 4 * n);
        CHECK(max_abs(J[0] * J[0] - I) == 0.0);
        CHECK(max_abs(J[1] * J[1] - I) == 0.0);
        CHECK(max_abs(J[2] * J[2] + I) == 0.0);
        CHECK(max_abs(J[0] * J[1] - J[2]) == 0.0);
        CHECK(max_abs(J[0] * J[1] + J[1] * J[0]) == 0.0);
        // eta is skew for each J_a
        Mat eta = Mat::Identity(4 * n, 4 * n);
        for (std::size_t b = 0; b < n; ++b) {
            eta(4 * b + 2, 4 * b + 2) = eta(4 * b + 3, 4 * b + 3) = -1.0;
        }
        for (const auto& j : J) {
            const Mat F = j.transpose() * eta;
            CHECK(max_abs(F + F.transpose()) == 0.0);
        }
    }
}

TEST_CASE("hyperboloid samples")
{
    const StructureTriple t = standard_triple(1);
    const Mat I = Mat::Identity(4, 4);
    for (const auto& b : sample_hyperboloid(Sheet::minus, 64, 5)) {
        CHECK(lorentz_q(b) == doctest::Approx(-1.0));
        CHECK(b.b3 > 0.0);
        CHECK(max_abs(build_J(b, t) * build_J(b, t) + I) < 1e-12 * (1 + b.b3 * b.b3));
    }
    for (const auto& b : sample_hyperboloid(Sheet::plus, 64, 6)) {
        CHECK(lorentz_q(b) == doctest::Approx(1.0));
        CHECK(max_abs(build_J(b, t) * build_J(b, t) - I) < 1e-12 * (1 + b.b3 * b.b3));
    }
    const auto a = sample_hyperboloid(Sheet::minus, 8, 42);
    const auto c = sample_hyperboloid(Sheet::minus, 8, 42);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].b1 == c[i].b1);
    }
}

TEST_CASE("cross product is Lorentz-orthogonal to its factors")
{
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
        const ImaginaryPQ x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const ImaginaryPQ y{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const ImaginaryPQ z = cross_product(x, y);
        CHECK(std::abs(lorentz_inner(z, x)) < 1e-14);
        CHECK(std::abs(lorentz_inner(z, y)) < 1e-14);
    }
}

TEST_CASE("(0,2) projection is idempotent and annihilates its complement")
{
    Rng rng(1000);
    const StructureTriple t = standard_triple(1);
    const auto minus = sample_hyperboloid(Sheet::minus, 500, 17);
    const auto plus = sample_hyperboloid(Sheet::plus, 500, 18);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const bool cx = i % 2 == 0;
        const double eps = cx ? -1.0 : 1.0;
        const Mat J = build_J(cx ? minus[i / 2] : plus[i / 2], t);
        Tensor3 B = random_tensor(4, rng);
        B = 0.5 * B.alternated();
        const Tensor3 P = proj02_normalized(B, J, eps);
        const double scale = std::max(1.0, max_abs(J) * max_abs(J) * max_abs(J));
        worst = std::max(worst, (proj02_normalized(P, J, eps) - P).max_abs() / scale);
        worst = std::max(worst, proj02_normalized(B - P, J, eps).max_abs() / scale);
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("proj02 rejects a non-structure")
{
    const Mat J = Mat::Identity(4, 4) * 2.0;
    CHECK_THROWS_AS(proj02(Tensor3(4), J, 1.0), ArgumentError);
}

TEST_CASE("s_split reconstructs S")
{
    Rng rng(77);
    for (std::size_t n : {1u, 2u}) {
        const StructureTriple t = standard_triple(n);
        const std::size_t d = 4 * n;
        for (int trial = 0; trial < 20; ++trial) {
            // S_X = C_X + sum_a s^a(X) J_a with C_X commuting with the triple:
            // C_X is a random combination of the commutant, built by averaging.
            Tensor3 S(d);
            std::array<Vec, 3> s;
            for (auto& v : s) {
                v = Vec(d);
                for (std::size_t k = 0; k < d; ++k) {
                    v(static_cast<Eigen::Index>(k)) = rng.uniform(-1, 1);
                }
            }
            for (std::size_t k = 0; k < d; ++k) {
                Mat m = random_mat(d, rng);
                // project onto the commutant: average over the finite group generated by J1, J2
                Mat c = Mat::Zero(d, d);
                const Mat G[4] = {Mat::Identity(d, d), t.J[0], t.J[1], t.J[2]};
                const double sq[4] = {1.0, 1.0, 1.0, -1.0};
                for (int g = 0; g < 4; ++g) {
                    c += sq[g] * G[g] * m * G[g];
                }
                c /= 4.0;
                Mat full = c;
                for (std::size_t a = 0; a < 3; ++a) {
                    full += s[a](static_cast<Eigen::Index>(k)) * t.J[a];
                }
                S.set_dir(k, full);
            }
            const SSplit sp = s_split(S, t);
            CHECK(sp.residual < 1e-10);
            for (std::size_t a = 0; a < 3; ++a) {
                CHECK((sp.s[a] - s[a]).cwiseAbs().maxCoeff() < 1e-10);
            }
            Tensor3 back = sp.s0;
            for (std::size_t k = 0; k < d; ++k) {
                Mat m = back.dir(k);
                for (std::size_t a = 0; a < 3; ++a) {
                    m += sp.s[a](static_cast<Eigen::Index>(k)) * t.J[a];
                }
                back.set_dir(k, m);
            }
            CHECK((back - S).max_abs() < 1e-10);
        }
    }
}
