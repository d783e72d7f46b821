#include "pqgeom/algebra.hpp"

#include "pqgeom/errors.hpp"

#include <cmath>
#include <numbers>

namespace pqgeom {

ParaQuaternion pq_mul(const ParaQuaternion& a, const ParaQuaternion& b)
{
    return {
        a.x * b.x + a.y * b.y + a.z * b.z - a.w * b.w,
        a.x * b.y + a.y * b.x - a.z * b.w + a.w * b.z,
        a.x * b.z + a.z * b.x + a.y * b.w - a.w * b.y,
        a.x * b.w + a.w * b.x + a.y * b.z - a.z * b.y,
    };
}

ParaQuaternion pq_conj(const ParaQuaternion& a) { return {a.x, -a.y, -a.z, -a.w}; }

double lorentz_q(const ImaginaryPQ& b) { return b.b1 * b.b1 + b.b2 * b.b2 - b.b3 * b.b3; }

double lorentz_inner(const ImaginaryPQ& a, const ImaginaryPQ& b)
{
    const ParaQuaternion p{0.0, a.b1, a.b2, a.b3};
    const ParaQuaternion q{0.0, b.b1, b.b2, b.b3};
    return -pq_mul(p, pq_conj(q)).x;
}

ImaginaryPQ cross_product(const ImaginaryPQ& x, const ImaginaryPQ& y)
{
    // J1J2 = J3, J2J3 = -J1, J3J1 = -J2 and their reversals.
    return {
        x.b3 * y.b2 - x.b2 * y.b3,
        x.b1 * y.b3 - x.b3 * y.b1,
        x.b1 * y.b2 - x.b2 * y.b1,
    };
}

std::vector<ImaginaryPQ> sample_hyperboloid(Sheet kind, std::size_t count, std::uint64_t seed, double t_max)
{
    Rng rng(seed);
    std::vector<ImaginaryPQ> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = rng.uniform(-t_max, t_max);
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        if (kind == Sheet::plus) {
            out.push_back({std::cosh(t) * std::cos(theta), std::cosh(t) * std::sin(theta), std::sinh(t)});
        } else {
            out.push_back({std::sinh(t) * std::cos(theta), std::sinh(t) * std::sin(theta), std::cosh(t)});
        }
    }
    return out;
}

StructureTriple standard_triple(std::size_t n)
{
    Eigen::Matrix4d j1, j2, j3;
    j1 << 0, 0, -1, 0,
          0, 0, 0, 1,
          -1, 0, 0, 0,
          0, 1, 0, 0;
    j2 << 0, 0, 0, -1,
          0, 0, -1, 0,
          0, -1, 0, 0,
          -1, 0, 0, 0;
    j3 << 0, 1, 0, 0,
          -1, 0, 0, 0,
          0, 0, 0, 1,
          0, 0, -1, 0;
    const std::array<Eigen::Matrix4d, 3> blocks{j1, j2, j3};
    StructureTriple t;
    for (std::size_t a = 0; a < 3; ++a) {
        t.J[a] = Mat::Zero(4 * n, 4 * n);
        for (std::size_t b = 0; b < n; ++b) {
            t.J[a].block(4 * b, 4 * b, 4, 4) = blocks[a];
        }
    }
    return t;
}

Mat build_J(const ImaginaryPQ& b, const StructureTriple& t) { return b.b1 * t.J[0] + b.b2 * t.J[1] + b.b3 * t.J[2]; }

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Mat Tensor3::dir(std::size_t j) const
{
    Mat m(d_, d_);
    for (std::size_t i = 0; i < d_; ++i) {
        for (std::size_t k = 0; k < d_; ++k) {
            m(i, k) = (*this)(i, j, k);
        }
    }
    return m;
}

void Tensor3::set_dir(std::size_t j, const Mat& m)
{
    for (std::size_t i = 0; i < d_; ++i) {
        for (std::size_t k = 0; k < d_; ++k) {
            (*this)(i, j, k) = m(i, k);
        }
    }
}

Mat Tensor3::comp(std::size_t i) const
{
    Mat m(d_, d_);
    for (std::size_t j = 0; j < d_; ++j) {
        for (std::size_t k = 0; k < d_; ++k) {
            m(j, k) = (*this)(i, j, k);
        }
    }
    return m;
}

void Tensor3::set_comp(std::size_t i, const Mat& m)
{
    for (std::size_t j = 0; j < d_; ++j) {
        for (std::size_t k = 0; k < d_; ++k) {
            (*this)(i, j, k) = m(j, k);
        }
    }
}

Vec Tensor3::apply(const Vec& v, const Vec& w) const
{
    Vec out = Vec::Zero(d_);
    for (std::size_t i = 0; i < d_; ++i) {
        out(i) = v.dot(comp(i) * w);
    }
    return out;
}

Tensor3 Tensor3::alternated() const
{
    Tensor3 r(d_);
    for (std::size_t i = 0; i < d_; ++i) {
        for (std::size_t j = 0; j < d_; ++j) {
            for (std::size_t k = 0; k < d_; ++k) {
                r(i, j, k) = (*this)(i, j, k) - (*this)(i, k, j);
            }
        }
    }
    return r;
}

double Tensor3::max_abs() const
{
    double m = 0.0;
    for (double v : a_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

Tensor3& Tensor3::operator+=(const Tensor3& o)
{
    for (std::size_t i = 0; i < a_.size(); ++i) {
        a_[i] += o.a_[i];
    }
    return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& o)
{
    for (std::size_t i = 0; i < a_.size(); ++i) {
        a_[i] -= o.a_[i];
    }
    return *this;
}

Tensor3& Tensor3::operator*=(double s)
{
    for (double& v : a_) {
        v *= s;
    }
    return *this;
}

Tensor3 proj02(const Tensor3& b, const Mat& J, double eps)
{
    const std::size_t d = b.dim();
    const Mat sq = J * J - eps * Mat::Identity(d, d);
    if (max_abs(sq) > 1e-8 * std::max(1.0, max_abs(J) * max_abs(J))) {
        throw ArgumentError("proj02: J^2 differs from eps*I");
    }
    std::vector<Mat> c(d), cj(d), jc(d);
    for (std::size_t m = 0; m < d; ++m) {
        c[m] = b.comp(m);
        jc[m] = J.transpose() * c[m]; // B^m(JX, Y)
        cj[m] = c[m] * J;             // B^m(X, JY)
    }
    Tensor3 r(d);
    for (std::size_t i = 0; i < d; ++i) {
        Mat acc = eps * c[i] + J.transpose() * c[i] * J;
        for (std::size_t m = 0; m < d; ++m) {
            if (J(i, m) != 0.0) {
                acc -= J(i, m) * (jc[m] + cj[m]);
            }
        }
        r.set_comp(i, 0.25 * acc);
    }
    return r;
}

Tensor3 proj02_normalized(const Tensor3& b, const Mat& J, double eps) { return eps * proj02(b, J, eps); }

SSplit s_split(const Tensor3& S, const StructureTriple& t)
{
    const std::size_t d = S.dim();
    const double scale = static_cast<double>(d); // Tr(J_a J_a) = eps_a * d
    SSplit out;
    out.s0 = S;
    for (auto& v : out.s) {
        v = Vec::Zero(d);
    }
    for (std::size_t j = 0; j < d; ++j) {
        const Mat sx = S.dir(j);
        Mat s0 = sx;
        for (std::size_t a = 0; a < 3; ++a) {
            const double coeff = (t.J[a] * sx).trace() / (kEps[a] * scale);
            out.s[a](j) = coeff;
            s0 -= coeff * t.J[a];
        }
        out.s0.set_dir(j, s0);
        for (std::size_t a = 0; a < 3; ++a) {
            out.residual = std::max(out.residual, max_abs(commutator(s0, t.J[a])));
        }
    }
    return out;
}

} // namespace pqgeom
