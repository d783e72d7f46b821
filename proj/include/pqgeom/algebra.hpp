#pragma once

// Para-quaternion algebra and pointwise linear algebra on endomorphisms and
// vector-valued 2-forms.

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace pqgeom {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Signs of J_a^2: J1^2 = J2^2 = I, J3^2 = -I.
inline constexpr std::array<double, 3> kEps{1.0, 1.0, -1.0};

/// x + y j1 + z j2 + w j3.
struct ParaQuaternion {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double w = 0.0;

    friend bool operator==(const ParaQuaternion&, const ParaQuaternion&) = default;
};

ParaQuaternion pq_mul(const ParaQuaternion& a, const ParaQuaternion& b);
ParaQuaternion pq_conj(const ParaQuaternion& a);

/// b1 J1 + b2 J2 + b3 J3.
struct ImaginaryPQ {
    double b1 = 0.0;
    double b2 = 0.0;
    double b3 = 0.0;
};

/// b1^2 + b2^2 - b3^2.
double lorentz_q(const ImaginaryPQ& b);
/// -Re(q conj(q')), signature (+,+,-).
double lorentz_inner(const ImaginaryPQ& a, const ImaginaryPQ& b);
/// sum over i != k of x^i y^k J_i J_k.
ImaginaryPQ cross_product(const ImaginaryPQ& x, const ImaginaryPQ& y);

/// Deterministic generator; uniform() is (bits >> 11) * 2^-53 so streams are
/// identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

enum class Sheet {
    plus,  // q(b) = +1, para-complex structures
    minus, // q(b) = -1 with b3 > 0, complex structures
};

std::vector<ImaginaryPQ> sample_hyperboloid(Sheet kind, std::size_t count, std::uint64_t seed,
                                            double t_max = 2.0);

struct StructureTriple {
    std::array<Mat, 3> J;
    std::size_t dim() const { return static_cast<std::size_t>(J[0].rows()); }
};

/// The flat model triple on R^{4n}, coordinates ordered as n blocks of (x, y, u, v).
StructureTriple standard_triple(std::size_t n);

Mat build_J(const ImaginaryPQ& b, const StructureTriple& t);

Mat commutator(const Mat& a, const Mat& b);

/// Largest absolute entry.
double max_abs(const Mat& m);

/// (1,2)-tensor X^i_{jk}. Used for connection coefficients Gamma^i_{jk}
/// (nabla_{e_j} e_k = Gamma^i_{jk} e_i), difference tensors S_X(Y)^i = S^i_{jk} X^j Y^k,
/// and vector-valued 2-forms B(X,Y)^i = B^i_{jk} X^j Y^k.
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(std::size_t d) : d_(d), a_(d * d * d, 0.0) {}

    std::size_t dim() const noexcept { return d_; }
    double& operator()(std::size_t i, std::size_t j, std::size_t k) { return a_[(i * d_ + j) * d_ + k]; }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const { return a_[(i * d_ + j) * d_ + k]; }

    /// The endomorphism Y -> X(e_j, Y): entries (i,k).
    Mat dir(std::size_t j) const;
    void set_dir(std::size_t j, const Mat& m);
    /// Component i as a matrix over (j,k).
    Mat comp(std::size_t i) const;
    void set_comp(std::size_t i, const Mat& m);

    /// X(v, w) as a vector.
    Vec apply(const Vec& v, const Vec& w) const;

    /// Tensor with the two lower slots swapped subtracted: X^i_{jk} - X^i_{kj}.
    Tensor3 alternated() const;

    double max_abs() const;

    Tensor3& operator+=(const Tensor3& o);
    Tensor3& operator-=(const Tensor3& o);
    Tensor3& operator*=(double s);
    friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
    friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
    friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }

private:
    std::size_t d_ = 0;
    std::vector<double> a_;
};

/// Projection of a vector-valued 2-form B, literally
/// 1/4 (eps B(X,Y) + B(JX,JY) - J B(JX,Y) - J B(X,JY)).
/// Throws ArgumentError when J^2 != eps I.
Tensor3 proj02(const Tensor3& b, const Mat& J, double eps);

/// eps * proj02: the idempotent projector onto the (0,2) part.
Tensor3 proj02_normalized(const Tensor3& b, const Mat& J, double eps);

struct SSplit {
    Tensor3 s0;
    std::array<Vec, 3> s; // covectors s^1, s^2, s^3
    double residual = 0.0; // max over basis X and a of |[S0_X, J_a]|
};

/// S_X = S0_X + sum_a s^a(X) J_a with S0_X in the commutant of the triple.
SSplit s_split(const Tensor3& S, const StructureTriple& t);

} // namespace pqgeom
