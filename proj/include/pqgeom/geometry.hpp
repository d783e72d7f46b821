#pragma once

// Tensor calculus at a point of a chart or a Lie frame.
//
// Index conventions (all indices 0-based in code):
//   Gamma^i_{jk}:  nabla_{e_j} e_k = Gamma^i_{jk} e_i
//   c^k_{ij}:      [e_i, e_j] = c^k_{ij} e_k, stored as Tensor3 c(k, i, j)
//   R^i_{jkl}:     R(e_k, e_l) e_j = R^i_{jkl} e_i, R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]
//   T^i_{jk}:      Gamma^i_{jk} - Gamma^i_{kj} - c^i_{jk}
//   (nabla_k J)^i_j = e_k(J^i_j) + Gamma^i_{km} J^m_j - Gamma^m_{kj} J^i_m
// 2-forms are stored as antisymmetric d x d matrices, alpha(e_k, e_l) at (k, l).

#include "pqgeom/algebra.hpp"
#include "pqgeom/expr.hpp"
#include "pqgeom/jet.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pqgeom {

enum class Mode { chart, frame };

enum class ConnectionKind { levi_civita, explicit_gamma, levi_civita_plus_s };

struct ManifoldSpec {
    std::string name;
    Mode mode = Mode::chart;
    std::size_t dim = 4;
    std::vector<std::string> coords;
    std::vector<ScalarExpr> g;                 // (i,j) at i*dim+j
    std::array<std::vector<ScalarExpr>, 3> J;  // (J_a)^i_j at i*dim+j
    ConnectionKind connection = ConnectionKind::levi_civita;
    std::vector<ScalarExpr> gamma;             // Gamma^i_{jk} at (i*dim+j)*dim+k
    std::vector<ScalarExpr> S;                 // S^i_{jk}, same layout
    Tensor3 structure;                         // c(k,i,j) = c^k_{ij}; frame mode only
    std::vector<double> box_lo;
    std::vector<double> box_hi;
    std::size_t sample_points = 32;

    /// All fields zero, box [-1,1]^d, coordinate names x1..xd unless given.
    static ManifoldSpec blank(std::string name, Mode mode, std::size_t dim, std::vector<std::string> coords = {});

    std::size_t n() const { return dim / 4; }
    ScalarExpr& g_at(std::size_t i, std::size_t j) { return g[i * dim + j]; }
    const ScalarExpr& g_at(std::size_t i, std::size_t j) const { return g[i * dim + j]; }
    ScalarExpr& J_at(std::size_t a, std::size_t i, std::size_t j) { return J[a][i * dim + j]; }
    const ScalarExpr& J_at(std::size_t a, std::size_t i, std::size_t j) const { return J[a][i * dim + j]; }
    ScalarExpr& gamma_at(std::size_t i, std::size_t j, std::size_t k) { return gamma[(i * dim + j) * dim + k]; }
    ScalarExpr& S_at(std::size_t i, std::size_t j, std::size_t k) { return S[(i * dim + j) * dim + k]; }

    /// Structural validation (shape, symmetry of g, frame constants, Jacobi). Throws SpecError.
    void validate() const;
};

enum class Differentiation { jet, finite_difference };

struct EvalOptions {
    Differentiation diff = Differentiation::jet;
    double step = 1e-5;       // finite-difference step
    bool levi_civita = false; // ignore the spec's connection and use Levi-Civita
};

struct PointFrame {
    std::size_t d = 0;
    std::size_t n = 0;
    std::vector<double> p;
    bool levi_civita = false;

    Mat g, ginv;
    std::vector<Mat> dg;  // dg[k] = e_k(g)
    std::vector<Mat> ddg; // ddg[k*d+l] = e_l e_k (g)
    StructureTriple J;
    std::array<std::vector<Mat>, 3> dJ;  // dJ[a][k] = e_k(J_a)
    std::array<std::vector<Mat>, 3> ddJ; // ddJ[a][k*d+l]
    Tensor3 c;

    Tensor3 gamma;
    std::vector<Tensor3> dgamma; // dgamma[l] = e_l(Gamma)
    bool has_S = false;
    Tensor3 S;

    std::vector<Mat> R; // R[k*d+l](i,j) = R^i_{jkl}
    Tensor3 T;
    std::array<Tensor3, 3> N;

    std::array<std::vector<Mat>, 3> nablaJ;  // nablaJ[a][k] = nabla_{e_k} J_a
    std::array<std::vector<Mat>, 3> dnablaJ; // dnablaJ[a][l*d+k] = e_l(nabla_{e_k} J_a)
    std::array<Vec, 3> omega;
    double omega_defect = 0.0;
    std::array<Mat, 3> domega; // exterior derivative, as 2-forms
    std::array<Mat, 3> rho;

    const Mat& curvature(std::size_t k, std::size_t l) const { return R[k * d + l]; }
};

/// Evaluates every pointwise quantity. Throws EvalError at poles and
/// DegeneracyError where g is singular or not of signature (2n, 2n).
PointFrame evaluate_point(const ManifoldSpec& spec, std::span<const double> p, const EvalOptions& opts = {});

/// Jet of one field, from jets or from central differences of plain evaluation.
Jet2 field_jet(const ScalarExpr& e, std::span<const double> p, const EvalOptions& opts);

/// (alpha ^ beta)(e_k, e_l) = alpha_k beta_l - alpha_l beta_k.
Mat wedge(const Vec& alpha, const Vec& beta);

/// A_1 = d omega_1 + omega_2^omega_3, A_2 = d omega_2 + omega_3^omega_1, A_3 = d omega_3 - omega_1^omega_2.
std::array<Mat, 3> curvature_forms_A(const PointFrame& f);

struct CommutatorResiduals {
    double residual = 0.0;       // max over (k,l) of the curvature/structure commutator identities
    double residual_alt = 0.0;   // third identity read with A_3 in place of A_1
    double rho_vs_A = 0.0;       // max |rho_1 - n A_1|, |rho_2 + n A_2|, |rho_3 - n A_3|
};
CommutatorResiduals curvature_commutators(const PointFrame& f);

struct CurvatureSplit {
    std::vector<Mat> Rprime;       // same layout as PointFrame::R
    double commutator = 0.0;       // max over (k,l), a of |[R'(e_k,e_l), J_a]|
    double reconstruction = 0.0;   // |R - R' - rho part|
};

/// R' = R - (1/2n) sum_a sign_a rho_a J_a. sign = {1,1,1} is the trace convention
/// of PointFrame::rho; other signs exist for negative controls.
CurvatureSplit curvature_split(const PointFrame& f, const std::array<double, 3>& sign = {1.0, 1.0, 1.0});

/// F_a(X,Y) = g(J_a X, Y).
std::array<Mat, 3> fundamental_forms(const PointFrame& f);
/// max over a of |F_a + F_a^T|.
double compatibility_residual(const PointFrame& f);

struct WeylParts {
    double wplus = 0.0;
    double wminus = 0.0;
    double orientation = 1.0;     // sign making F_1 self-dual
    double forms_residual = 0.0;  // max_a |*F_a - F_a| / |F_a| after orienting
};

/// Requires d = 4 and a Levi-Civita frame. Throws ArgumentError otherwise.
WeylParts weyl_asd(const PointFrame& f);

/// Weyl tensor W_{abcd} (index order of g(R(e_a,e_b)e_c, e_d)) at index ((a*d+b)*d+c)*d+e.
std::vector<double> weyl_tensor(const PointFrame& f);

} // namespace pqgeom
