#include "pqgeom/geometry.hpp"

#include "pqgeom/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pqgeom {

ManifoldSpec ManifoldSpec::blank(std::string name, Mode mode, std::size_t dim, std::vector<std::string> coords)
{
    ManifoldSpec s;
    s.name = std::move(name);
    s.mode = mode;
    s.dim = dim;
    if (coords.empty()) {
        for (std::size_t i = 0; i < dim; ++i) {
            coords.push_back((mode == Mode::frame ? "e" : "x") + std::to_string(i + 1));
        }
    }
    s.coords = std::move(coords);
    s.g.assign(dim * dim, ScalarExpr());
    for (auto& j : s.J) {
        j.assign(dim * dim, ScalarExpr());
    }
    s.structure = Tensor3(dim);
    s.box_lo.assign(dim, -1.0);
    s.box_hi.assign(dim, 1.0);
    return s;
}

void ManifoldSpec::validate() const
{
    if (dim == 0 || dim % 4 != 0) {
        throw SpecError("dimension must be a positive multiple of 4, got " + std::to_string(dim));
    }
    if (coords.size() != dim) {
        throw SpecError("expected " + std::to_string(dim) + " coordinate names, got " + std::to_string(coords.size()));
    }
    validate_coordinate_names(coords);
    const std::size_t d2 = dim * dim;
    if (g.size() != d2 || J[0].size() != d2 || J[1].size() != d2 || J[2].size() != d2) {
        throw SpecError("metric or structure field has the wrong number of components");
    }
    auto check_fields = [&](const std::vector<ScalarExpr>& fs, const char* what) {
        for (const auto& e : fs) {
            if (e.coordinate_bound() > dim) {
                throw SpecError(std::string(what) + " references a coordinate outside the chart");
            }
            if (mode == Mode::frame && !e.is_constant()) {
                throw SpecError(std::string(what) + " must be constant in frame mode");
            }
        }
    };
    check_fields(g, "metric");
    for (const auto& j : J) {
        check_fields(j, "structure field");
    }
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i + 1; j < dim; ++j) {
            if (!(g_at(i, j) == g_at(j, i))) {
                throw SpecError("metric is not symmetric at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
            }
        }
    }
    if (connection == ConnectionKind::explicit_gamma) {
        if (gamma.size() != d2 * dim) {
            throw SpecError("explicit connection needs Gamma components");
        }
        check_fields(gamma, "Gamma");
    }
    if (connection == ConnectionKind::levi_civita_plus_s) {
        if (S.size() != d2 * dim) {
            throw SpecError("levi-civita-plus-S connection needs S components");
        }
        check_fields(S, "S");
    }
    if (box_lo.size() != dim || box_hi.size() != dim) {
        throw SpecError("sample box must have one interval per coordinate");
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (!(box_lo[i] <= box_hi[i])) {
            throw SpecError("sample box interval " + std::to_string(i + 1) + " is empty");
        }
    }
    if (sample_points == 0) {
        throw SpecError("sample_points must be positive");
    }
    if (structure.dim() != dim) {
        throw SpecError("structure constants have the wrong shape");
    }
    if (mode == Mode::chart && structure.max_abs() != 0.0) {
        throw SpecError("structure constants are only allowed in frame mode");
    }
    if (mode == Mode::frame) {
        for (std::size_t k = 0; k < dim; ++k) {
            for (std::size_t i = 0; i < dim; ++i) {
                for (std::size_t j = 0; j < dim; ++j) {
                    if (structure(k, i, j) != -structure(k, j, i)) {
                        throw SpecError("structure constants are not antisymmetric");
                    }
                }
            }
        }
        // Jacobi: [e_i,[e_j,e_k]] + cyclic = 0.
        double worst = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                for (std::size_t k = 0; k < dim; ++k) {
                    for (std::size_t r = 0; r < dim; ++r) {
                        double sum = 0.0;
                        for (std::size_t m = 0; m < dim; ++m) {
                            sum += structure(m, j, k) * structure(r, i, m) + structure(m, k, i) * structure(r, j, m) +
                                   structure(m, i, j) * structure(r, k, m);
                        }
                        worst = std::max(worst, std::abs(sum));
                    }
                }
            }
        }
        if (worst >= 1e-10) {
            throw SpecError("structure constants violate the Jacobi identity (residual " + format_number(worst) + ")");
        }
    }
}

Jet2 field_jet(const ScalarExpr& e, std::span<const double> p, const EvalOptions& opts)
{
    const std::size_t d = p.size();
    if (opts.diff == Differentiation::jet || e.is_constant()) {
        return jet_eval(e, p);
    }
    const double h = opts.step;
    std::vector<double> q(p.begin(), p.end());
    auto at = [&](std::size_t i, double si, std::size_t j, double sj) {
        std::copy(p.begin(), p.end(), q.begin());
        q[i] += si * h;
        q[j] += sj * h;
        return evaluate(e, q);
    };
    const double f0 = evaluate(e, p);
    Jet2 r(d, f0);
    for (std::size_t i = 0; i < d; ++i) {
        std::copy(p.begin(), p.end(), q.begin());
        q[i] = p[i] + h;
        const double fp = evaluate(e, q);
        q[i] = p[i] - h;
        const double fm = evaluate(e, q);
        r.set_grad(i, (fp - fm) / (2.0 * h));
        r.set_hess(i, i, (fp - 2.0 * f0 + fm) / (h * h));
        for (std::size_t j = 0; j < i; ++j) {
            const double v = at(i, 1, j, 1) - at(i, 1, j, -1) - at(i, -1, j, 1) + at(i, -1, j, -1);
            r.set_hess(i, j, v / (4.0 * h * h));
        }
    }
    return r;
}

Mat wedge(const Vec& alpha, const Vec& beta) { return alpha * beta.transpose() - beta * alpha.transpose(); }

namespace {

struct MatJets {
    Mat value;
    std::vector<Mat> d1; // d1[k]
    std::vector<Mat> d2; // d2[k*d+l]
};

MatJets matrix_jets(const std::vector<ScalarExpr>& fields, std::size_t d, std::span<const double> p,
                    const EvalOptions& opts, bool symmetric)
{
    MatJets m;
    m.value = Mat::Zero(d, d);
    m.d1.assign(d, Mat::Zero(d, d));
    m.d2.assign(d * d, Mat::Zero(d, d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = symmetric ? i : 0; j < d; ++j) {
            const ScalarExpr& e = fields[i * d + j];
            if (e.is_zero()) {
                continue;
            }
            const Jet2 jet = field_jet(e, p, opts);
            auto put = [&](Mat& target, double v) {
                target(i, j) = v;
                if (symmetric) {
                    target(j, i) = v;
                }
            };
            put(m.value, jet.value());
            for (std::size_t k = 0; k < d; ++k) {
                put(m.d1[k], jet.grad(k));
                for (std::size_t l = 0; l < d; ++l) {
                    put(m.d2[k * d + l], jet.hess(k, l));
                }
            }
        }
    }
    return m;
}

void tensor_jets(const std::vector<ScalarExpr>& fields, std::size_t d, std::span<const double> p,
                 const EvalOptions& opts, Tensor3& value, std::vector<Tensor3>& d1)
{
    value = Tensor3(d);
    d1.assign(d, Tensor3(d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < d; ++k) {
                const ScalarExpr& e = fields[(i * d + j) * d + k];
                if (e.is_zero()) {
                    continue;
                }
                const Jet2 jet = field_jet(e, p, opts);
                value(i, j, k) = jet.value();
                for (std::size_t l = 0; l < d; ++l) {
                    d1[l](i, j, k) = jet.grad(l);
                }
            }
        }
    }
}

void check_signature(const Mat& g, std::size_t n, std::span<const double> p)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
    const Vec ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    std::string where = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        where += (i ? ", " : "") + format_number(p[i]);
    }
    where += ")";
    if (!(scale > 0.0) || ev.cwiseAbs().minCoeff() <= 1e-12 * scale) {
        throw DegeneracyError("singular metric at " + where);
    }
    std::size_t pos = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        pos += ev(i) > 0.0 ? 1 : 0;
    }
    if (pos != 2 * n) {
        throw DegeneracyError("metric signature (" + std::to_string(pos) + "," + std::to_string(ev.size() - pos) +
                              ") is not neutral at " + where);
    }
}

// Levi-Civita coefficients and their first derivatives from jets of g and the frame constants.
void levi_civita(PointFrame& f, Tensor3& gamma, std::vector<Tensor3>& dgamma)
{
    const std::size_t d = f.d;
    // c_{ab,m} = g_{mq} c^q_{ab}
    Tensor3 cl(d);
    std::vector<Tensor3> dcl(d, Tensor3(d));
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            for (std::size_t m = 0; m < d; ++m) {
                double s = 0.0;
                for (std::size_t q = 0; q < d; ++q) {
                    s += f.g(m, q) * f.c(q, a, b);
                }
                cl(m, a, b) = s;
                for (std::size_t r = 0; r < d; ++r) {
                    double ds = 0.0;
                    for (std::size_t q = 0; q < d; ++q) {
                        ds += f.dg[r](m, q) * f.c(q, a, b);
                    }
                    dcl[r](m, a, b) = ds;
                }
            }
        }
    }
    // A_{jkl} = 2 g(nabla_{e_j} e_k, e_l), stored at (l, j, k).
    Tensor3 A(d);
    std::vector<Tensor3> dA(d, Tensor3(d));
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t l = 0; l < d; ++l) {
                A(l, j, k) = f.dg[j](k, l) + f.dg[k](j, l) - f.dg[l](j, k) + cl(l, j, k) - cl(k, j, l) - cl(j, k, l);
                for (std::size_t m = 0; m < d; ++m) {
                    dA[m](l, j, k) = f.ddg[j * d + m](k, l) + f.ddg[k * d + m](j, l) - f.ddg[l * d + m](j, k) +
                                     dcl[m](l, j, k) - dcl[m](k, j, l) - dcl[m](j, k, l);
                }
            }
        }
    }
    std::vector<Mat> dginv(d);
    for (std::size_t m = 0; m < d; ++m) {
        dginv[m] = -f.ginv * f.dg[m] * f.ginv;
    }
    gamma = Tensor3(d);
    dgamma.assign(d, Tensor3(d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < d; ++k) {
                double s = 0.0;
                for (std::size_t l = 0; l < d; ++l) {
                    s += f.ginv(i, l) * A(l, j, k);
                }
                gamma(i, j, k) = 0.5 * s;
                for (std::size_t m = 0; m < d; ++m) {
                    double ds = 0.0;
                    for (std::size_t l = 0; l < d; ++l) {
                        ds += dginv[m](i, l) * A(l, j, k) + f.ginv(i, l) * dA[m](l, j, k);
                    }
                    dgamma[m](i, j, k) = 0.5 * ds;
                }
            }
        }
    }
}

void compute_curvature(PointFrame& f)
{
    const std::size_t d = f.d;
    std::vector<Mat> G(d), dG(d * d); // dG[l*d+k] = e_l(Gamma_k)
    for (std::size_t k = 0; k < d; ++k) {
        G[k] = f.gamma.dir(k);
        for (std::size_t l = 0; l < d; ++l) {
            dG[l * d + k] = f.dgamma[l].dir(k);
        }
    }
    f.R.assign(d * d, Mat::Zero(d, d));
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = 0; l < d; ++l) {
            Mat r = dG[k * d + l] - dG[l * d + k] + G[k] * G[l] - G[l] * G[k];
            for (std::size_t m = 0; m < d; ++m) {
                if (f.c(m, k, l) != 0.0) {
                    r -= f.c(m, k, l) * G[m];
                }
            }
            f.R[k * d + l] = r;
        }
    }
}

void compute_nijenhuis(PointFrame& f)
{
    const std::size_t d = f.d;
    for (std::size_t a = 0; a < 3; ++a) {
        const Mat& J = f.J.J[a];
        const auto& dJ = f.dJ[a];
        Tensor3& N = f.N[a];
        N = Tensor3(d);
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < d; ++k) {
                Vec jxjy = Vec::Zero(d), xy = Vec::Zero(d), jxy = Vec::Zero(d), xjy = Vec::Zero(d);
                for (std::size_t i = 0; i < d; ++i) {
                    double s = 0.0;
                    for (std::size_t b = 0; b < d; ++b) {
                        s += J(b, j) * dJ[b](i, k) - J(b, k) * dJ[b](i, j);
                        for (std::size_t q = 0; q < d; ++q) {
                            s += f.c(i, q, b) * J(q, j) * J(b, k);
                        }
                    }
                    jxjy(i) = s;
                    xy(i) = f.c(i, j, k);
                    double s1 = -dJ[k](i, j);
                    double s2 = dJ[j](i, k);
                    for (std::size_t q = 0; q < d; ++q) {
                        s1 += f.c(i, q, k) * J(q, j);
                        s2 += f.c(i, j, q) * J(q, k);
                    }
                    jxy(i) = s1;
                    xjy(i) = s2;
                }
                const Vec v = jxjy + kEps[a] * xy - J * jxy - J * xjy;
                for (std::size_t i = 0; i < d; ++i) {
                    N(i, j, k) = v(i);
                }
            }
        }
    }
}

void compute_nabla_J(PointFrame& f)
{
    const std::size_t d = f.d;
    std::vector<Mat> G(d), dG(d * d);
    for (std::size_t k = 0; k < d; ++k) {
        G[k] = f.gamma.dir(k);
        for (std::size_t l = 0; l < d; ++l) {
            dG[l * d + k] = f.dgamma[l].dir(k);
        }
    }
    for (std::size_t a = 0; a < 3; ++a) {
        const Mat& J = f.J.J[a];
        f.nablaJ[a].assign(d, Mat());
        f.dnablaJ[a].assign(d * d, Mat());
        for (std::size_t k = 0; k < d; ++k) {
            f.nablaJ[a][k] = f.dJ[a][k] + commutator(G[k], J);
            for (std::size_t l = 0; l < d; ++l) {
                f.dnablaJ[a][l * d + k] =
                    f.ddJ[a][k * d + l] + commutator(dG[l * d + k], J) + commutator(G[k], f.dJ[a][l]);
            }
        }
    }
}

// omega_a(e_k) from trace pairings of nabla J with the triple, each form read off
// from two of the three equations and averaged:
//   nabla J1 = -w3 J2 + w2 J3,  nabla J2 = w3 J1 + w1 J3,  nabla J3 = w2 J1 + w1 J2.
void compute_omegas(PointFrame& f)
{
    const std::size_t d = f.d;
    const double s = static_cast<double>(d); // 4n
    const auto& J = f.J.J;
    // pair(b, c, k) = Tr(J_b nabla_k J_c); dpair(b, c, l, k) = e_l of it.
    auto pair = [&](std::size_t b, std::size_t c, std::size_t k) { return (J[b] * f.nablaJ[c][k]).trace(); };
    auto dpair = [&](std::size_t b, std::size_t c, std::size_t l, std::size_t k) {
        return (f.dJ[b][l] * f.nablaJ[c][k]).trace() + (J[b] * f.dnablaJ[c][l * d + k]).trace();
    };
    auto om = [&](std::size_t a, auto&& P) {
        switch (a) {
        case 0: return 0.5 * (-P(2, 1) + P(1, 2)) / s;
        case 1: return 0.5 * (-P(2, 0) + P(0, 2)) / s;
        default: return 0.5 * (-P(1, 0) + P(0, 1)) / s;
        }
    };
    Mat partial[3]; // partial[a](l,k) = e_l(omega_a(e_k))
    for (std::size_t a = 0; a < 3; ++a) {
        f.omega[a] = Vec::Zero(d);
        partial[a] = Mat::Zero(d, d);
        for (std::size_t k = 0; k < d; ++k) {
            f.omega[a](k) = om(a, [&](std::size_t b, std::size_t c) { return pair(b, c, k); });
            for (std::size_t l = 0; l < d; ++l) {
                partial[a](l, k) = om(a, [&](std::size_t b, std::size_t c) { return dpair(b, c, l, k); });
            }
        }
    }
    double defect = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const double w1 = f.omega[0](k), w2 = f.omega[1](k), w3 = f.omega[2](k);
        defect = std::max(defect, max_abs(f.nablaJ[0][k] - (-w3 * J[1] + w2 * J[2])));
        defect = std::max(defect, max_abs(f.nablaJ[1][k] - (w3 * J[0] + w1 * J[2])));
        defect = std::max(defect, max_abs(f.nablaJ[2][k] - (w2 * J[0] + w1 * J[1])));
    }
    f.omega_defect = defect;
    for (std::size_t a = 0; a < 3; ++a) {
        Mat dw = partial[a] - partial[a].transpose();
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t l = 0; l < d; ++l) {
                for (std::size_t m = 0; m < d; ++m) {
                    dw(k, l) -= f.c(m, k, l) * f.omega[a](m);
                }
            }
        }
        f.domega[a] = dw;
    }
}

void compute_rho(PointFrame& f)
{
    const std::size_t d = f.d;
    for (std::size_t a = 0; a < 3; ++a) {
        f.rho[a] = Mat::Zero(d, d);
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t l = 0; l < d; ++l) {
                f.rho[a](k, l) = 0.5 * kEps[a] * (f.J.J[a] * f.R[k * d + l]).trace();
            }
        }
    }
}

} // namespace

PointFrame evaluate_point(const ManifoldSpec& spec, std::span<const double> p, const EvalOptions& opts)
{
    const std::size_t d = spec.dim;
    if (p.size() != d) {
        throw ArgumentError("point has " + std::to_string(p.size()) + " coordinates, expected " + std::to_string(d));
    }
    PointFrame f;
    f.d = d;
    f.n = d / 4;
    f.p.assign(p.begin(), p.end());
    f.c = spec.mode == Mode::frame ? spec.structure : Tensor3(d);

    MatJets gj = matrix_jets(spec.g, d, p, opts, true);
    f.g = std::move(gj.value);
    f.dg = std::move(gj.d1);
    f.ddg = std::move(gj.d2);
    check_signature(f.g, f.n, p);
    f.ginv = f.g.fullPivLu().inverse();

    for (std::size_t a = 0; a < 3; ++a) {
        MatJets jj = matrix_jets(spec.J[a], d, p, opts, false);
        f.J.J[a] = std::move(jj.value);
        f.dJ[a] = std::move(jj.d1);
        f.ddJ[a] = std::move(jj.d2);
    }

    levi_civita(f, f.gamma, f.dgamma);
    f.levi_civita = true;
    if (spec.connection == ConnectionKind::levi_civita_plus_s) {
        std::vector<Tensor3> dS;
        tensor_jets(spec.S, d, p, opts, f.S, dS);
        f.has_S = true;
        if (!opts.levi_civita) {
            f.gamma += f.S;
            for (std::size_t l = 0; l < d; ++l) {
                f.dgamma[l] += dS[l];
            }
            f.levi_civita = false;
        }
    } else if (spec.connection == ConnectionKind::explicit_gamma && !opts.levi_civita) {
        tensor_jets(spec.gamma, d, p, opts, f.gamma, f.dgamma);
        f.levi_civita = false;
    }

    compute_curvature(f);
    f.T = f.gamma.alternated() - f.c;
    compute_nijenhuis(f);
    compute_nabla_J(f);
    compute_omegas(f);
    compute_rho(f);
    return f;
}

std::array<Mat, 3> curvature_forms_A(const PointFrame& f)
{
    const auto& w = f.omega;
    return {
        f.domega[0] + wedge(w[1], w[2]),
        f.domega[1] + wedge(w[2], w[0]),
        f.domega[2] - wedge(w[0], w[1]),
    };
}

CommutatorResiduals curvature_commutators(const PointFrame& f)
{
    const std::size_t d = f.d;
    const auto A = curvature_forms_A(f);
    const auto& J = f.J.J;
    const double n = static_cast<double>(f.n);
    CommutatorResiduals r;
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = 0; l < d; ++l) {
            const Mat& R = f.R[k * d + l];
            const double a1 = A[0](k, l), a2 = A[1](k, l), a3 = A[2](k, l);
            double e = max_abs(commutator(R, J[0]) - (-a3 * J[1] + a2 * J[2]));
            e = std::max(e, max_abs(commutator(R, J[1]) - (a3 * J[0] + a1 * J[2])));
            const Mat c3 = commutator(R, J[2]);
            r.residual = std::max({r.residual, e, max_abs(c3 - (a2 * J[0] + a1 * J[1]))});
            r.residual_alt = std::max({r.residual_alt, e, max_abs(c3 - (a2 * J[0] + a3 * J[1]))});
            r.rho_vs_A = std::max({r.rho_vs_A, std::abs(f.rho[0](k, l) - n * a1), std::abs(f.rho[1](k, l) + n * a2),
                                   std::abs(f.rho[2](k, l) - n * a3)});
        }
    }
    return r;
}

CurvatureSplit curvature_split(const PointFrame& f, const std::array<double, 3>& sign)
{
    const std::size_t d = f.d;
    const double inv = 1.0 / (2.0 * static_cast<double>(f.n));
    CurvatureSplit out;
    out.Rprime.resize(d * d);
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = 0; l < d; ++l) {
            Mat part = Mat::Zero(d, d);
            for (std::size_t a = 0; a < 3; ++a) {
                part += inv * sign[a] * f.rho[a](k, l) * f.J.J[a];
            }
            const Mat& R = f.R[k * d + l];
            Mat rp = R - part;
            for (std::size_t a = 0; a < 3; ++a) {
                out.commutator = std::max(out.commutator, max_abs(commutator(rp, f.J.J[a])));
            }
            out.reconstruction = std::max(out.reconstruction, max_abs(R - rp - part));
            out.Rprime[k * d + l] = std::move(rp);
        }
    }
    return out;
}

std::array<Mat, 3> fundamental_forms(const PointFrame& f)
{
    return {f.J.J[0].transpose() * f.g, f.J.J[1].transpose() * f.g, f.J.J[2].transpose() * f.g};
}

double compatibility_residual(const PointFrame& f)
{
    double r = 0.0;
    for (const Mat& F : fundamental_forms(f)) {
        r = std::max(r, max_abs(F + F.transpose()));
    }
    return r;
}

std::vector<double> weyl_tensor(const PointFrame& f)
{
    const std::size_t d = f.d;
    auto idx = [d](std::size_t a, std::size_t b, std::size_t c, std::size_t e) { return ((a * d + b) * d + c) * d + e; };
    std::vector<double> rm(d * d * d * d, 0.0);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            const Mat lowered = f.g * f.R[a * d + b]; // (m, c) -> g_{m q} R^q_{c a b}
            for (std::size_t c = 0; c < d; ++c) {
                for (std::size_t e = 0; e < d; ++e) {
                    rm[idx(a, b, c, e)] = lowered(e, c);
                }
            }
        }
    }
    Mat ric = Mat::Zero(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t l = 0; l < d; ++l) {
            double s = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                s += f.R[i * d + j](i, l);
            }
            ric(j, l) = s;
        }
    }
    const double scal = (f.ginv.cwiseProduct(ric)).sum();
    const double dd = static_cast<double>(d);
    const Mat P = (ric - scal / (2.0 * (dd - 1.0)) * f.g) / (dd - 2.0);
    const Mat& g = f.g;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            for (std::size_t c = 0; c < d; ++c) {
                for (std::size_t e = 0; e < d; ++e) {
                    rm[idx(a, b, c, e)] -= P(a, e) * g(b, c) + P(b, c) * g(a, e) - P(a, c) * g(b, e) - P(b, e) * g(a, c);
                }
            }
        }
    }
    return rm;
}

WeylParts weyl_asd(const PointFrame& f)
{
    if (f.d != 4) {
        throw ArgumentError("Weyl decomposition needs dimension 4");
    }
    if (!f.levi_civita) {
        throw ArgumentError("Weyl decomposition needs the Levi-Civita connection");
    }
    const std::size_t d = 4;
    const std::vector<double> W = weyl_tensor(f);
    auto idx = [d](std::size_t a, std::size_t b, std::size_t c, std::size_t e) { return ((a * d + b) * d + c) * d + e; };
    std::array<std::pair<std::size_t, std::size_t>, 6> pairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
    auto levi = [](std::size_t a, std::size_t b, std::size_t c, std::size_t e) {
        const std::array<std::size_t, 4> v{a, b, c, e};
        int sgn = 1;
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = i + 1; j < 4; ++j) {
                if (v[i] == v[j]) {
                    return 0;
                }
                if (v[i] > v[j]) {
                    sgn = -sgn;
                }
            }
        }
        return sgn;
    };
    const double vol = std::sqrt(std::abs(f.g.determinant()));
    // M[(a,b),(p,q)] = X_{ab cd} g^{cp} g^{dq}
    auto raise = [&](auto&& X) {
        Eigen::Matrix<double, 6, 6> M;
        for (std::size_t r = 0; r < 6; ++r) {
            for (std::size_t s = 0; s < 6; ++s) {
                const auto [a, b] = pairs[r];
                const auto [p, q] = pairs[s];
                double sum = 0.0;
                for (std::size_t c = 0; c < d; ++c) {
                    for (std::size_t e = 0; e < d; ++e) {
                        sum += X(a, b, c, e) * f.ginv(c, p) * f.ginv(e, q);
                    }
                }
                M(r, s) = sum;
            }
        }
        return M;
    };
    const Eigen::Matrix<double, 6, 6> Mw = raise([&](auto a, auto b, auto c, auto e) { return W[idx(a, b, c, e)]; });
    Eigen::Matrix<double, 6, 6> H = raise([&](auto a, auto b, auto c, auto e) { return vol * levi(a, b, c, e); });

    auto as_vec = [&](const Mat& F) {
        Eigen::Matrix<double, 6, 1> v;
        for (std::size_t r = 0; r < 6; ++r) {
            v(r) = F(pairs[r].first, pairs[r].second);
        }
        return v;
    };
    const auto F = fundamental_forms(f);
    WeylParts out;
    const auto f1 = as_vec(F[0]);
    if ((H * f1 + f1).norm() < (H * f1 - f1).norm()) {
        H = -H;
        out.orientation = -1.0;
    }
    for (const Mat& Fa : F) {
        const auto v = as_vec(Fa);
        out.forms_residual = std::max(out.forms_residual, (H * v - v).cwiseAbs().maxCoeff() / std::max(1e-300, v.cwiseAbs().maxCoeff()));
    }
    const Eigen::Matrix<double, 6, 6> I = Eigen::Matrix<double, 6, 6>::Identity();
    const Eigen::Matrix<double, 6, 6> Pp = 0.5 * (I + H), Pm = 0.5 * (I - H);
    out.wplus = (Pp * Mw * Pp).norm();
    out.wminus = (Pm * Mw * Pm).norm();
    return out;
}

} // namespace pqgeom
