#include "pqgeom/checks.hpp"

#include "pqgeom/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <thread>

namespace pqgeom {

namespace {

using json = nlohmann::ordered_json;

std::uint64_t splitmix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-check stream so that adding a check never shifts another one's samples.
std::uint64_t check_seed(std::uint64_t seed, std::string_view name)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : name) {
        h = (h ^ c) * 1099511628211ULL;
    }
    return splitmix(seed ^ h);
}

struct JSamples {
    std::vector<Mat> minus;
    std::vector<Mat> plus;
};

JSamples sample_structures(const StructureTriple& t, std::uint64_t seed, const CheckOptions& o)
{
    JSamples s;
    for (const auto& b : sample_hyperboloid(Sheet::minus, o.j_samples, splitmix(seed + 1), o.t_max)) {
        s.minus.push_back(build_J(b, t));
    }
    for (const auto& b : sample_hyperboloid(Sheet::plus, o.j_samples, splitmix(seed + 2), o.t_max)) {
        s.plus.push_back(build_J(b, t));
    }
    return s;
}

std::vector<StructureTriple> sample_bases(const StructureTriple& t, std::uint64_t seed, const CheckOptions& o)
{
    Rng rng(splitmix(seed + 3));
    std::vector<StructureTriple> out;
    for (const auto& b : sample_hyperboloid(Sheet::minus, o.j_samples, splitmix(seed + 1), o.t_max)) {
        out.push_back(admissible_basis(b, t, rng));
    }
    return out;
}

double judged_max(const std::vector<Residual>& r)
{
    double m = 0.0;
    for (const auto& x : r) {
        if (x.judged) {
            m = std::max(m, x.value);
        }
    }
    return m;
}

double residual_value(const PointRecord& r, std::string_view name)
{
    for (const auto& x : r.residuals) {
        if (x.name == name) {
            return x.value;
        }
    }
    return 0.0;
}

enum class Bundle { vanishing, nonvanishing, mixed, grey };

const char* bundle_name(Bundle b)
{
    switch (b) {
    case Bundle::vanishing: return "vanishing";
    case Bundle::nonvanishing: return "nonvanishing";
    case Bundle::mixed: return "mixed";
    case Bundle::grey: return "between-thresholds";
    }
    return "?";
}

Bundle classify(const std::vector<double>& values, double tol, double factor)
{
    bool any_small = false, any_large = false, all_small = true, all_large = true;
    for (double v : values) {
        const bool small = v < tol;
        const bool large = v > factor * tol;
        any_small |= small;
        any_large |= large;
        all_small &= small;
        all_large &= large;
    }
    if (all_small) {
        return Bundle::vanishing;
    }
    if (all_large) {
        return Bundle::nonvanishing;
    }
    return any_small && any_large ? Bundle::mixed : Bundle::grey;
}

CheckReport make_report(std::string_view name, const CheckContext& ctx, double tol, std::uint64_t seed)
{
    CheckReport r;
    r.name = std::string(name);
    r.spec = ctx.spec().name;
    r.tolerance = tol;
    r.seed = seed;
    return r;
}

using PointFn = std::function<std::vector<Residual>(std::size_t)>;

void collect(CheckReport& r, const CheckContext& ctx, const PointFn& fn)
{
    for (std::size_t i = 0; i < ctx.points().size(); ++i) {
        if (!ctx.frame(i)) {
            continue;
        }
        r.points.push_back({i, ctx.points()[i], fn(i)});
    }
    r.points_used = r.points.size();
    json maxima = json::object();
    for (const auto& p : r.points) {
        for (const auto& x : p.residuals) {
            if (!maxima.contains(x.name) || maxima[x.name].get<double>() < x.value) {
                maxima[x.name] = x.value;
            }
        }
    }
    r.summary["max_residuals"] = maxima;
}

bool no_points(CheckReport& r)
{
    if (r.points_used == 0) {
        r.verdict = Verdict::inconclusive;
        r.note = "no usable sample points";
        return true;
    }
    return false;
}

void threshold_verdict(CheckReport& r, double factor)
{
    if (no_points(r)) {
        return;
    }
    double worst = 0.0;
    for (const auto& p : r.points) {
        worst = std::max(worst, judged_max(p.residuals));
    }
    r.verdict = worst < r.tolerance ? Verdict::holds : worst > factor * r.tolerance ? Verdict::fails : Verdict::inconclusive;
}

// Equivalence checks: at each point the judged residuals vanish together or are
// large together. A split point refutes the equivalence; a grey one is inconclusive.
void bundle_verdict(CheckReport& r, double factor)
{
    if (no_points(r)) {
        return;
    }
    std::map<std::string, std::size_t> counts;
    for (const auto& p : r.points) {
        std::vector<double> v;
        for (const auto& x : p.residuals) {
            if (x.judged) {
                v.push_back(x.value);
            }
        }
        counts[bundle_name(classify(v, r.tolerance, factor))]++;
    }
    json c = json::object();
    for (const char* k : {"vanishing", "nonvanishing", "mixed", "between-thresholds"}) {
        c[k] = counts[k];
    }
    r.summary["bundle_points"] = c;
    const std::size_t n = r.points_used;
    r.summary["bundle"] = counts["vanishing"] == n ? "vanishing" : counts["nonvanishing"] == n ? "nonvanishing" : "mixed";
    r.verdict = counts["mixed"] > 0                 ? Verdict::fails
                : counts["between-thresholds"] > 0 ? Verdict::inconclusive
                                                   : Verdict::holds;
}

// Marks the report inconclusive when a premise fails at some usable point.
void premise(CheckReport& r, std::size_t bad, const std::string& what)
{
    if (bad > 0 && r.points_used > 0) {
        r.verdict = Verdict::inconclusive;
        r.note = what + " at " + std::to_string(bad) + " of " + std::to_string(r.points_used) + " point(s)";
    }
}

std::size_t count_points(const CheckContext& ctx, bool lc, const std::function<bool(const PointFrame&)>& pred)
{
    std::size_t n = 0;
    for (std::size_t i = 0; i < ctx.points().size(); ++i) {
        if (!ctx.frame(i)) {
            continue;
        }
        const PointFrame* f = lc ? ctx.lc_frame(i) : ctx.frame(i);
        if (pred(*f)) {
            ++n;
        }
    }
    return n;
}

std::vector<Residual> torsion02_residuals(const Tensor3& T, const StructureTriple& t, const JSamples& js)
{
    double zm = 0.0, zp = 0.0;
    for (const Mat& J : js.minus) {
        zm = std::max(zm, proj02(T, J, -1.0).max_abs());
    }
    for (const Mat& J : js.plus) {
        zp = std::max(zp, proj02(T, J, 1.0).max_abs());
    }
    return {
        {"z_minus_max", zm},
        {"z_plus_max", zp},
        {"basis_J1", proj02(T, t.J[0], 1.0).max_abs()},
        {"basis_J2", proj02(T, t.J[1], 1.0).max_abs()},
        {"basis_J3", proj02(T, t.J[2], -1.0).max_abs()},
    };
}

double max_s_commutator(const Tensor3& S, const std::vector<Mat>& Js, double sign)
{
    double m = 0.0;
    for (const Mat& J : Js) {
        m = std::max(m, s_commutator_residual(S, J, sign));
    }
    return m;
}

// max over the basis X of |s^1(J1X) - s^2(J2X)| + |s^2(J2X) - s^3(J3X)|.
double s_relation(const SSplit& sp, const StructureTriple& t)
{
    const Vec a = t.J[0].transpose() * sp.s[0];
    const Vec b = t.J[1].transpose() * sp.s[1];
    const Vec c = t.J[2].transpose() * sp.s[2];
    return ((a - b).cwiseAbs() + (b - c).cwiseAbs()).maxCoeff();
}

Tensor3 s_field(const PointFrame& f) { return f.has_S ? f.S : Tensor3(f.d); }

// The J3-vertical member of idric_cyclic in another admissible basis, with the
// Ricci forms recomputed by traces against that basis.
double curv_in_basis(const PointFrame& f, const StructureTriple& b)
{
    const std::size_t d = f.d;
    std::array<Mat, 2> rho;
    for (std::size_t a = 0; a < 2; ++a) {
        rho[a] = Mat::Zero(d, d);
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t l = 0; l < d; ++l) {
                rho[a](k, l) = 0.5 * kEps[a] * (b.J[a] * f.R[k * d + l]).trace();
            }
        }
    }
    const Mat& J3 = b.J[2];
    return max_abs(J3.transpose() * rho[1] * J3 - rho[1] + J3.transpose() * rho[0] + rho[0] * J3);
}

std::vector<Residual> idric_residuals(const PointFrame& f, std::uint64_t seed, const CheckOptions& o)
{
    const auto lit = idric_cyclic_literal(f.rho, f.J);
    const auto fix = idric_cyclic(f.rho, f.J);
    double sampled = 0.0;
    for (const auto& b : sample_bases(f.J, seed, o)) {
        sampled = std::max(sampled, curv_in_basis(f, b));
    }
    return {
        {"cyclic_b1", max_abs(fix[2])},
        {"cyclic_b2", max_abs(fix[0])},
        {"cyclic_b3", max_abs(fix[1])},
        {"curv_sampled_bases", sampled},
        {"cyclic_b3_literal", max_abs(lit[1]), false},
        {"pq_defect", f.omega_defect, false},
    };
}

// Covariant torsion T(X,Y,Z) = g(T(X,Y), Z), index (j*d+k)*d+l.
std::vector<double> lower_torsion(const PointFrame& f)
{
    const std::size_t d = f.d;
    std::vector<double> t(d * d * d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t l = 0; l < d; ++l) {
                double s = 0.0;
                for (std::size_t m = 0; m < d; ++m) {
                    s += f.T(m, j, k) * f.g(m, l);
                }
                t[(j * d + k) * d + l] = s;
            }
        }
    }
    return t;
}

// Inserts J into the flagged slots of a covariant 3-tensor.
std::vector<double> with_J(const std::vector<double>& t, const Mat& J, std::size_t d, std::array<bool, 3> slots)
{
    std::vector<double> cur = t;
    for (std::size_t s = 0; s < 3; ++s) {
        if (!slots[s]) {
            continue;
        }
        std::vector<double> next(d * d * d, 0.0);
        for (std::size_t i0 = 0; i0 < d; ++i0) {
            for (std::size_t i1 = 0; i1 < d; ++i1) {
                for (std::size_t i2 = 0; i2 < d; ++i2) {
                    std::array<std::size_t, 3> src{i0, i1, i2};
                    const std::size_t own = src[s];
                    double sum = 0.0;
                    for (std::size_t m = 0; m < d; ++m) {
                        if (J(m, own) != 0.0) {
                            src[s] = m;
                            sum += J(m, own) * cur[(src[0] * d + src[1]) * d + src[2]];
                        }
                    }
                    next[(i0 * d + i1) * d + i2] = sum;
                }
            }
        }
        cur = std::move(next);
    }
    return cur;
}

// ---------------------------------------------------------------------------

CheckReport check_par1(const CheckContext& ctx, const CheckOptions& o)
{
    CheckReport r = make_report("par1", ctx, o.tol.algebraic, o.seed);
    collect(r, ctx, [&](std::size_t i) {
        const auto& J = ctx.frame(i)->J.J;
        const Mat I = Mat::Identity(J[0].rows(), J[0].cols());
        return std::vector<Residual>{
            {"J1_squared", max_abs(J[0] * J[0] - I)},
            {"J2_squared", max_abs(J[1] * J[1] - I)},
            {"J3_squared", max_abs(J[2] * J[2] + I)},
            {"J1J2_minus_J3", max_abs(J[0] * J[1] - J[2])},
            {"J1J2_anticommute", max_abs(J[0] * J[1] + J[1] * J[0])},
        };
    });
    threshold_verdict(r, o.tol.fail_factor);
    return r;
}

CheckReport check_compat(const CheckContext& ctx, const CheckOptions& o)
{
    CheckReport r = make_report("compat", ctx, o.tol.algebraic, o.seed);
    collect(r, ctx, [&](std::size_t i) {
        const auto F = fundamental_forms(*ctx.frame(i));
        return std::vector<Residual>{
            {"J1", max_abs(F[0] + F[0].transpose())},
            {"J2", max_abs(F[1] + F[1].transpose())},
            {"J3", max_abs(F[2] + F[2].transpose())},
        };
    });
    threshold_verdict(r, o.tol.fail_factor);
    return r;
}

CheckReport check_ltor(const CheckContext& ctx, const CheckOptions& o)
{
    const std::uint64_t seed = check_seed(o.seed, "ltor");
    CheckReport r = make_report("ltor", ctx, o.tol.first, seed);
    double worst_ratio = 0.0;
    bool have_ratio = false;
    collect(r, ctx, [&](std::size_t i) {
        const PointFrame& f = *ctx.frame(i);
        auto res = torsion02_residuals(f.T, f.J, sample_structures(f.J, seed, o));
        const double zm = res[0].value, zp = res[1].value;
        double ratio = 1.0;
        if (zm >= r.tolerance || zp >= r.tolerance) {
            ratio = std::max(zm, zp) / std::max(std::min(zm, zp), std::numeric_limits<double>::min());
            worst_ratio = std::max(worst_ratio, ratio);
            have_ratio = true;
        }
        res.push_back({"z_ratio", ratio, false});
        return res;
    });
    threshold_verdict(r, o.tol.fail_factor);
    r.summary["max_z_ratio"] = have_ratio ? json(worst_ratio) : json(nullptr);
    return r;
}

CheckReport check_idric(const CheckContext& ctx, const CheckOptions& o)
{
    const std::uint64_t seed = check_seed(o.seed, "idric");
    CheckReport r = make_report("idric", ctx, o.tol.curvature, seed);
    collect(r, ctx, [&](std::size_t i) { return idric_residuals(*ctx.frame(i), seed, o); });
    threshold_verdict(r, o.tol.fail_factor);
    double literal = 0.0;
    for (const auto& p : r.points) {
        literal = std::max(literal, residual_value(p, "cyclic_b3_literal"));
    }
    r.summary["literal_b3_form_below_tolerance"] = r.points_used > 0 && literal < r.tolerance;
    const double tol = o.tol.first;
    premise(r, count_points(ctx, false, [&](const PointFrame& f) { return f.omega_defect >= tol; }),
            "connection is not para-quaternionic");
    return r;
}

CheckReport check_theorem_four(const CheckContext& ctx, const CheckOptions& o)
{
    if (ctx.spec().dim != 4) {
        throw ArgumentError("theorem-four needs a 4-dimensional spec");
    }
    const std::uint64_t seed = check_seed(o.seed, "idric");
    CheckReport r = make_report("theorem-four", ctx, o.tol.curvature, seed);
    const double tau = o.tol.curvature;
    std::size_t asd = 0, idric = 0, agree = 0;
    collect(r, ctx, [&](std::size_t i) {
        const PointFrame& f = *ctx.lc_frame(i);
        const WeylParts w = weyl_asd(f);
        const double id = judged_max(idric_residuals(f, seed, o));
        const bool i1 = w.wplus < tau;
        const bool i2 = id < tau;
        asd += i1;
        idric += i2;
        agree += i1 == i2;
        return std::vector<Residual>{
            {"indicator_disagreement", i1 == i2 ? 0.0 : 1.0},
            {"wplus", w.wplus, false},
            {"idric", id, false},
            {"wminus", w.wminus, false},
            {"asd_indicator", i1 ? 1.0 : 0.0, false},
            {"idric_indicator", i2 ? 1.0 : 0.0, false},
            {"forms_residual", w.forms_residual, false},
        };
    });
    r.summary["asd_points"] = asd;
    r.summary["idric_points"] = idric;
    r.summary["agreement_rate"] = r.points_used ? static_cast<double>(agree) / static_cast<double>(r.points_used) : 0.0;
    if (!no_points(r)) {
        r.verdict = agree == r.points_used ? Verdict::holds : Verdict::fails;
    }
    const double alg = o.tol.algebraic, first = o.tol.first;
    premise(r,
            count_points(ctx, true,
                         [&](const PointFrame& f) { return compatibility_residual(f) >= alg || f.omega_defect >= first; }),
            "metric is not hyperparahermitian or its Levi-Civita connection is not para-quaternionic");
    return r;
}

bool has_difference_tensor(const CheckContext& ctx) { return ctx.spec().connection == ConnectionKind::levi_civita_plus_s; }

// Shared premise of the difference-tensor checks: the base connection is
// para-quaternionic and S splits as S0 + sum s^a J_a with S0 commuting with the triple.
void s_premise(CheckReport& r, const CheckContext& ctx, const CheckOptions& o)
{
    if (!has_difference_tensor(ctx)) {
        r.note = "spec has no difference tensor; S = 0";
        return;
    }
    const double tol = o.tol.first;
    std::size_t bad = 0;
    for (const auto& p : r.points) {
        const PointFrame& f = *ctx.frame(p.index);
        bad += s_split(s_field(f), f.J).residual >= tol || ctx.lc_frame(p.index)->omega_defect >= tol;
    }
    premise(r, bad, "difference tensor or base connection is not para-quaternionic");
}

CheckReport check_prop_t25(const CheckContext& ctx, const CheckOptions& o)
{
    const std::uint64_t seed = check_seed(o.seed, "prop-t25");
    CheckReport r = make_report("prop-t25", ctx, o.tol.first, seed);
    collect(r, ctx, [&](std::size_t i) {
        const PointFrame& f = *ctx.frame(i);
        const Tensor3 S = s_field(f);
        const JSamples js = sample_structures(f.J, seed, o);
        const SSplit sp = s_split(S, f.J);
        return std::vector<Residual>{
            {"s_relation", s_relation(sp, f.J)},
            {"commutator_minus", max_s_commutator(S, js.minus, 1.0)},
            {"commutator_plus", max_s_commutator(S, js.plus, 1.0)},
            {"s_split_residual", sp.residual, false},
        };
    });
    bundle_verdict(r, o.tol.fail_factor);
    s_premise(r, ctx, o);
    return r;
}

CheckReport check_cor_t27(const CheckContext& ctx, const CheckOptions& o)
{
    const std::uint64_t seed = check_seed(o.seed, "cor-t27");
    CheckReport r = make_report("cor-t27", ctx, o.tol.first, seed);
    collect(r, ctx, [&](std::size_t i) {
        const PointFrame& f = *ctx.frame(i);
        const PointFrame& base = *ctx.lc_frame(i);
        const JSamples js = sample_structures(f.J, seed, o);
        double diff = 0.0;
        for (const Mat& J : js.minus) {
            diff = std::max(diff, (proj02(f.T, J, -1.0) - proj02(base.T, J, -1.0)).max_abs());
        }
        for (const Mat& J : js.plus) {
            diff = std::max(diff, (proj02(f.T, J, 1.0) - proj02(base.T, J, 1.0)).max_abs());
        }
        return std::vector<Residual>{
            {"s_relation", s_relation(s_split(s_field(f), f.J), f.J)},
            {"torsion02_difference", diff},
        };
    });
    bundle_verdict(r, o.tol.fail_factor);
    s_premise(r, ctx, o);
    return r;
}

CheckReport check_cor_t272(const CheckContext& ctx, const CheckOptions& o)
{
    const std::uint64_t seed = check_seed(o.seed, "cor-t272");
    CheckReport r = make_report("cor-t272", ctx, o.tol.first, seed);
    collect(r, ctx, [&](std::size_t i) {
        const PointFrame& f = *ctx.frame(i);
        const Tensor3 S = s_field(f);
        const JSamples js = sample_structures(f.J, seed, o);
        const SSplit sp = s_split(S, f.J);
        double smax = 0.0;
        for (const auto& s : sp.s) {
            smax = std::max(smax, s.cwiseAbs().maxCoeff());
        }
        return std::vector<Residual>{
            {"s_max", smax},
            {"anti_commutator_minus", max_s_commutator(S, js.minus, -1.0)},
            {"anti_commutator_plus", max_s_commutator(S, js.plus, -1.0)},
        };
    });
    bundle_verdict(r, o.tol.fail_factor);
    s_premise(r, ctx, o);
    return r;
}

struct SpanFit {
    double residual = 0.0;
    Eigen::Index rank = 0;
};

// Least-squares distance of v from the column span of A, rank by pivoted QR.
SpanFit span_fit(const Mat& A, const Vec& v)
{
    Eigen::ColPivHouseholderQR<Mat> qr(A);
    qr.setThreshold(1e-10);
    SpanFit s;
    s.rank = qr.rank();
    s.residual = (v - A * qr.solve(v)).cwiseAbs().maxCoeff();
    return s;
}

CheckReport check_zamkovoy(const CheckContext& ctx, const CheckOptions& o)
{
    const std::uint64_t seed = check_seed(o.seed, "zamkovoy-pq");
    CheckReport r = make_report("zamkovoy-pq", ctx, o.tol.first, seed);
    std::size_t resampled = 0, dropped = 0;
    collect(r, ctx, [&](std::size_t i) {
        const PointFrame& f = *ctx.frame(i);
        const std::size_t d = f.d;
        const auto full = static_cast<Eigen::Index>(std::min<std::size_t>(6, d));
        Rng rng(splitmix(seed ^ (0x51ed27ULL * (i + 1))));
        double lit = 0.0, ext = 0.0;
        std::array<double, 3> single{0.0, 0.0, 0.0};
        for (std::size_t pair = 0; pair < o.vector_pairs; ++pair) {
            bool done = false;
            for (int attempt = 0; attempt <= 8 && !done; ++attempt) {
                Vec X(d), Y(d);
                for (std::size_t k = 0; k < d; ++k) {
                    X(k) = rng.uniform(-1.0, 1.0);
                    Y(k) = rng.uniform(-1.0, 1.0);
                }
                Mat A(d, 6), B(d, 8);
                for (std::size_t a = 0; a < 3; ++a) {
                    A.col(2 * a) = f.J.J[a] * X;
                    A.col(2 * a + 1) = f.J.J[a] * Y;
                }
                B << A, X, Y;
                const Vec v = f.N[0].apply(X, Y) + f.N[1].apply(X, Y) - f.N[2].apply(X, Y);
                const SpanFit s = span_fit(A, v);
                if (s.rank < full) {
                    ++resampled;
                    continue;
                }
                lit = std::max(lit, s.residual);
                ext = std::max(ext, span_fit(B, v).residual);
                for (std::size_t a = 0; a < 3; ++a) {
                    single[a] = std::max(single[a], span_fit(A, f.N[a].apply(X, Y)).residual);
                }
                done = true;
            }
            dropped += !done;
        }
        return std::vector<Residual>{
            {"span_literal", lit},
            {"span_with_XY", ext, false},
            {"span_N1", single[0], false},
            {"span_N2", single[1], false},
            {"span_N3", single[2], false},
        };
    });
    threshold_verdict(r, o.tol.fail_factor);
    r.summary["resampled_pairs"] = resampled;
    r.summary["dropped_pairs"] = dropped;
    if (dropped > 0) {
        r.note = std::to_string(dropped) + " vector pair(s) skipped after 8 degenerate resamples";
    }
    return r;
}

CheckReport check_pqkt(const CheckContext& ctx, const CheckOptions& o)
{
    const std::uint64_t seed = check_seed(o.seed, "ltor");
    CheckReport r = make_report("pqkt", ctx, o.tol.first, seed);
    collect(r, ctx, [&](std::size_t i) {
        const PointFrame& f = *ctx.frame(i);
        const std::size_t d = f.d;
        const auto t = lower_torsion(f);
        double skew = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < d; ++k) {
                for (std::size_t l = 0; l < d; ++l) {
                    skew = std::max(skew, std::abs(t[(j * d + k) * d + l] + t[(j * d + l) * d + k]));
                }
            }
        }
        // T + eps_a (T(JX,JY,Z) + T(JX,Y,JZ) + T(X,JY,JZ)) = 0
        std::array<double, 3> type{0.0, 0.0, 0.0};
        for (std::size_t a = 0; a < 3; ++a) {
            const Mat& J = f.J.J[a];
            const auto t12 = with_J(t, J, d, {true, true, false});
            const auto t13 = with_J(t, J, d, {true, false, true});
            const auto t23 = with_J(t, J, d, {false, true, true});
            for (std::size_t q = 0; q < t.size(); ++q) {
                type[a] = std::max(type[a], std::abs(t[q] + kEps[a] * (t12[q] + t13[q] + t23[q])));
            }
        }
        double metric = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const Mat G = f.gamma.dir(k);
            metric = std::max(metric, max_abs(f.dg[k] - G.transpose() * f.g - f.g * G));
        }
        double part02 = 0.0;
        for (const auto& x : torsion02_residuals(f.T, f.J, sample_structures(f.J, seed, o))) {
            part02 = std::max(part02, x.value);
        }
        return std::vector<Residual>{
            {"total_skew", skew},
            {"type_J1", type[0]},
            {"type_J2", type[1]},
            {"type_J3", type[2]},
            {"metric", metric},
            {"torsion02", part02},
            {"pq_defect", f.omega_defect},
        };
    });
    threshold_verdict(r, o.tol.fail_factor);
    return r;
}

CheckReport check_cor_cur(const CheckContext& ctx, const CheckOptions& o)
{
    const std::uint64_t ltor_seed = check_seed(o.seed, "ltor");
    const std::uint64_t idric_seed = check_seed(o.seed, "idric");
    CheckReport r = make_report("cor-cur", ctx, o.tol.curvature, idric_seed);
    if (ctx.spec().dim < 8) {
        r.verdict = Verdict::inconclusive;
        r.note = "the torsion-to-curvature implication is stated for dimension 4n with n >= 2";
        r.summary["implication"] = "not-applicable";
        return r;
    }
    std::size_t antecedent = 0;
    collect(r, ctx, [&](std::size_t i) {
        const PointFrame& f = *ctx.frame(i);
        double ltor = 0.0;
        for (const auto& x : torsion02_residuals(f.T, f.J, sample_structures(f.J, ltor_seed, o))) {
            ltor = std::max(ltor, x.value);
        }
        const bool holds = ltor < o.tol.first && f.omega_defect < o.tol.first;
        antecedent += holds;
        return std::vector<Residual>{
            {"idric", judged_max(idric_residuals(f, idric_seed, o)), holds},
            {"ltor", ltor, false},
            {"omega_defect", f.omega_defect, false},
            {"antecedent", holds ? 1.0 : 0.0, false},
        };
    });
    r.summary["antecedent_points"] = antecedent;
    if (no_points(r)) {
        return r;
    }
    if (antecedent == 0) {
        r.verdict = Verdict::inconclusive;
        r.summary["implication"] = "vacuous";
        r.note = "torsion condition or omega pairing fails at every point; implication is vacuous";
        return r;
    }
    r.summary["implication"] = "tested";
    threshold_verdict(r, o.tol.fail_factor);
    return r;
}

} // namespace

std::string_view verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

const std::vector<std::string>& check_names()
{
    static const std::vector<std::string> names{"par1",    "compat",   "ltor",        "idric", "theorem-four", "prop-t25",
                                                "cor-t27", "cor-t272", "zamkovoy-pq", "pqkt",  "cor-cur"};
    return names;
}

std::vector<std::string> default_checks(const ManifoldSpec& spec)
{
    std::vector<std::string> out;
    for (const auto& n : check_names()) {
        if ((n == "theorem-four" && spec.dim != 4) || (n == "cor-cur" && spec.dim < 8)) {
            continue;
        }
        out.push_back(n);
    }
    return out;
}

std::vector<std::vector<double>> sample_points(const ManifoldSpec& spec, std::size_t count, std::uint64_t seed)
{
    Rng rng(splitmix(seed));
    std::vector<std::vector<double>> pts(count, std::vector<double>(spec.dim));
    for (auto& p : pts) {
        for (std::size_t k = 0; k < spec.dim; ++k) {
            p[k] = rng.uniform(spec.box_lo[k], spec.box_hi[k]);
        }
    }
    return pts;
}

CheckContext::CheckContext(const ManifoldSpec& spec, std::vector<std::vector<double>> points)
    : spec_(spec), points_(std::move(points)), frames_(points_.size()), lc_frames_(points_.size())
{
    // Points are independent; workers fill their own slots and the skip list is
    // assembled afterwards in index order.
    std::vector<std::string> reasons(points_.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < points_.size(); i = next++) {
            try {
                frames_[i] = evaluate_point(spec_, points_[i]);
            } catch (const EvalError& e) {
                reasons[i] = e.what();
            } catch (const DegeneracyError& e) {
                reasons[i] = e.what();
            }
        }
    };
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t nthreads = std::min(hw, points_.size() / 4 + 1);
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < nthreads; ++t) {
        pool.emplace_back(work);
    }
    work();
    for (auto& t : pool) {
        t.join();
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!frames_[i]) {
            skipped_.push_back({i, points_[i], reasons[i]});
        }
    }
}

const PointFrame* CheckContext::lc_frame(std::size_t i) const
{
    if (!frames_[i]) {
        return nullptr;
    }
    if (spec_.connection == ConnectionKind::levi_civita) {
        return &*frames_[i];
    }
    if (!lc_frames_[i]) {
        EvalOptions opts;
        opts.levi_civita = true;
        lc_frames_[i] = evaluate_point(spec_, points_[i], opts);
    }
    return &*lc_frames_[i];
}

std::size_t CheckContext::usable() const
{
    return static_cast<std::size_t>(std::count_if(frames_.begin(), frames_.end(), [](const auto& f) { return f.has_value(); }));
}

CheckReport run_check(std::string_view name, const CheckContext& ctx, const CheckOptions& opts)
{
    using Fn = CheckReport (*)(const CheckContext&, const CheckOptions&);
    static const std::map<std::string, Fn, std::less<>> table{
        {"par1", check_par1},       {"compat", check_compat},     {"ltor", check_ltor},
        {"idric", check_idric},     {"theorem-four", check_theorem_four}, {"prop-t25", check_prop_t25},
        {"cor-t27", check_cor_t27}, {"cor-t272", check_cor_t272}, {"zamkovoy-pq", check_zamkovoy},
        {"pqkt", check_pqkt},       {"cor-cur", check_cor_cur},
    };
    const auto it = table.find(name);
    if (it == table.end()) {
        throw ArgumentError("unknown check '" + std::string(name) + "'");
    }
    return it->second(ctx, opts);
}

std::array<Mat, 3> idric_cyclic_literal(const std::array<Mat, 3>& rho, const StructureTriple& t)
{
    std::array<Mat, 3> out;
    for (std::size_t a = 0; a < 3; ++a) {
        const std::size_t b = (a + 1) % 3, c = (a + 2) % 3;
        const Mat& J = t.J[b];
        out[a] = J.transpose() * rho[a] * J + kEps[b] * rho[a] - kEps[c] * (J.transpose() * rho[c] + rho[c] * J);
    }
    return out;
}

std::array<Mat, 3> idric_cyclic(const std::array<Mat, 3>& rho, const StructureTriple& t)
{
    std::array<Mat, 3> out;
    for (std::size_t a = 0; a < 3; ++a) {
        const std::size_t b = (a + 1) % 3, c = (a + 2) % 3;
        const Mat& J = t.J[b];
        out[a] = J.transpose() * rho[a] * J + kEps[b] * rho[a] -
                 kEps[b] * kEps[c] * (J.transpose() * rho[c] + rho[c] * J);
    }
    return out;
}

double s_commutator_residual(const Tensor3& S, const Mat& J, double sign)
{
    const std::size_t d = S.dim();
    std::vector<Mat> dirs(d);
    for (std::size_t q = 0; q < d; ++q) {
        dirs[q] = S.dir(q);
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        Mat sj = Mat::Zero(d, d);
        for (std::size_t q = 0; q < d; ++q) {
            if (J(q, j) != 0.0) {
                sj += J(q, j) * dirs[q];
            }
        }
        worst = std::max(worst, max_abs(J * commutator(dirs[j], J) - sign * commutator(sj, J)));
    }
    return worst;
}

StructureTriple admissible_basis(const ImaginaryPQ& b, const StructureTriple& t, Rng& rng)
{
    const ImaginaryPQ u{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const double s = lorentz_inner(u, b) / lorentz_inner(b, b);
    ImaginaryPQ c{u.b1 - s * b.b1, u.b2 - s * b.b2, u.b3 - s * b.b3};
    double q = lorentz_q(c);
    if (!(q > 1e-6)) {
        // The complement of a timelike b is spacelike, so only a tiny c lands here.
        c = cross_product(b, ImaginaryPQ{1.0, 0.0, 0.0});
        q = lorentz_q(c);
    }
    const double norm = std::sqrt(q);
    c = {c.b1 / norm, c.b2 / norm, c.b3 / norm};
    StructureTriple out;
    out.J[2] = build_J(b, t);
    out.J[0] = build_J(c, t);
    out.J[1] = out.J[0] * out.J[2];
    return out;
}

} // namespace pqgeom
