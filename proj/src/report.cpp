#include "pqgeom/report.hpp"

#include "pqgeom/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pqgeom {

namespace {

using json = nlohmann::ordered_json;

const char* mode_name(Mode m) { return m == Mode::chart ? "chart" : "frame"; }

const char* connection_name(ConnectionKind c)
{
    switch (c) {
    case ConnectionKind::levi_civita: return "levi-civita";
    case ConnectionKind::explicit_gamma: return "explicit";
    case ConnectionKind::levi_civita_plus_s: return "levi-civita-plus-S";
    }
    return "levi-civita";
}

void append(std::vector<double>& out, const Tensor3& t)
{
    const std::size_t d = t.dim();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < d; ++k) {
                out.push_back(t(i, j, k));
            }
        }
    }
}

void append(std::vector<double>& out, const Mat& m)
{
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out.push_back(m(i, j));
        }
    }
}

std::vector<double> flatten(const PointFrame& f, const std::string& q)
{
    std::vector<double> out;
    if (q == "gamma") {
        append(out, f.gamma);
    } else if (q == "riemann") {
        for (const auto& m : f.R) {
            append(out, m);
        }
    } else if (q == "nijenhuis") {
        for (const auto& n : f.N) {
            append(out, n);
        }
    } else if (q == "nablaJ") {
        for (const auto& per : f.nablaJ) {
            for (const auto& m : per) {
                append(out, m);
            }
        }
    } else {
        out = weyl_tensor(f);
        if (f.d == 4 && f.levi_civita) {
            const WeylParts w = weyl_asd(f);
            out.push_back(w.wplus);
            out.push_back(w.wminus);
        }
    }
    return out;
}

} // namespace

const std::vector<std::string>& oracle_quantities()
{
    static const std::vector<std::string> q{"gamma", "riemann", "nijenhuis", "nablaJ", "weyl"};
    return q;
}

json report_json(const CheckReport& r)
{
    json c;
    c["name"] = r.name;
    c["spec"] = r.spec;
    c["verdict"] = std::string(verdict_name(r.verdict));
    c["tolerance"] = r.tolerance;
    c["seed"] = r.seed;
    c["points_used"] = r.points_used;
    json pts = json::array();
    for (const auto& p : r.points) {
        json pj;
        pj["index"] = p.index;
        pj["point"] = p.point;
        json res = json::object(), diag = json::object();
        for (const auto& x : p.residuals) {
            (x.judged ? res : diag)[x.name] = x.value;
        }
        pj["residuals"] = res;
        pj["diagnostics"] = diag;
        pts.push_back(pj);
    }
    c["points"] = pts;
    c["summary"] = r.summary;
    c["note"] = r.note;
    return c;
}

RunResult run_checks(const ManifoldSpec& spec, const RunOptions& opts)
{
    const std::vector<std::string> names = opts.checks.empty() ? default_checks(spec) : opts.checks;
    for (const auto& n : names) {
        const auto& known = check_names();
        if (std::find(known.begin(), known.end(), n) == known.end()) {
            throw ArgumentError("unknown check '" + n + "'");
        }
        if (n == "theorem-four" && spec.dim != 4) {
            throw ArgumentError("theorem-four needs a 4-dimensional spec");
        }
    }
    if (!(opts.tol_scale > 0.0) || !std::isfinite(opts.tol_scale)) {
        throw ArgumentError("tolerance scale must be a positive number");
    }
    const std::size_t count = opts.points.value_or(spec.sample_points);
    if (count == 0) {
        throw ArgumentError("point count must be positive");
    }
    CheckOptions co;
    co.tol = Tolerances{}.scaled(opts.tol_scale);
    co.seed = opts.seed;
    const CheckContext ctx(spec, sample_points(spec, count, opts.seed));

    RunResult out;
    json& doc = out.document;
    doc["schema"] = kReportSchema;
    doc["spec"] = {{"name", spec.name},
                   {"dimension", spec.dim},
                   {"mode", mode_name(spec.mode)},
                   {"connection", connection_name(spec.connection)}};
    doc["seed"] = opts.seed;
    doc["points_requested"] = count;
    doc["tolerances"] = {{"algebraic", co.tol.algebraic},
                         {"first_order", co.tol.first},
                         {"curvature", co.tol.curvature},
                         {"fail_factor", co.tol.fail_factor},
                         {"scale", opts.tol_scale}};
    bool any_fail = false, any_inconclusive = false;
    json checks = json::array();
    for (const auto& n : names) {
        const CheckReport r = run_check(n, ctx, co);
        any_fail |= r.verdict == Verdict::fails;
        any_inconclusive |= r.verdict == Verdict::inconclusive;
        checks.push_back(report_json(r));
    }
    doc["checks"] = checks;
    json skipped = json::array();
    for (const auto& s : ctx.skipped()) {
        skipped.push_back({{"index", s.index}, {"point", s.point}, {"reason", s.reason}});
    }
    doc["skipped_points"] = skipped;
    doc["versions"] = {{"pqgeom", kVersion}, {"report", kReportSchema}};
    out.status = any_fail ? ExitStatus::fails : any_inconclusive ? ExitStatus::inconclusive : ExitStatus::ok;
    return out;
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

json run_oracle(const ManifoldSpec& spec, const std::string& quantity, const std::vector<double>& point, double step)
{
    const auto& qs = oracle_quantities();
    if (std::find(qs.begin(), qs.end(), quantity) == qs.end()) {
        throw ArgumentError("unknown oracle quantity '" + quantity + "'");
    }
    if (spec.mode != Mode::chart) {
        throw ArgumentError("the finite-difference oracle needs a chart-mode spec");
    }
    if (point.size() != spec.dim) {
        throw ArgumentError("point has " + std::to_string(point.size()) + " coordinates, spec dimension is " +
                            std::to_string(spec.dim));
    }
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw ArgumentError("step must be a positive number");
    }
    const PointFrame jf = evaluate_point(spec, point);
    EvalOptions fd;
    fd.diff = Differentiation::finite_difference;
    fd.step = step;
    PointFrame ff;
    try {
        ff = evaluate_point(spec, point, fd);
    } catch (const EvalError& e) {
        throw EvalError(std::string("pole within the finite-difference stencil: ") + e.what());
    }
    const std::vector<double> a = flatten(jf, quantity);
    const std::vector<double> b = flatten(ff, quantity);
    double dev = 0.0, scale = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double e = std::abs(a[i] - b[i]);
        if (e > dev) {
            dev = e;
            worst = i;
        }
        scale = std::max(scale, std::abs(a[i]));
    }
    json doc;
    doc["schema"] = kOracleSchema;
    doc["spec"] = spec.name;
    doc["quantity"] = quantity;
    doc["point"] = point;
    doc["step"] = step;
    doc["components"] = a.size();
    doc["jet_max_abs"] = scale;
    doc["max_abs_dev"] = dev;
    doc["rel_dev"] = dev / std::max(1.0, scale);
    doc["worst_component"] = worst;
    doc["versions"] = {{"pqgeom", kVersion}};
    return doc;
}

} // namespace pqgeom
