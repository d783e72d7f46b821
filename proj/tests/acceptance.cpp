// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "pqgeom/algebra.hpp"
#include "pqgeom/catalog.hpp"
#include "pqgeom/checks.hpp"
#include "pqgeom/errors.hpp"
#include "pqgeom/report.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <string>
#include <vector>

using namespace pqgeom;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

CheckReport run_one(const std::string& spec, const std::string& check, std::size_t points, std::uint64_t seed = 7)
{
    const ManifoldSpec s = catalog_get(spec);
    CheckOptions o;
    o.seed = seed;
    const CheckContext ctx(s, sample_points(s, points, seed));
    return run_check(check, ctx, o);
}

double residual_max(const CheckReport& r, const std::string& name)
{
    double m = 0.0;
    for (const auto& p : r.points) {
        for (const auto& x : p.residuals) {
            if (x.name == name) {
                m = std::max(m, x.value);
            }
        }
    }
    return m;
}

double residual_min(const CheckReport& r, const std::string& name)
{
    double m = 1e300;
    for (const auto& p : r.points) {
        for (const auto& x : p.residuals) {
            if (x.name == name) {
                m = std::min(m, x.value);
            }
        }
    }
    return m;
}

double judged_max(const CheckReport& r)
{
    double m = 0.0;
    for (const auto& p : r.points) {
        for (const auto& x : p.residuals) {
            m = x.judged ? std::max(m, x.value) : m;
        }
    }
    return m;
}

Tensor3 random_form(std::size_t d, Rng& rng)
{
    Tensor3 t(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < d; ++k) {
                t(i, j, k) = rng.uniform(-1.0, 1.0);
            }
        }
    }
    return 0.5 * t.alternated();
}

// 1. algebra suite
Outcome algebra_suite()
{
    Outcome out;
    const auto t0 = Clock::now();
    const ParaQuaternion e[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    // 1, j1, j2, j3 times 1, j1, j2, j3 as (sign, index)
    const int table[4][4][2] = {
        {{1, 0}, {1, 1}, {1, 2}, {1, 3}},
        {{1, 1}, {1, 0}, {1, 3}, {1, 2}},
        {{1, 2}, {-1, 3}, {1, 0}, {-1, 1}},
        {{1, 3}, {-1, 2}, {1, 1}, {-1, 0}},
    };
    const StructureTriple t = standard_triple(1);
    // Right multiplications R_q X = X q in model coordinates: R_1 = I, R_{j_a} = -J_a.
    const Mat R[4] = {Mat::Identity(4, 4), -t.J[0], -t.J[1], -t.J[2]};
    int exact = 0;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const double s = table[a][b][0];
            const ParaQuaternion& r = e[table[a][b][1]];
            const bool q_ok = pq_mul(e[a], e[b]) == ParaQuaternion{s * r.x, s * r.y, s * r.z, s * r.w};
            // R_{e_a} R_{e_b} = R_{e_b e_a}
            const bool m_ok = max_abs(R[a] * R[b] - table[b][a][0] * R[table[b][a][1]]) == 0.0;
            exact += q_ok && m_ok;
        }
    }
    out.require(exact == 16, std::to_string(exact) + "/16 products exact");

    Rng rng(1);
    const auto minus = sample_hyperboloid(Sheet::minus, 500, 11);
    const auto plus = sample_hyperboloid(Sheet::plus, 500, 12);
    int proj_ok = 0;
    for (int i = 0; i < 1000; ++i) {
        const bool cx = i % 2 == 0;
        const double eps = cx ? -1.0 : 1.0;
        const Mat J = build_J(cx ? minus[i / 2] : plus[i / 2], t);
        const Tensor3 B = random_form(4, rng);
        const Tensor3 P = proj02_normalized(B, J, eps);
        const double scale = std::max(1.0, std::pow(max_abs(J), 3));
        const double idem = (proj02_normalized(P, J, eps) - P).max_abs() / scale;
        const double ann = proj02_normalized(B - P, J, eps).max_abs() / scale;
        proj_ok += idem < 1e-10 && ann < 1e-10;
    }
    out.require(proj_ok == 1000, std::to_string(proj_ok) + "/1000 proj02 checks");

    double split = 0.0;
    for (std::size_t n : {1u, 2u}) {
        const StructureTriple tn = standard_triple(n);
        const std::size_t d = 4 * n;
        for (int trial = 0; trial < 50; ++trial) {
            // S_X = C_X + sum_a s^a(X) J_a, C_X averaged into the commutant of the triple
            Tensor3 S(d);
            std::array<Vec, 3> sa;
            for (auto& v : sa) {
                v = Vec(d);
                for (std::size_t k = 0; k < d; ++k) {
                    v(static_cast<Eigen::Index>(k)) = rng.uniform(-1, 1);
                }
            }
            for (std::size_t k = 0; k < d; ++k) {
                Mat m(d, d);
                for (Eigen::Index i = 0; i < m.size(); ++i) {
                    m.data()[i] = rng.uniform(-1, 1);
                }
                Mat full = (m + tn.J[0] * m * tn.J[0] + tn.J[1] * m * tn.J[1] - tn.J[2] * m * tn.J[2]) / 4.0;
                for (std::size_t a = 0; a < 3; ++a) {
                    full += sa[a](static_cast<Eigen::Index>(k)) * tn.J[a];
                }
                S.set_dir(k, full);
            }
            const SSplit sp = s_split(S, tn);
            Tensor3 back = sp.s0;
            for (std::size_t k = 0; k < d; ++k) {
                Mat m = back.dir(k);
                for (std::size_t a = 0; a < 3; ++a) {
                    m += sp.s[a](static_cast<Eigen::Index>(k)) * tn.J[a];
                }
                back.set_dir(k, m);
            }
            split = std::max({split, (back - S).max_abs(), sp.residual});
            for (std::size_t a = 0; a < 3; ++a) {
                split = std::max(split, (sp.s[a] - sa[a]).cwiseAbs().maxCoeff());
            }
        }
    }
    out.require(split < 1e-10, "s_split " + fmt(split));
    const double secs = seconds_since(t0);
    out.require(secs < 1.0, "runtime " + fmt(secs) + " s");
    out.note(std::to_string(exact) + "/16 products, " + std::to_string(proj_ok) + "/1000 proj02, s_split " + fmt(split) +
             ", " + fmt(secs) + " s");
    return out;
}

// 2. jets against central differences
Outcome oracle_agreement()
{
    Outcome out;
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::size_t runs = 0;
    for (const char* name : {"flat-r4", "conf-flat", "prod-surfaces"}) {
        const ManifoldSpec s = catalog_get(name);
        const auto pts = sample_points(s, 20, 2024);
        for (const auto& p : pts) {
            for (const auto& q : oracle_quantities()) {
                try {
                    const auto doc = run_oracle(s, q, p, 1e-5);
                    worst = std::max(worst, doc["rel_dev"].get<double>());
                    ++runs;
                } catch (const Error& e) {
                    out.require(false, std::string(name) + " " + q + ": " + e.what());
                }
            }
        }
    }
    out.require(runs == 3 * 20 * oracle_quantities().size(), "ran " + std::to_string(runs));
    out.require(worst < 1e-5, "worst rel_dev " + fmt(worst));
    const double secs = seconds_since(t0);
    out.require(secs < 10.0, "runtime " + fmt(secs) + " s");
    out.note(std::to_string(runs) + " comparisons, worst rel_dev " + fmt(worst) + ", " + fmt(secs) + " s");
    return out;
}

// 3. curvature splitting and the sign control
Outcome curvature_splitting()
{
    Outcome out;
    for (const char* name : {"flat-r8-pqkt", "conf-flat"}) {
        const ManifoldSpec s = catalog_get(name);
        double good = 0.0, wrong = 0.0;
        std::size_t used = 0;
        for (const auto& p : sample_points(s, 32, 7)) {
            try {
                const PointFrame f = evaluate_point(s, p);
                out.require(f.omega_defect < 1e-8, std::string(name) + " connection not para-quaternionic");
                good = std::max(good, curvature_split(f).commutator);
                wrong = std::max(wrong, curvature_split(f, {1.0, 1.0, -1.0}).commutator);
                ++used;
            } catch (const Error&) {
            }
        }
        out.require(used > 0, std::string(name) + " no usable points");
        out.require(good < 1e-7, std::string(name) + " commutator " + fmt(good));
        out.require(wrong > 1e-2, std::string(name) + " wrong-sign " + fmt(wrong));
        out.note(std::string(name) + " " + fmt(good) + " / wrong sign " + fmt(wrong));
    }
    return out;
}

// 4. anti-self-duality against the Ricci-form identity
Outcome theorem_four()
{
    Outcome out;
    const auto t0 = Clock::now();
    std::size_t points = 0, agree = 0;
    struct Case {
        const char* spec;
        bool expect;
    };
    for (const Case c : {Case{"conf-flat", true}, Case{"prod-surfaces:1,1", false}}) {
        const CheckReport r = run_one(c.spec, "theorem-four", 100);
        for (const auto& p : r.points) {
            double wplus = -1.0, idric = -1.0;
            for (const auto& x : p.residuals) {
                wplus = x.name == "wplus" ? x.value : wplus;
                idric = x.name == "idric" ? x.value : idric;
            }
            const bool asd = wplus >= 0.0 && wplus < 1e-7;
            const bool id = idric >= 0.0 && idric < 1e-7;
            ++points;
            agree += asd == id && asd == c.expect;
        }
        out.require(r.verdict == Verdict::holds, std::string(c.spec) + " verdict " + std::string(verdict_name(r.verdict)));
    }
    out.require(points >= 200, std::to_string(points) + " points");
    out.require(agree == points, std::to_string(agree) + "/" + std::to_string(points) + " agree");
    const double secs = seconds_since(t0);
    out.require(secs < 30.0, "runtime " + fmt(secs) + " s");
    out.note(std::to_string(agree) + "/" + std::to_string(points) + " points agree, " + fmt(secs) + " s");
    return out;
}

// 5. sheet-independence of the torsion (0,2) part
Outcome sheet_independence()
{
    Outcome out;
    const CheckReport r = run_one("flat-r4-s-single", "ltor", 32);
    const double zm = residual_max(r, "z_minus_max");
    const double zp = residual_max(r, "z_plus_max");
    const double ratio = residual_max(r, "z_ratio");
    out.require(zm > 1e-3 && zp > 1e-3, "torsion (0,2) part vanishes: " + fmt(zm) + ", " + fmt(zp));
    out.require(ratio > 0.0 && ratio <= 10.0, "max Z ratio " + fmt(ratio));
    out.note("S-perturbed ratio " + fmt(ratio));
    for (const char* name : {"flat-r4", "conf-flat", "prod-surfaces"}) {
        const CheckReport f = run_one(name, "ltor", 32);
        const double a = residual_max(f, "z_minus_max"), b = residual_max(f, "z_plus_max");
        out.require(a < 1e-10 && b < 1e-10, std::string(name) + " " + fmt(a) + ", " + fmt(b));
        out.require(!f.points.empty(), std::string(name) + " no points");
    }
    return out;
}

// 6. difference-tensor equivalences
Outcome s_field_bundles()
{
    Outcome out;
    struct Case {
        const char* spec;
        const char* t25;
        const char* t27;
        const char* t272;
    };
    for (const Case c : {Case{"flat-r4-s-rel", "vanishing", "vanishing", "nonvanishing"},
                         Case{"flat-r4-s-single", "nonvanishing", "nonvanishing", "nonvanishing"},
                         Case{"flat-r4-s-commuting", "vanishing", "vanishing", "vanishing"}}) {
        std::string states;
        for (const auto& [check, want] :
             {std::pair{"prop-t25", c.t25}, std::pair{"cor-t27", c.t27}, std::pair{"cor-t272", c.t272}}) {
            const CheckReport r = run_one(c.spec, check, 32);
            const std::string got = r.summary.contains("bundle") ? r.summary["bundle"].get<std::string>() : "none";
            out.require(got == want, std::string(c.spec) + " " + check + " " + got);
            out.require(r.verdict == Verdict::holds, std::string(c.spec) + " " + check + " verdict " +
                                                         std::string(verdict_name(r.verdict)));
            states += (states.empty() ? "" : "/") + got;
        }
        out.note(std::string(c.spec) + " " + states);
    }
    return out;
}

// 7. quaternionic-Kaehler-with-torsion example
Outcome cor_cur()
{
    Outcome out;
    const CheckReport l = run_one("flat-r8-pqkt", "ltor", 32);
    const CheckReport i = run_one("flat-r8-pqkt", "idric", 32);
    const double lm = judged_max(l), im = judged_max(i);
    out.require(l.verdict == Verdict::holds && lm < 1e-8, "ltor " + fmt(lm));
    out.require(i.verdict == Verdict::holds && im < 1e-7, "idric " + fmt(im));
    out.note("ltor " + fmt(lm) + ", idric " + fmt(im));
    return out;
}

// 8. integrability through the span criterion
Outcome zamkovoy()
{
    Outcome out;
    for (const char* name : {"frame-hpc-4d", "flat-r8"}) {
        const CheckReport r = run_one(name, "zamkovoy-pq", 32);
        const double m = residual_max(r, "span_literal");
        out.require(!r.points.empty() && m < 1e-8, std::string(name) + " " + fmt(m));
        out.note(std::string(name) + " " + fmt(m));
    }
    const CheckReport p = run_one("perturbed-J", "zamkovoy-pq", 32);
    const double lo = residual_min(p, "span_literal");
    out.require(!p.points.empty() && lo > 1e-3, "perturbed-J min " + fmt(lo));
    out.note("perturbed-J min " + fmt(lo));
    return out;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

// 9. determinism and full-suite runtime
Outcome determinism(const std::string& cli, const std::string& dir)
{
    Outcome out;
    std::size_t same = 0, total = 0;
    for (const auto& name : catalog_list()) {
        const std::string a = dir + "/acc_" + name + "_a.json", b = dir + "/acc_" + name + "_b.json";
        for (const auto& f : {a, b}) {
            const std::string cmd = "\"" + cli + "\" check --example " + name + " --seed 7 --quiet --json \"" + f + "\"";
            const int rc = std::system(cmd.c_str());
            out.require(rc != -1, "could not run " + cli);
        }
        const std::string ta = slurp(a);
        ++total;
        same += !ta.empty() && ta == slurp(b);
    }
    out.require(same == total, std::to_string(same) + "/" + std::to_string(total) + " identical");

    const auto t0 = Clock::now();
    for (const auto& name : catalog_list()) {
        run_checks(catalog_get(name), {});
    }
    const double secs = seconds_since(t0);
    out.require(secs < 120.0, "full suite " + fmt(secs) + " s");
    out.note(std::to_string(same) + "/" + std::to_string(total) + " byte-identical, full suite " + fmt(secs) + " s");
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    const std::string cli = argc > 1 ? argv[1] : PQGEOM_CLI;
    const std::string dir = argc > 2 ? argv[2] : PQGEOM_WORKDIR;
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"1 algebra suite", algebra_suite},
        {"2 jet vs finite-difference oracle", oracle_agreement},
        {"3 curvature splitting", curvature_splitting},
        {"4 theorem-four equivalence", theorem_four},
        {"5 torsion sheet independence", sheet_independence},
        {"6 difference-tensor bundles", s_field_bundles},
        {"7 cor-cur prerequisites on flat-r8-pqkt", cor_cur},
        {"8 zamkovoy criterion", zamkovoy},
        {"9 determinism and runtime", [&] { return determinism(cli, dir); }},
    };
    int failed = 0;
    for (const auto& [label, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.note(std::string("exception: ") + e.what());
        }
        std::printf("%s  criterion %s: %s\n", o.pass ? "PASS" : "FAIL", label, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
