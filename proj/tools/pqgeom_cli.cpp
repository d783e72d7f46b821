// pqgeom command-line front end. Talks to the library only through pqgeom.h.

#include "pqgeom/pqgeom.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kInputError = 3;

using json = nlohmann::ordered_json;

struct SpecDeleter {
    void operator()(pqg_spec* s) const { pqg_spec_free(s); }
};
using SpecPtr = std::unique_ptr<pqg_spec, SpecDeleter>;

struct CString {
    char* p = nullptr;
    ~CString() { pqg_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

int fail(const std::string& msg)
{
    std::cerr << "pqgeom: " << msg << "\n";
    return kInputError;
}

// --spec accepts a file path; --example a catalog name.
SpecPtr open_spec(const std::string& file, const std::string& example, std::string& error)
{
    pqg_spec* raw = nullptr;
    pqg_status st = PQG_OK;
    if (!file.empty() && !example.empty()) {
        error = "give either --spec or --example, not both";
        return nullptr;
    }
    if (!file.empty()) {
        st = pqg_spec_load_file(file.c_str(), &raw);
    } else if (!example.empty()) {
        st = pqg_catalog_get(example.c_str(), &raw);
    } else {
        error = "one of --spec or --example is required";
        return nullptr;
    }
    if (st != PQG_OK) {
        error = pqg_last_error();
        return nullptr;
    }
    return SpecPtr(raw);
}

std::string sci(double v)
{
    std::ostringstream s;
    s << std::scientific << std::setprecision(2) << v;
    return s.str();
}

void print_table(const json& doc, std::ostream& out)
{
    out << "spec " << doc["spec"]["name"].get<std::string>() << "  dim " << doc["spec"]["dimension"].get<int>()
        << "  seed " << doc["seed"].get<std::uint64_t>() << "  points " << doc["points_requested"].get<std::size_t>()
        << "  skipped " << doc["skipped_points"].size() << "\n\n";
    out << std::left << std::setw(14) << "check" << std::setw(14) << "verdict" << std::setw(8) << "points"
        << std::setw(11) << "tolerance" << "worst judged residual\n";
    for (const auto& c : doc["checks"]) {
        std::string worst_name = "-";
        double worst = 0.0;
        if (!c["points"].empty()) {
            for (const auto& [name, v] : c["points"][0]["residuals"].items()) {
                const double m = c["summary"]["max_residuals"][name].get<double>();
                if (worst_name == "-" || m > worst) {
                    worst = m;
                    worst_name = name;
                }
            }
        }
        out << std::left << std::setw(14) << c["name"].get<std::string>() << std::setw(14)
            << c["verdict"].get<std::string>() << std::setw(8) << c["points_used"].get<std::size_t>() << std::setw(11)
            << sci(c["tolerance"].get<double>());
        if (worst_name != "-") {
            out << worst_name << " = " << sci(worst);
        }
        if (!c["note"].get<std::string>().empty()) {
            out << "  (" << c["note"].get<std::string>() << ")";
        }
        out << "\n";
    }
}

std::vector<double> parse_point(const std::string& text, bool& ok)
{
    std::string s = text;
    for (char& ch : s) {
        if (ch == ',') {
            ch = ' ';
        }
    }
    std::istringstream in(s);
    std::vector<double> p;
    std::string tok;
    ok = true;
    while (in >> tok) {
        try {
            std::size_t used = 0;
            p.push_back(std::stod(tok, &used));
            ok &= used == tok.size();
        } catch (const std::exception&) {
            ok = false;
        }
    }
    return p;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical checks for almost para-quaternionic structures"};
    app.set_version_flag("--version", std::string(pqg_version()));
    app.require_subcommand(1);

    std::string spec_file, example_name, checks, json_out;
    std::size_t points = 0;
    std::uint64_t seed = 7;
    double tol_scale = 1.0;
    bool quiet = false;
    auto* check = app.add_subcommand("check", "run named checks on a spec and report verdicts");
    check->add_option("--spec", spec_file, "spec file");
    check->add_option("--example", example_name, "catalog entry instead of a file");
    check->add_option("--checks", checks, "comma-separated check names (default: all applicable)");
    check->add_option("--points", points, "number of sample points (default: the spec's sample_points)");
    check->add_option("--seed", seed, "sampling seed");
    check->add_option("--tol-scale", tol_scale, "multiply every tolerance by this factor");
    check->add_option("--json", json_out, "write the JSON report to this file ('-' for stdout)");
    check->add_flag("--quiet", quiet, "do not print the table");

    std::string ex_name;
    bool emit = false;
    auto* example = app.add_subcommand("example", "list catalog entries or show one");
    example->add_option("name", ex_name, "catalog entry");
    example->add_flag("--emit-spec", emit, "print the entry as a spec file");

    std::string quantity, point_text;
    double step = 1e-5;
    auto* oracle = app.add_subcommand("oracle", "compare jet derivatives with central finite differences");
    oracle->add_option("--spec", spec_file, "spec file");
    oracle->add_option("--example", example_name, "catalog entry instead of a file");
    oracle->add_option("--quantity", quantity, "gamma, riemann, nijenhuis, nablaJ or weyl")->required();
    oracle->add_option("--point", point_text, "coordinates, space or comma separated")->required();
    oracle->add_option("--step", step, "finite-difference step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    if (*check) {
        std::string err;
        SpecPtr spec = open_spec(spec_file, example_name, err);
        if (!spec) {
            return fail(err);
        }
        pqg_run_options opts;
        pqg_run_options_init(&opts);
        opts.checks = checks.empty() ? nullptr : checks.c_str();
        opts.points = points;
        opts.seed = seed;
        opts.tol_scale = tol_scale;
        CString text;
        int code = 0;
        if (pqg_run_checks(spec.get(), &opts, &text.p, &code) != PQG_OK) {
            return fail(pqg_last_error());
        }
        if (json_out == "-") {
            std::cout << text.str();
        } else if (!json_out.empty()) {
            std::ofstream f(json_out, std::ios::binary);
            f << text.str();
            if (!f) {
                return fail("cannot write '" + json_out + "'");
            }
        }
        if (!quiet && json_out != "-") {
            print_table(json::parse(text.str()), std::cout);
        }
        return code;
    }

    if (*example) {
        if (ex_name.empty()) {
            for (std::size_t i = 0; i < pqg_catalog_count(); ++i) {
                CString note;
                pqg_catalog_note(pqg_catalog_name(i), &note.p);
                std::cout << std::left << std::setw(22) << pqg_catalog_name(i) << note.str() << "\n";
            }
            return 0;
        }
        pqg_spec* raw = nullptr;
        if (pqg_catalog_get(ex_name.c_str(), &raw) != PQG_OK) {
            return fail(pqg_last_error());
        }
        SpecPtr spec(raw);
        if (emit) {
            CString text;
            if (pqg_spec_emit(spec.get(), &text.p) != PQG_OK) {
                return fail(pqg_last_error());
            }
            std::cout << text.str();
            return 0;
        }
        CString note;
        pqg_catalog_note(ex_name.c_str(), &note.p);
        std::cout << ex_name << " (dimension " << pqg_spec_dimension(spec.get()) << "): " << note.str() << "\n";
        return 0;
    }

    std::string err;
    SpecPtr spec = open_spec(spec_file, example_name, err);
    if (!spec) {
        return fail(err);
    }
    bool ok = true;
    const std::vector<double> p = parse_point(point_text, ok);
    if (!ok) {
        return fail("cannot parse --point '" + point_text + "'");
    }
    CString text;
    if (pqg_run_oracle(spec.get(), quantity.c_str(), p.data(), p.size(), step, &text.p) != PQG_OK) {
        return fail(pqg_last_error());
    }
    std::cout << text.str();
    return 0;
}
