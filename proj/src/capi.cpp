#include "pqgeom/pqgeom.h"

#include "pqgeom/catalog.hpp"
#include "pqgeom/errors.hpp"
#include "pqgeom/report.hpp"
#include "pqgeom/specfile.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>

struct pqg_spec {
    pqgeom::ManifoldSpec spec;
};

namespace {

thread_local std::string g_last_error;

char* copy_out(const std::string& s)
{
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) {
        throw std::bad_alloc();
    }
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

template <class F>
pqg_status guarded(F&& f)
{
    g_last_error.clear();
    try {
        f();
        return PQG_OK;
    } catch (const pqgeom::ParseError& e) {
        g_last_error = e.what();
        return PQG_ERR_PARSE;
    } catch (const pqgeom::SpecError& e) {
        g_last_error = e.what();
        return PQG_ERR_SPEC;
    } catch (const pqgeom::ArgumentError& e) {
        g_last_error = e.what();
        return PQG_ERR_ARGUMENT;
    } catch (const pqgeom::EvalError& e) {
        g_last_error = e.what();
        return PQG_ERR_EVAL;
    } catch (const pqgeom::DegeneracyError& e) {
        g_last_error = e.what();
        return PQG_ERR_DEGENERATE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PQG_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return PQG_ERR_INTERNAL;
    }
}

pqg_status null_argument(const char* what)
{
    g_last_error = std::string(what) + " is NULL";
    return PQG_ERR_ARGUMENT;
}

std::vector<std::string> split_names(const char* list)
{
    std::vector<std::string> out;
    if (!list) {
        return out;
    }
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) {
            out.push_back(item.substr(b, e - b + 1));
        }
    }
    return out;
}

} // namespace

extern "C" {

const char* pqg_version(void) { return pqgeom::kVersion; }

const char* pqg_last_error(void) { return g_last_error.c_str(); }

void pqg_run_options_init(pqg_run_options* opts)
{
    if (opts) {
        opts->checks = nullptr;
        opts->points = 0;
        opts->seed = 7;
        opts->tol_scale = 1.0;
    }
}

pqg_status pqg_spec_load_file(const char* path, pqg_spec** out)
{
    if (!path || !out) {
        return null_argument(!path ? "path" : "out");
    }
    return guarded([&] { *out = new pqg_spec{pqgeom::load_spec(path)}; });
}

pqg_status pqg_spec_parse(const char* text, pqg_spec** out)
{
    if (!text || !out) {
        return null_argument(!text ? "text" : "out");
    }
    return guarded([&] { *out = new pqg_spec{pqgeom::parse_spec(text)}; });
}

pqg_status pqg_catalog_get(const char* name, pqg_spec** out)
{
    if (!name || !out) {
        return null_argument(!name ? "name" : "out");
    }
    return guarded([&] { *out = new pqg_spec{pqgeom::catalog_get(name)}; });
}

void pqg_spec_free(pqg_spec* spec) { delete spec; }

size_t pqg_spec_dimension(const pqg_spec* spec) { return spec ? spec->spec.dim : 0; }

pqg_status pqg_spec_emit(const pqg_spec* spec, char** text_out)
{
    if (!spec || !text_out) {
        return null_argument(!spec ? "spec" : "text_out");
    }
    return guarded([&] { *text_out = copy_out(pqgeom::emit_spec(spec->spec)); });
}

size_t pqg_catalog_count(void) { return pqgeom::catalog_list().size(); }

const char* pqg_catalog_name(size_t index)
{
    static const std::vector<std::string> names = pqgeom::catalog_list();
    return index < names.size() ? names[index].c_str() : nullptr;
}

pqg_status pqg_catalog_note(const char* name, char** text_out)
{
    if (!name || !text_out) {
        return null_argument(!name ? "name" : "text_out");
    }
    return guarded([&] { *text_out = copy_out(pqgeom::catalog_note(name)); });
}

const char* pqg_check_names(void)
{
    static const std::string joined = [] {
        std::string s;
        for (const auto& n : pqgeom::check_names()) {
            s += (s.empty() ? "" : ",") + n;
        }
        return s;
    }();
    return joined.c_str();
}

pqg_status pqg_run_checks(const pqg_spec* spec, const pqg_run_options* opts, char** json_out, int* exit_code)
{
    if (!spec || !json_out) {
        return null_argument(!spec ? "spec" : "json_out");
    }
    pqg_run_options defaults;
    pqg_run_options_init(&defaults);
    const pqg_run_options& o = opts ? *opts : defaults;
    return guarded([&] {
        pqgeom::RunOptions ro;
        ro.checks = split_names(o.checks);
        if (o.points > 0) {
            ro.points = o.points;
        }
        ro.seed = o.seed;
        ro.tol_scale = o.tol_scale;
        const pqgeom::RunResult r = pqgeom::run_checks(spec->spec, ro);
        *json_out = copy_out(pqgeom::dump_json(r.document));
        if (exit_code) {
            *exit_code = static_cast<int>(r.status);
        }
    });
}

pqg_status pqg_run_oracle(const pqg_spec* spec, const char* quantity, const double* point, size_t n, double step,
                          char** json_out)
{
    if (!spec || !quantity || (!point && n > 0) || !json_out) {
        return null_argument("argument");
    }
    return guarded([&] {
        const std::vector<double> p(point, point + n);
        *json_out = copy_out(pqgeom::dump_json(pqgeom::run_oracle(spec->spec, quantity, p, step)));
    });
}

void pqg_string_free(char* s) { std::free(s); }

} // extern "C"
