#pragma once

// Report documents and the finite-difference oracle.

#include "pqgeom/checks.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pqgeom {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kReportSchema = "report-v1";
inline constexpr const char* kOracleSchema = "oracle-v1";

struct RunOptions {
    std::vector<std::string> checks;   // empty: default_checks(spec)
    std::optional<std::size_t> points; // empty: spec.sample_points
    std::uint64_t seed = 7;
    double tol_scale = 1.0;
};

/// 0 all requested checks hold, 1 some check fails, 2 otherwise inconclusive, 3 input error.
enum class ExitStatus { ok = 0, fails = 1, inconclusive = 2, input_error = 3 };

struct RunResult {
    nlohmann::ordered_json document;
    ExitStatus status = ExitStatus::ok;
};

/// Samples points, runs the checks and assembles a report-v1 document.
/// Throws ArgumentError for unknown or inapplicable check names.
RunResult run_checks(const ManifoldSpec& spec, const RunOptions& opts);

nlohmann::ordered_json report_json(const CheckReport& r);

/// Canonical serialization (2-space indent, trailing newline).
std::string dump_json(const nlohmann::ordered_json& doc);

/// Jet path against central finite differences with step `step` at one chart point.
/// quantity is one of gamma, riemann, nijenhuis, nablaJ, weyl. rel_dev is
/// max_abs_dev / max(1, max |jet value|). Throws ArgumentError in frame mode or for an
/// unknown quantity, EvalError when a stencil point hits a pole.
nlohmann::ordered_json run_oracle(const ManifoldSpec& spec, const std::string& quantity, const std::vector<double>& point,
                                  double step);

const std::vector<std::string>& oracle_quantities();

} // namespace pqgeom
