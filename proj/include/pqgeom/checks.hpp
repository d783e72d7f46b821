#pragma once

// Named verdicts over sampled points.

#include "pqgeom/geometry.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pqgeom {

enum class Verdict { holds, fails, inconclusive };

std::string_view verdict_name(Verdict v);

struct Tolerances {
    double algebraic = 1e-10; // identities among pointwise values
    double first = 1e-8;      // once-differentiated quantities (connection, torsion, Nijenhuis)
    double curvature = 1e-7;  // curvature-level quantities
    double fail_factor = 10.0;

    Tolerances scaled(double s) const { return {algebraic * s, first * s, curvature * s, fail_factor}; }
};

struct CheckOptions {
    Tolerances tol;
    std::uint64_t seed = 7;
    std::size_t j_samples = 64; // per hyperboloid sheet
    double t_max = 2.0;
    std::size_t vector_pairs = 16; // random (X, Y) pairs per point for span tests
};

struct Residual {
    std::string name;
    double value = 0.0;
    bool judged = true; // diagnostics are reported but do not enter the verdict
};

struct PointRecord {
    std::size_t index = 0;
    std::vector<double> point;
    std::vector<Residual> residuals;
};

struct SkippedPoint {
    std::size_t index = 0;
    std::vector<double> point;
    std::string reason;
};

struct CheckReport {
    std::string name;
    std::string spec;
    Verdict verdict = Verdict::inconclusive;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    std::size_t points_used = 0;
    std::vector<PointRecord> points;
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    std::string note;
};

/// Stable check identifiers in their canonical order.
const std::vector<std::string>& check_names();

/// Checks that apply to a spec by default: all, minus theorem-four when d != 4
/// and cor-cur when d < 8.
std::vector<std::string> default_checks(const ManifoldSpec& spec);

/// Deterministic uniform points in the spec's sample box.
std::vector<std::vector<double>> sample_points(const ManifoldSpec& spec, std::size_t count, std::uint64_t seed);

/// Point data shared by all checks of one run. Points where evaluation fails are
/// recorded as skipped with the reason.
class CheckContext {
public:
    CheckContext(const ManifoldSpec& spec, std::vector<std::vector<double>> points);

    const ManifoldSpec& spec() const { return spec_; }
    const std::vector<std::vector<double>>& points() const { return points_; }
    const std::vector<SkippedPoint>& skipped() const { return skipped_; }
    /// Frame with the spec's connection, or nullptr when the point was skipped.
    const PointFrame* frame(std::size_t i) const { return frames_[i] ? &*frames_[i] : nullptr; }
    /// Frame with the Levi-Civita connection (same as frame() for Levi-Civita specs).
    const PointFrame* lc_frame(std::size_t i) const;
    std::size_t usable() const;

private:
    ManifoldSpec spec_;
    std::vector<std::vector<double>> points_;
    std::vector<std::optional<PointFrame>> frames_;
    mutable std::vector<std::optional<PointFrame>> lc_frames_;
    std::vector<SkippedPoint> skipped_;
};

/// Runs one named check. Throws ArgumentError for unknown names and for
/// theorem-four on a spec whose dimension is not 4.
CheckReport run_check(std::string_view name, const CheckContext& ctx, const CheckOptions& opts);

// Pointwise building blocks, exposed for tests.

/// Literal cyclic left sides of the Ricci-form identity for (a,b,c) = (1,2,3), (2,3,1), (3,1,2).
std::array<Mat, 3> idric_cyclic_literal(const std::array<Mat, 3>& rho, const StructureTriple& t);
/// The same with the sign of the rho_c terms taken from the vertical-part computation
/// for J3 (differs from the literal form only in the b = 3 term).
std::array<Mat, 3> idric_cyclic(const std::array<Mat, 3>& rho, const StructureTriple& t);

/// max |J[S_Y,J] - sign [S_{JY},J]| over the basis Y.
double s_commutator_residual(const Tensor3& S, const Mat& J, double sign);

/// An admissible basis (J1', J2', J3') with J3' = b J for b on the minus sheet.
StructureTriple admissible_basis(const ImaginaryPQ& b, const StructureTriple& t, Rng& rng);

} // namespace pqgeom
