#pragma once

// Line-oriented spec files.
//
//   # comment
//   name = conf-flat
//   dimension = 4
//   mode = chart                 # or frame
//   coords = x y u v
//   g(1,1) = "exp(2*(0.1*x*y))"  # 1-based; g(j,i) mirrors g(i,j) when absent
//   J1(1,3) = "-1"
//   connection = levi-civita     # explicit | levi-civita-plus-S
//   Gamma(1,2,3) = "x"           # Gamma^1_{23}
//   S(1,2,3) = "0.5"
//   c(2,1,2) = 1                 # [e1,e2] = 1 e2; the (k,j,i) entry is implied
//   sample_box = -1 1            # one interval for all coordinates, or one per coordinate
//   sample_points = 32
//
// Omitted components are zero. Quotes around expressions are optional.

#include "pqgeom/geometry.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace pqgeom {

/// Parses and validates spec text. Throws SpecError carrying the offending line.
/// `default_name` is used when the text has no `name` key.
ManifoldSpec parse_spec(std::string_view text, std::string_view default_name = "spec");

/// Reads a spec file; the file stem is the default name.
ManifoldSpec load_spec(const std::filesystem::path& path);

/// Canonical text form; parse_spec(emit_spec(s)) is equivalent to s.
std::string emit_spec(const ManifoldSpec& spec);

} // namespace pqgeom
