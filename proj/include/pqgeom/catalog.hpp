#pragma once

// Built-in example manifolds.

#include "pqgeom/geometry.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pqgeom {

/// Stable list of base entry names.
std::vector<std::string> catalog_list();

/// Spec for a catalog name. Parametrized forms: "conf-flat:<expr in x,y,u,v>",
/// "prod-surfaces:<k1>,<k2>". Throws ArgumentError for unknown names.
ManifoldSpec catalog_get(std::string_view name);

/// One-line description of what the entry exercises.
std::string catalog_note(std::string_view name);

/// Expected verdict ("holds", "fails", "inconclusive") per check under the default
/// seed, tolerances and point count. Checks not listed are not part of the regression surface.
std::map<std::string, std::string> catalog_expected(std::string_view name);

} // namespace pqgeom
