#pragma once

#include <string>

#include <json.hpp>

#include "isocone/cones.hpp"
#include "isocone/invariance.hpp"
#include "isocone/latops.hpp"
#include "isocone/projection.hpp"
#include "isocone/sets.hpp"

namespace isocone {

using Json = nlohmann::ordered_json;

// Every parse_* function throws ParseError on a schema mismatch; value
// errors from the constructors (zero normals, singular bases) pass through.

// [x1, ..., xm]
Vector parse_vector(const Json& j);
Json to_json(const Vector& v);

// [[column 1], [column 2], ...]
Matrix parse_columns(const Json& j);
Json columns_to_json(const Matrix& m);

// {"type": "orthant" | "lorentz", "dim": m}
// {"type": "simplicial" | "generators", "generators": [[...], ...]}
// {"type": "facets", "normals": [[...], ...]}
Cone parse_cone(const Json& j);
Json to_json(const Cone& k);

// {"type": "hyperplane" | "halfspace", "normal": [...], "anchor": [...]}
//   ("offset": b may replace "anchor" for a halfspace {<u, x> <= b})
// {"type": "polyhedron", "halfspaces": [{"normal", "anchor" | "offset"}, ...],
//  "interior_point": [...] (optional)}
ConvexSet parse_set(const Json& j);
Json to_json(const ConvexSet& s);

Json to_json(const Counterexample& c);
Json to_json(const CheckReport& r);
Json to_json(const NormalClass& c);
Json to_json(const NormalFamily& f);
Json to_json(const PropertyReport& r);
Json to_json(const MoreauPair& m, const Vector& x);

Json read_json_file(const std::string& path);

}  // namespace isocone
