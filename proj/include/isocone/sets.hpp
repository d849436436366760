#pragma once

#include <string_view>
#include <variant>

#include "isocone/geometry.hpp"
#include "isocone/polyhedron.hpp"

namespace isocone {

// The closed convex sets the checkers accept.
using ConvexSet = std::variant<Hyperplane, Halfspace, Polyhedron>;

std::string_view set_kind(const ConvexSet& s);
Eigen::Index set_dim(const ConvexSet& s);

// How far z is outside S, in distance units: |signed distance| for a
// hyperplane, its positive part for a halfspace or polyhedron.
double set_violation(const ConvexSet& s, const Vector& z);

Vector project_set(const ConvexSet& s, const Vector& x);

// A representative length of S (anchor / offset magnitudes), at least 1.
double set_scale(const ConvexSet& s);

}  // namespace isocone
