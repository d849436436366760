#pragma once

#include <functional>

#include "isocone/cones.hpp"

namespace isocone {

// Metric projection onto K. Orthant clamps, Lorentz uses the closed form,
// Simplicial and Generators solve an NNLS over generator coefficients, Facets
// go through the dual: P_K x = x + P_{K*}(-x) with K* = cone(normals).
// x = 0 maps to 0 for every cone.
Vector project_cone(const Cone& k, const Vector& x);

// Brute-force reference projector for polyhedral cones with at most
// kOracleMaxVectors generators/facets. Enumerates every linearly independent
// subset of generators (or active facets), solves the reduced least-squares
// problem, and keeps the nearest candidate that is feasible.
Vector project_cone_oracle(const Cone& k, const Vector& x);
inline constexpr int kOracleMaxVectors = 16;

// |x - P_K x|
double distance_to_cone(const Cone& k, const Vector& x);

using Projector = std::function<Vector(const Vector&)>;

// P_{x + D} y = x + P_D(y - x)
Vector project_translated(const Projector& onto_d, const Vector& x, const Vector& y);

// P_{-K} v = -P_K(-v)
Projector negated_cone_projector(const Cone& k);

struct MoreauPair {
  Vector p;  // P_K x, in K
  Vector q;  // P_{K*}(-x), in K*

  // |x - (p - q)|
  double reconstruction_residual(const Vector& x) const { return (x - (p - q)).norm(); }
  // |<p, q>|
  double orthogonality_residual() const;
};

// Both parts are computed independently (one projection onto K, one onto K*).
MoreauPair moreau_decompose(const Cone& k, const Vector& x);

}  // namespace isocone
