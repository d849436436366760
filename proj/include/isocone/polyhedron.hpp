#pragma once

#include <optional>
#include <vector>

#include "isocone/geometry.hpp"

namespace isocone {

// Finite intersection of halfspaces {x : A x <= b}, optionally with a point
// that satisfies every inequality strictly.
class Polyhedron {
 public:
  explicit Polyhedron(std::vector<Halfspace> halfspaces,
                      std::optional<Vector> interior_point = std::nullopt,
                      const Tolerance& tol = {});

  // {x : lo <= x <= hi}, with the midpoint as interior point.
  static Polyhedron box(const Vector& lo, const Vector& hi);

  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  const std::optional<Vector>& interior_point() const { return interior_; }
  Eigen::Index dim() const { return a_.cols(); }
  std::size_t size() const { return halfspaces_.size(); }

  // Rows are the normals u_i; b_i = <u_i, a_i>.
  const Matrix& normals() const { return a_; }
  const Vector& offsets() const { return b_; }

  // max_i (<u_i, x> - b_i) / |u_i|: positive outside, negative inside.
  double signed_distance(const Vector& x) const;
  bool contains(const Vector& x, const Tolerance& tol = {}) const;

 private:
  std::vector<Halfspace> halfspaces_;
  std::optional<Vector> interior_;
  Matrix a_;
  Vector b_;
};

// Least-distance point of {z : A z <= b} to x, solved exactly through the
// NNLS dual of the least-distance problem. Returns nullopt when the system
// is infeasible.
std::optional<Vector> least_distance_point(const Matrix& a, const Vector& b, const Vector& x);

// Nearest point of P to x. Throws NumericError when P is empty.
Vector project_polyhedron(const Polyhedron& p, const Vector& x);

struct DykstraResult {
  Vector point;
  int iterations = 0;
  bool converged = false;
};

// Dykstra's cyclic projections over the halfspaces; cross-check only.
DykstraResult project_polyhedron_dykstra(const Polyhedron& p, const Vector& x,
                                         int max_iterations = 100000, const Tolerance& tol = {});

// A point satisfying every inequality with slack >= margin * |u_i|, chosen by
// growing the margin geometrically from `min_margin` and bisecting at the
// boundary. Returns the point and the margin reached, or nullopt when even
// `min_margin` is infeasible (empty or lower-dimensional set).
struct CenteredPoint {
  Vector point;
  double margin = 0.0;
};
std::optional<CenteredPoint> centered_point(const Matrix& a, const Vector& b, const Vector& reference,
                                            double min_margin, double max_margin);

struct FacetInfo {
  bool defining = false;   // the hyperplane meets P in an (m-1)-dimensional face
  bool duplicate = false;  // same hyperplane as an earlier inequality
  Vector center;           // point of the facet with slack on every other facet
  double margin = 0.0;
};

// Classifies inequality `index` of P. Parallel inequalities describing the
// same hyperplane are merged into the first one.
FacetInfo facet_info(const Polyhedron& p, std::size_t index, const Tolerance& tol = {});

// Interior point of P: the declared one, or a centered point when none was
// declared. Throws InvalidArgument when P has empty interior.
Vector interior_point_of(const Polyhedron& p, const Tolerance& tol = {});

}  // namespace isocone
