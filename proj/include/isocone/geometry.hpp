#pragma once

#include <string_view>

#include <Eigen/Core>

#include "isocone/tolerance.hpp"

namespace isocone {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Throws DimensionError when the sizes differ.
void require_same_dim(const Vector& x, const Vector& y, std::string_view what);

// Throws InvalidArgument on an empty vector or a NaN/Inf entry.
void require_finite(const Vector& x, std::string_view what);

double inner(const Vector& x, const Vector& y);

// H(u, a) = {x : <u, x> = <u, a>}. The normal is kept as given; it is never
// rescaled.
class Hyperplane {
 public:
  Hyperplane(Vector normal, Vector anchor);

  const Vector& normal() const { return normal_; }
  const Vector& anchor() const { return anchor_; }
  Eigen::Index dim() const { return normal_.size(); }
  Vector unit_normal() const { return normal_ / normal_.norm(); }
  // <u, a>
  double offset() const { return offset_; }

  // (<u, x> - <u, a>) / |u|
  double signed_distance(const Vector& x) const;
  bool contains(const Vector& x, const Tolerance& tol = {}) const;

 private:
  Vector normal_;
  Vector anchor_;
  double offset_;
};

// H_-(u, a) = {x : <u, x> <= <u, a>}.
class Halfspace {
 public:
  Halfspace(Vector normal, Vector anchor);
  // {x : <u, x> <= offset}
  static Halfspace from_offset(Vector normal, double offset);

  const Vector& normal() const { return boundary_.normal(); }
  const Vector& anchor() const { return boundary_.anchor(); }
  Eigen::Index dim() const { return boundary_.dim(); }
  double offset() const { return boundary_.offset(); }
  const Hyperplane& boundary() const { return boundary_; }

  // H_+(u, a), written as H_-(-u, a).
  Halfspace flipped() const;

  // Positive outside, zero on the boundary, negative inside.
  double signed_distance(const Vector& x) const { return boundary_.signed_distance(x); }
  bool contains(const Vector& x, const Tolerance& tol = {}) const;

 private:
  Hyperplane boundary_;
};

Vector project_hyperplane(const Hyperplane& h, const Vector& y);
Vector project_halfspace(const Halfspace& s, const Vector& y);

// Orthonormal basis (as columns) of the orthogonal complement of `normal`.
Matrix tangent_basis(const Vector& normal);

}  // namespace isocone
