#include "isocone/geometry.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>

#include "isocone/errors.hpp"

namespace isocone {

void require_same_dim(const Vector& x, const Vector& y, std::string_view what) {
  if (x.size() != y.size()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()) + ")");
  }
}

void require_finite(const Vector& x, std::string_view what) {
  if (x.size() == 0) throw InvalidArgument(std::string(what) + ": empty vector");
  if (!x.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite entry");
}

double inner(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "inner");
  return x.dot(y);
}

Hyperplane::Hyperplane(Vector normal, Vector anchor)
    : normal_(std::move(normal)), anchor_(std::move(anchor)) {
  require_finite(normal_, "hyperplane normal");
  require_finite(anchor_, "hyperplane anchor");
  require_same_dim(normal_, anchor_, "hyperplane");
  if (normal_.norm() == 0.0) throw InvalidArgument("hyperplane normal is the zero vector");
  offset_ = normal_.dot(anchor_);
}

double Hyperplane::signed_distance(const Vector& x) const {
  require_same_dim(normal_, x, "hyperplane distance");
  return (normal_.dot(x) - offset_) / normal_.norm();
}

bool Hyperplane::contains(const Vector& x, const Tolerance& tol) const {
  return std::abs(signed_distance(x)) <= tol.at(x);
}

Halfspace::Halfspace(Vector normal, Vector anchor)
    : boundary_(std::move(normal), std::move(anchor)) {}

Halfspace Halfspace::from_offset(Vector normal, double offset) {
  require_finite(normal, "halfspace normal");
  const double nn = normal.squaredNorm();
  if (nn == 0.0) throw InvalidArgument("halfspace normal is the zero vector");
  if (!std::isfinite(offset)) throw InvalidArgument("halfspace offset is not finite");
  Vector anchor = normal * (offset / nn);
  return Halfspace(std::move(normal), std::move(anchor));
}

Halfspace Halfspace::flipped() const { return Halfspace(-normal(), anchor()); }

bool Halfspace::contains(const Vector& x, const Tolerance& tol) const {
  return signed_distance(x) <= tol.at(x);
}

Vector project_hyperplane(const Hyperplane& h, const Vector& y) {
  require_same_dim(h.normal(), y, "project_hyperplane");
  const Vector& u = h.normal();
  return y - ((u.dot(y) - h.offset()) / u.squaredNorm()) * u;
}

Vector project_halfspace(const Halfspace& s, const Vector& y) {
  require_same_dim(s.normal(), y, "project_halfspace");
  if (s.normal().dot(y) <= s.offset()) return y;
  return project_hyperplane(s.boundary(), y);
}

Matrix tangent_basis(const Vector& normal) {
  const Eigen::Index m = normal.size();
  Eigen::HouseholderQR<Matrix> qr(normal);
  Matrix q = qr.householderQ() * Matrix::Identity(m, m);
  return q.rightCols(m - 1);
}

}  // namespace isocone
