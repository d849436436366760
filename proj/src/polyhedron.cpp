#include "isocone/polyhedron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>

#include "isocone/errors.hpp"
#include "isocone/nnls.hpp"

namespace isocone {
namespace {

// Rows scaled to unit normals; the feasible set is unchanged.
void normalized_rows(const Matrix& a, const Vector& b, Matrix& an, Vector& bn) {
  an = a;
  bn = b;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double n = a.row(i).norm();
    an.row(i) /= n;
    bn[i] /= n;
  }
}

// min |z - x| s.t. an z <= bn, rows already unit length.
std::optional<Vector> ldp(const Matrix& an, const Vector& bn, const Vector& x) {
  const Eigen::Index m = an.cols();
  const Eigen::Index k = an.rows();
  const Vector h = an * x - bn;
  if (k == 0 || h.maxCoeff() <= 0.0) return x;
  // min |v| s.t. G v >= h with G = -an; solved as NNLS on [G^T; h^T].
  Matrix e(m + 1, k);
  e.topRows(m) = -an.transpose();
  e.row(m) = h.transpose();
  Vector f = Vector::Zero(m + 1);
  f[m] = 1.0;
  const NnlsResult sol = nnls(e, f);
  const Vector r = e * sol.coefficients - f;
  if (r.norm() <= 1e-12 || r[m] >= 0.0) return std::nullopt;
  Vector z = x - r.head(m) / r[m];
  const double scale = 1.0 + x.norm() + z.norm() + bn.cwiseAbs().maxCoeff();
  // A feasible answer is always verified; a residual that is merely small
  // means the system is infeasible or too badly scaled to trust.
  if ((an * z - bn).maxCoeff() > 1e-10 * scale) return std::nullopt;

  // Re-solve on the detected active set to remove the error of the ratio.
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(an.row(i).dot(z) - bn[i]) <= 1e-9 * scale) active.push_back(i);
  }
  if (!active.empty() && static_cast<Eigen::Index>(active.size()) <= m) {
    Matrix aw(static_cast<Eigen::Index>(active.size()), m);
    Vector bw(aw.rows());
    for (std::size_t j = 0; j < active.size(); ++j) {
      aw.row(j) = an.row(active[j]);
      bw[j] = bn[active[j]];
    }
    const Vector d = aw.completeOrthogonalDecomposition().solve(bw - aw * x);
    const Vector y = x + d;
    const double worst = (an * y - bn).maxCoeff();
    if (worst <= 1e-13 * scale && (y - z).norm() <= 1e-8 * scale) z = y;
  }
  return z;
}

std::optional<CenteredPoint> centered_weighted(const Matrix& an, const Vector& bn,
                                               const Vector& weights, const Vector& reference,
                                               double min_margin, double max_margin) {
  auto attempt = [&](double margin) { return ldp(an, bn - margin * weights, reference); };
  auto lo_point = attempt(min_margin);
  if (!lo_point) return std::nullopt;
  double lo = min_margin;
  double hi = std::numeric_limits<double>::infinity();
  double trial = std::max(min_margin * 4.0, 1e-12);
  while (trial <= max_margin) {
    auto p = attempt(trial);
    if (!p) {
      hi = trial;
      break;
    }
    lo = trial;
    lo_point = std::move(p);
    trial *= 4.0;
  }
  if (std::isfinite(hi)) {
    for (int it = 0; it < 24; ++it) {
      const double mid = 0.5 * (lo + hi);
      auto p = attempt(mid);
      if (p) {
        lo = mid;
        lo_point = std::move(p);
      } else {
        hi = mid;
      }
    }
  }
  return CenteredPoint{*lo_point, lo};
}

}  // namespace

Polyhedron::Polyhedron(std::vector<Halfspace> halfspaces, std::optional<Vector> interior_point,
                       const Tolerance& tol)
    : halfspaces_(std::move(halfspaces)), interior_(std::move(interior_point)) {
  if (halfspaces_.empty()) throw InvalidArgument("polyhedron: no halfspaces");
  const Eigen::Index m = halfspaces_.front().dim();
  a_.resize(static_cast<Eigen::Index>(halfspaces_.size()), m);
  b_.resize(a_.rows());
  for (std::size_t i = 0; i < halfspaces_.size(); ++i) {
    if (halfspaces_[i].dim() != m) throw DimensionError("polyhedron: halfspace dimension mismatch");
    a_.row(static_cast<Eigen::Index>(i)) = halfspaces_[i].normal().transpose();
    b_[static_cast<Eigen::Index>(i)] = halfspaces_[i].offset();
  }
  if (interior_) {
    require_finite(*interior_, "polyhedron interior point");
    if (interior_->size() != m) throw DimensionError("polyhedron: interior point dimension mismatch");
    for (const Halfspace& h : halfspaces_) {
      if (!(h.signed_distance(*interior_) < -tol.at(*interior_))) {
        throw InvalidArgument("polyhedron: interior point does not strictly satisfy every inequality");
      }
    }
  }
}

Polyhedron Polyhedron::box(const Vector& lo, const Vector& hi) {
  require_same_dim(lo, hi, "box");
  std::vector<Halfspace> hs;
  const Eigen::Index m = lo.size();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(lo[i] < hi[i])) throw InvalidArgument("box: lower bound not below upper bound");
    const Vector e = Vector::Unit(m, i);
    hs.push_back(Halfspace::from_offset(e, hi[i]));
    hs.push_back(Halfspace::from_offset(-e, -lo[i]));
  }
  return Polyhedron(std::move(hs), Vector(0.5 * (lo + hi)));
}

double Polyhedron::signed_distance(const Vector& x) const {
  require_same_dim(a_.row(0).transpose(), x, "polyhedron distance");
  double worst = -std::numeric_limits<double>::infinity();
  for (const Halfspace& h : halfspaces_) worst = std::max(worst, h.signed_distance(x));
  return worst;
}

bool Polyhedron::contains(const Vector& x, const Tolerance& tol) const {
  return signed_distance(x) <= tol.at(x);
}

std::optional<Vector> least_distance_point(const Matrix& a, const Vector& b, const Vector& x) {
  if (a.rows() != b.size() || a.cols() != x.size()) {
    throw DimensionError("least_distance_point: dimension mismatch");
  }
  Matrix an;
  Vector bn;
  normalized_rows(a, b, an, bn);
  return ldp(an, bn, x);
}

Vector project_polyhedron(const Polyhedron& p, const Vector& x) {
  if (x.size() != p.dim()) throw DimensionError("project_polyhedron: dimension mismatch");
  if (!x.allFinite()) throw InvalidArgument("project_polyhedron: non-finite input");
  if ((p.normals() * x - p.offsets()).maxCoeff() <= 0.0) return x;
  auto z = least_distance_point(p.normals(), p.offsets(), x);
  if (!z) throw NumericError("project_polyhedron: polyhedron is empty");
  return *z;
}

DykstraResult project_polyhedron_dykstra(const Polyhedron& p, const Vector& x, int max_iterations,
                                         const Tolerance& tol) {
  if (x.size() != p.dim()) throw DimensionError("project_polyhedron_dykstra: dimension mismatch");
  const auto& hs = p.halfspaces();
  std::vector<Vector> increments(hs.size(), Vector::Zero(x.size()));
  DykstraResult out{x, 0, false};
  const double stop = tol.at(x);
  for (int it = 1; it <= max_iterations; ++it) {
    const Vector previous = out.point;
    double increment_change = 0.0;
    for (std::size_t j = 0; j < hs.size(); ++j) {
      const Vector shifted = out.point + increments[j];
      out.point = project_halfspace(hs[j], shifted);
      const Vector next = shifted - out.point;
      increment_change += (next - increments[j]).norm();
      increments[j] = next;
    }
    out.iterations = it;
    // A sweep can leave the iterate in place while the increments still move.
    if ((out.point - previous).norm() < stop && increment_change < stop) {
      out.converged = true;
      break;
    }
  }
  return out;
}

std::optional<CenteredPoint> centered_point(const Matrix& a, const Vector& b, const Vector& reference,
                                            double min_margin, double max_margin) {
  Matrix an;
  Vector bn;
  normalized_rows(a, b, an, bn);
  return centered_weighted(an, bn, Vector::Ones(bn.size()), reference, min_margin, max_margin);
}

FacetInfo facet_info(const Polyhedron& p, std::size_t index, const Tolerance& tol) {
  if (index >= p.size()) throw InvalidArgument("facet_info: index out of range");
  Matrix an;
  Vector bn;
  normalized_rows(p.normals(), p.offsets(), an, bn);
  const Eigen::Index i = static_cast<Eigen::Index>(index);
  const double scale = 1.0 + bn.cwiseAbs().maxCoeff();
  const double same = tol.at(scale);

  FacetInfo info;
  Vector weights = Vector::Ones(an.rows() + 1);
  for (Eigen::Index j = 0; j < an.rows(); ++j) {
    if (j == i) continue;
    const bool parallel = (an.row(j) - an.row(i)).norm() <= 1e-12;
    if (parallel && std::abs(bn[j] - bn[i]) <= same) {
      if (j < i) {
        info.duplicate = true;
        return info;
      }
      weights[j] = 0.0;
    }
  }
  // Equality on H_i: keep row i and append its reversal, both without margin.
  Matrix rows(an.rows() + 1, an.cols());
  rows.topRows(an.rows()) = an;
  rows.row(an.rows()) = -an.row(i);
  Vector rhs(bn.size() + 1);
  rhs.head(bn.size()) = bn;
  rhs[bn.size()] = -bn[i];
  weights[i] = 0.0;
  weights[an.rows()] = 0.0;

  Vector reference = p.interior_point().value_or(Vector::Zero(p.dim()));
  reference -= (an.row(i).dot(reference) - bn[i]) * an.row(i).transpose();
  auto c = centered_weighted(rows, rhs, weights, reference, 1e3 * same, 1e6 * scale);
  if (!c) return info;
  info.defining = true;
  info.center = std::move(c->point);
  info.margin = c->margin;
  return info;
}

Vector interior_point_of(const Polyhedron& p, const Tolerance& tol) {
  if (p.interior_point()) return *p.interior_point();
  const double scale = 1.0 + p.offsets().cwiseAbs().maxCoeff();
  auto c = centered_point(p.normals(), p.offsets(), Vector::Zero(p.dim()), 1e3 * tol.at(scale),
                          1e6 * scale);
  if (!c) throw InvalidArgument("polyhedron has empty interior");
  return c->point;
}

}  // namespace isocone
