#include "isocone/projection.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "isocone/errors.hpp"
#include "isocone/nnls.hpp"

namespace isocone {
namespace {

Vector project_lorentz(const Vector& x) {
  const Eigen::Index m = x.size() - 1;
  const double tail = x[m];
  const double r = x.head(m).norm();
  if (r <= tail) return x;
  if (r <= -tail) return Vector::Zero(x.size());
  const double c = 0.5 * (tail + r);
  Vector p(x.size());
  p.head(m) = (c / r) * x.head(m);
  p[m] = c;
  return p;
}

Vector project_generated(const Matrix& g, const Vector& x) {
  return g * nnls(g, x).coefficients;
}

Matrix select_columns(const Matrix& m, unsigned mask) {
  int count = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) count += (mask >> j) & 1u;
  Matrix out(m.rows(), count);
  int k = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if ((mask >> j) & 1u) out.col(k++) = m.col(j);
  }
  return out;
}

// Every face of cone(G) is spanned by some independent subset of columns.
Vector oracle_generated(const Matrix& g, const Vector& x) {
  const double scale = 1.0 + x.norm();
  const double coef_tol = 1e-12 * scale;
  Vector best = Vector::Zero(x.size());
  double best_dist = x.norm();
  const unsigned subsets = 1u << g.cols();
  for (unsigned mask = 1; mask < subsets; ++mask) {
    const Matrix sub = select_columns(g, mask);
    if (sub.cols() > sub.rows()) continue;
    Eigen::ColPivHouseholderQR<Matrix> qr(sub);
    if (qr.rank() < sub.cols()) continue;
    const Vector t = qr.solve(x);
    if (t.minCoeff() < -coef_tol * std::max(1.0, t.cwiseAbs().maxCoeff())) continue;
    const Vector p = sub * t.cwiseMax(0.0);
    const double d = (x - p).norm();
    if (d < best_dist) {
      best_dist = d;
      best = p;
    }
  }
  return best;
}

// KKT enumeration over active facet sets of {y : N^T y >= 0}:
// y = x + N_A lambda with N_A^T y = 0 and lambda >= 0.
Vector oracle_facets(const Matrix& n, const Vector& x) {
  const double scale = 1.0 + x.norm();
  const double feas_tol = 1e-12 * scale;
  Vector best;
  double best_dist = std::numeric_limits<double>::infinity();
  const unsigned subsets = 1u << n.cols();
  for (unsigned mask = 0; mask < subsets; ++mask) {
    Vector y = x;
    if (mask != 0) {
      const Matrix sub = select_columns(n, mask);
      if (sub.cols() > sub.rows()) continue;
      Eigen::ColPivHouseholderQR<Matrix> qr(sub);
      if (qr.rank() < sub.cols()) continue;
      const Matrix gram = sub.transpose() * sub;
      const Vector lambda = gram.ldlt().solve(-(sub.transpose() * x));
      if (lambda.minCoeff() < -feas_tol) continue;
      y = x + sub * lambda;
    }
    bool feasible = true;
    for (Eigen::Index j = 0; j < n.cols(); ++j) {
      if (n.col(j).dot(y) < -feas_tol * n.col(j).norm()) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    const double d = (x - y).norm();
    if (d < best_dist) {
      best_dist = d;
      best = y;
    }
  }
  if (best.size() == 0) throw NumericError("project_cone_oracle: no KKT point found");
  return best;
}

}  // namespace

Vector project_cone(const Cone& k, const Vector& x) {
  if (x.size() != k.dim()) throw DimensionError("project_cone: dimension mismatch");
  if (!x.allFinite()) throw InvalidArgument("project_cone: non-finite input");
  if (x.isZero(0.0)) return Vector::Zero(x.size());
  switch (k.kind()) {
    case ConeKind::Orthant: return x.cwiseMax(0.0);
    case ConeKind::Lorentz: return project_lorentz(x);
    case ConeKind::Simplicial:
    case ConeKind::Generators: return project_generated(k.generators(), x);
    case ConeKind::Facets: return x + project_generated(k.normals(), -x);
  }
  throw Unsupported("project_cone: unknown cone kind");
}

Vector project_cone_oracle(const Cone& k, const Vector& x) {
  if (x.size() != k.dim()) throw DimensionError("project_cone_oracle: dimension mismatch");
  switch (k.kind()) {
    case ConeKind::Lorentz:
      throw Unsupported("project_cone_oracle: lorentz cone is not polyhedral");
    case ConeKind::Orthant:
    case ConeKind::Simplicial:
    case ConeKind::Generators: {
      const Matrix& g = k.generators();
      if (g.cols() > kOracleMaxVectors) {
        throw InvalidArgument("project_cone_oracle: more than " +
                              std::to_string(kOracleMaxVectors) + " generators");
      }
      return oracle_generated(g, x);
    }
    case ConeKind::Facets: {
      const Matrix& n = k.normals();
      if (n.cols() > kOracleMaxVectors) {
        throw InvalidArgument("project_cone_oracle: more than " +
                              std::to_string(kOracleMaxVectors) + " facets");
      }
      return oracle_facets(n, x);
    }
  }
  throw Unsupported("project_cone_oracle: unknown cone kind");
}

double distance_to_cone(const Cone& k, const Vector& x) { return (x - project_cone(k, x)).norm(); }

Vector project_translated(const Projector& onto_d, const Vector& x, const Vector& y) {
  require_same_dim(x, y, "project_translated");
  return x + onto_d(y - x);
}

Projector negated_cone_projector(const Cone& k) {
  return [k](const Vector& v) -> Vector { return -project_cone(k, -v); };
}

double MoreauPair::orthogonality_residual() const { return std::abs(p.dot(q)); }

MoreauPair moreau_decompose(const Cone& k, const Vector& x) {
  const Cone dual = dual_cone(k);
  return MoreauPair{project_cone(k, x), project_cone(dual, -x)};
}

}  // namespace isocone
