#include "isocone/cones.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "isocone/errors.hpp"
#include "isocone/nnls.hpp"

namespace isocone {

std::string_view to_string(ConeKind kind) {
  switch (kind) {
    case ConeKind::Orthant: return "orthant";
    case ConeKind::Lorentz: return "lorentz";
    case ConeKind::Simplicial: return "simplicial";
    case ConeKind::Generators: return "generators";
    case ConeKind::Facets: return "facets";
  }
  return "unknown";
}

namespace {

void require_columns(const Matrix& m, std::string_view what) {
  if (m.rows() == 0 || m.cols() == 0) throw InvalidArgument(std::string(what) + ": empty matrix");
  if (!m.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite entry");
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (m.col(j).norm() == 0.0) {
      throw InvalidArgument(std::string(what) + ": column " + std::to_string(j) + " is zero");
    }
  }
}

}  // namespace

Cone Cone::orthant(int dim) {
  if (dim < 1) throw InvalidArgument("orthant: dimension must be positive");
  Cone k(ConeKind::Orthant, dim);
  k.vectors_ = Matrix::Identity(dim, dim);
  k.dual_ = k.vectors_;
  k.lu_.compute(k.vectors_);
  return k;
}

Cone Cone::lorentz(int dim) {
  if (dim < 2) throw InvalidArgument("lorentz: dimension must be at least 2");
  return Cone(ConeKind::Lorentz, dim);
}

Cone Cone::simplicial(Matrix generators) {
  require_columns(generators, "simplicial");
  if (generators.rows() != generators.cols()) {
    throw InvalidArgument("simplicial: generator matrix must be square");
  }
  const int m = static_cast<int>(generators.rows());
  Cone k(ConeKind::Simplicial, m);
  Eigen::JacobiSVD<Matrix> svd(generators);
  const Vector& s = svd.singularValues();
  const double smax = s[0];
  const double smin = s[m - 1];
  if (!(smin > smax * 1e-14)) throw InvalidArgument("simplicial: generators do not form a basis");
  k.condition_ = smax / smin;
  if (k.condition_ > kConditionWarning) {
    std::ostringstream msg;
    msg << "simplicial: generator matrix is ill-conditioned (cond ~ " << k.condition_ << ")";
    k.warnings_.push_back(msg.str());
  }
  k.vectors_ = std::move(generators);
  k.lu_.compute(k.vectors_);
  // U^T E = I
  k.dual_ = k.lu_.inverse().transpose();
  return k;
}

Cone Cone::generators(Matrix generators) {
  require_columns(generators, "generators");
  Cone k(ConeKind::Generators, static_cast<int>(generators.rows()));
  Eigen::ColPivHouseholderQR<Matrix> qr(generators);
  if (qr.rank() < generators.rows()) {
    k.warnings_.push_back("generators: cone is not full-dimensional (not generating)");
  }
  k.condition_ = 0.0;
  k.vectors_ = std::move(generators);
  return k;
}

Cone Cone::facets(Matrix normals) {
  require_columns(normals, "facets");
  Cone k(ConeKind::Facets, static_cast<int>(normals.rows()));
  Eigen::ColPivHouseholderQR<Matrix> qr(normals);
  if (qr.rank() < normals.rows()) {
    k.warnings_.push_back("facets: cone contains a line (not pointed)");
  }
  k.condition_ = 0.0;
  k.vectors_ = std::move(normals);
  return k;
}

const Matrix& Cone::generators() const {
  if (kind_ == ConeKind::Lorentz || kind_ == ConeKind::Facets) {
    throw Unsupported(std::string(to_string(kind_)) + " cone has no generator matrix");
  }
  return vectors_;
}

const Matrix& Cone::normals() const {
  if (kind_ != ConeKind::Facets) {
    throw Unsupported(std::string(to_string(kind_)) + " cone has no facet matrix");
  }
  return vectors_;
}

const Matrix& Cone::dual_basis() const {
  if (!has_basis()) throw Unsupported(std::string(to_string(kind_)) + " cone has no basis");
  return dual_;
}

Vector Cone::coordinates(const Vector& x) const {
  if (!has_basis()) throw Unsupported(std::string(to_string(kind_)) + " cone has no basis");
  if (x.size() != dim_) throw DimensionError("coordinates: dimension mismatch");
  if (kind_ == ConeKind::Orthant) return x;
  return lu_.solve(x);
}

double DualBasis::biorthogonality_residual(const Matrix& generators) const {
  const Matrix g = generators.transpose() * vectors;
  return (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

DualBasis dual_basis(const Cone& k) { return DualBasis{k.dual_basis()}; }

Cone dual_cone(const Cone& k) {
  switch (k.kind()) {
    case ConeKind::Orthant: return Cone::orthant(k.dim());
    case ConeKind::Lorentz: return Cone::lorentz(k.dim());
    case ConeKind::Simplicial: return Cone::simplicial(k.dual_basis());
    case ConeKind::Generators: return Cone::facets(k.generators());
    case ConeKind::Facets: return Cone::generators(k.normals());
  }
  throw Unsupported("dual_cone: unknown cone kind");
}

bool in_cone(const Cone& k, const Vector& x, const Tolerance& tol) {
  if (x.size() != k.dim()) throw DimensionError("in_cone: dimension mismatch");
  const double t = tol.at(x);
  switch (k.kind()) {
    case ConeKind::Orthant: return x.minCoeff() >= -t;
    case ConeKind::Lorentz: {
      const Eigen::Index m = x.size() - 1;
      return x.head(m).norm() <= x[m] + t;
    }
    case ConeKind::Simplicial: return k.coordinates(x).minCoeff() >= -t;
    case ConeKind::Facets: {
      const Vector s = k.normals().transpose() * x;
      for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s[i] < -t * k.normals().col(i).norm()) return false;
      }
      return true;
    }
    case ConeKind::Generators: return nnls(k.generators(), x).residual_norm <= t;
  }
  return false;
}

bool leq(const Cone& k, const Vector& x, const Vector& y, const Tolerance& tol) {
  require_same_dim(x, y, "leq");
  return in_cone(k, y - x, tol);
}

bool is_subdual(const Cone& k, const Tolerance& tol) {
  switch (k.kind()) {
    case ConeKind::Orthant:
    case ConeKind::Lorentz: return true;
    case ConeKind::Simplicial: {
      const Cone dual = dual_cone(k);
      const Matrix& e = k.generators();
      for (Eigen::Index i = 0; i < e.cols(); ++i) {
        if (!in_cone(dual, e.col(i), tol)) return false;
      }
      return true;
    }
    default:
      throw Unsupported("is_subdual: defined for orthant, lorentz and simplicial cones only");
  }
}

}  // namespace isocone
