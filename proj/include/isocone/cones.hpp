#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/LU>

#include "isocone/geometry.hpp"

namespace isocone {

enum class ConeKind { Orthant, Lorentz, Simplicial, Generators, Facets };

std::string_view to_string(ConeKind kind);

// A closed convex cone in one of five representations. Immutable; the
// simplicial factorization and dual basis are computed once on construction.
//
//   Orthant(m)       {x : x >= 0}
//   Lorentz(m)       {(h, s) in R^(m-1) x R : |h| <= s}, m >= 2
//   Simplicial(E)    cone of the columns of a nonsingular square E
//   Generators(G)    cone of the columns of G (any count)
//   Facets(N)        {x : <n_i, x> >= 0 for each column n_i of N}
class Cone {
 public:
  static Cone orthant(int dim);
  static Cone lorentz(int dim);
  static Cone simplicial(Matrix generators);
  static Cone generators(Matrix generators);
  static Cone facets(Matrix normals);

  ConeKind kind() const { return kind_; }
  int dim() const { return dim_; }

  // Orthant and Simplicial cones carry a basis e_1..e_m.
  bool has_basis() const { return kind_ == ConeKind::Orthant || kind_ == ConeKind::Simplicial; }
  bool is_polyhedral() const { return kind_ != ConeKind::Lorentz; }

  // Columns: generators for Simplicial/Generators, the identity for Orthant.
  const Matrix& generators() const;
  // Columns: facet normals (Facets only).
  const Matrix& normals() const;
  // Columns u_1..u_m with <e_i, u_j> = delta_ij (Orthant and Simplicial).
  const Matrix& dual_basis() const;
  // Coefficients t with E t = x (Orthant and Simplicial).
  Vector coordinates(const Vector& x) const;

  // 2-norm condition number of E (1 for Orthant/Lorentz, 0 when unknown).
  double condition() const { return condition_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  Cone(ConeKind kind, int dim) : kind_(kind), dim_(dim) {}

  ConeKind kind_;
  int dim_;
  Matrix vectors_;
  Matrix dual_;
  Eigen::PartialPivLU<Matrix> lu_;
  double condition_ = 1.0;
  std::vector<std::string> warnings_;
};

// Condition number above which a simplicial cone carries a warning.
inline constexpr double kConditionWarning = 1e8;

struct DualBasis {
  Matrix vectors;  // columns u_1..u_m

  // max_{i,j} |<e_i, u_j> - delta_ij|
  double biorthogonality_residual(const Matrix& generators) const;
};

DualBasis dual_basis(const Cone& k);

// Orthant and Lorentz are self-dual; Simplicial(E) maps to Simplicial(E^-T);
// Generators(G) maps to Facets(G) and Facets(N) to Generators(N).
Cone dual_cone(const Cone& k);

bool in_cone(const Cone& k, const Vector& x, const Tolerance& tol = {});

// x <=_K y  iff  y - x in K
bool leq(const Cone& k, const Vector& x, const Vector& y, const Tolerance& tol = {});

// K subset of K*. Defined for Orthant, Lorentz and Simplicial cones.
bool is_subdual(const Cone& k, const Tolerance& tol = {});

}  // namespace isocone
