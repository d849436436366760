#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isocone/cones.hpp"
#include "isocone/projection.hpp"

namespace isocone {

enum class LatOp { Meet, Join, MeetStar, JoinStar };

std::string_view to_string(LatOp op);
// "meet", "join", "meet-star", "join-star"
std::optional<LatOp> parse_latop(std::string_view name);

struct LatOpResult {
  Vector value;      // definition path: projection onto a translated cone
  Vector identity;   // the same operation written through the dual cone
  double path_gap = 0.0;
  bool paths_agree = true;
};

// The four lattice-like operations of a cone K:
//
//   meet(x, y)      = P_{x-K} y   = x - P_K(x - y)   = y - P_{K*}(y - x)
//   join(x, y)      = P_{x+K} y   = x + P_K(y - x)   = y + P_{K*}(x - y)
//   meet_star(x, y) = P_{x-K*} y  = x - P_{K*}(x - y) = y - P_K(y - x)
//   join_star(x, y) = P_{x+K*} y  = x + P_{K*}(y - x) = y + P_K(x - y)
//
// Every evaluation computes both the translated-projection form and the
// dual-cone form and throws NumericError when they differ by more than
// path_tolerance * (1 + |x| + |y|).
class LatticeLikeOps {
 public:
  explicit LatticeLikeOps(Cone cone, double path_tolerance = 1e-9);

  const Cone& cone() const { return cone_; }
  const Cone& dual() const { return dual_; }

  Vector meet(const Vector& x, const Vector& y) const { return apply(LatOp::Meet, x, y); }
  Vector join(const Vector& x, const Vector& y) const { return apply(LatOp::Join, x, y); }
  Vector meet_star(const Vector& x, const Vector& y) const { return apply(LatOp::MeetStar, x, y); }
  Vector join_star(const Vector& x, const Vector& y) const { return apply(LatOp::JoinStar, x, y); }

  Vector apply(LatOp op, const Vector& x, const Vector& y) const;
  // Both paths without the assertion.
  LatOpResult evaluate(LatOp op, const Vector& x, const Vector& y) const;

 private:
  Cone cone_;
  Cone dual_;
  double path_tolerance_;
};

// meet_star(x, y) == meet(y, x) and join_star(x, y) == join(y, x).
bool check_l0_swap(const LatticeLikeOps& ops, const Vector& x, const Vector& y, double tol = 1e-9);
// Largest scaled difference of the two swap identities.
double l0_swap_residual(const LatticeLikeOps& ops, const Vector& x, const Vector& y);

struct PropertyItem {
  std::string item;
  bool pass = true;
  double residual = 0.0;
};

struct PropertyWitness {
  Vector x, y, z, w;
  double lambda = 1.0;
  double t = 0.0;
};

struct PropertyReport {
  std::vector<PropertyItem> items;
  PropertyWitness witness;

  bool all_pass() const;
  double max_residual() const;
  const PropertyItem* find(std::string_view item) const;
};

struct PropertyOptions {
  double tolerance = 1e-8;          // residual threshold for every identity
  double converse_tolerance = 1e-6;  // looser bound for the converse of equality-iff clauses
};

// Evaluates the algebraic and metric identities of the four operations on one
// tuple. Residuals are scale-free: vector differences are divided by
// 1 + |x| + |y| + |z| + |w| (times lambda where it applies), inner products
// by its square. Items:
//
//   order-lower   meet <= x, meet <=* y, meet* <=* x, meet* <= y, with the
//                 equality cases (x <=* y, y <= x, x <= y, y <=* x)
//   order-upper   the dual statements for join and join*
//   sum           meet + join* = meet* + join = meet(x,y) + join(y,x)
//                 = meet*(x,y) + join*(y,x) = x + y
//   translation   op(x + z, y + z) = op(x, y) + z for all four
//   homogeneity   op(lambda x, lambda y) = lambda op(x, y), lambda > 0
//   orthogonality <x - meet, join* - x> = 0 and <x - meet*, join - x> = 0
//   negation      join(-x, -y) = -meet(x, y), join*(-x, -y) = -meet*(x, y)
//   lipschitz     |op(x,y) - op(z,w)| <= 3/2 (|x - z| + |y - w|), meet/join
//   segment       meet(z', w') = meet(x, y) for z' = t x + (1-t) meet,
//                 w' = t y + (1-t) meet; likewise for join
PropertyReport check_ll(const LatticeLikeOps& ops, const Vector& x, const Vector& y, const Vector& z,
                        const Vector& w, double lambda, double t, const PropertyOptions& opt = {});

}  // namespace isocone
