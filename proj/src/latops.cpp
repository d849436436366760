#include "isocone/latops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "isocone/errors.hpp"

namespace isocone {

std::string_view to_string(LatOp op) {
  switch (op) {
    case LatOp::Meet: return "meet";
    case LatOp::Join: return "join";
    case LatOp::MeetStar: return "meet-star";
    case LatOp::JoinStar: return "join-star";
  }
  return "unknown";
}

std::optional<LatOp> parse_latop(std::string_view name) {
  for (LatOp op : {LatOp::Meet, LatOp::Join, LatOp::MeetStar, LatOp::JoinStar}) {
    if (name == to_string(op)) return op;
  }
  return std::nullopt;
}

LatticeLikeOps::LatticeLikeOps(Cone cone, double path_tolerance)
    : cone_(std::move(cone)), dual_(dual_cone(cone_)), path_tolerance_(path_tolerance) {}

LatOpResult LatticeLikeOps::evaluate(LatOp op, const Vector& x, const Vector& y) const {
  require_same_dim(x, y, "lattice-like operation");
  if (x.size() != cone_.dim()) throw DimensionError("lattice-like operation: cone dimension mismatch");
  const bool star = op == LatOp::MeetStar || op == LatOp::JoinStar;
  const Cone& own = star ? dual_ : cone_;
  const Cone& other = star ? cone_ : dual_;

  LatOpResult r;
  if (op == LatOp::Meet || op == LatOp::MeetStar) {
    // P_{x - C} y with P_{-C} v = -P_C(-v)
    r.value = project_translated([&](const Vector& v) -> Vector { return -project_cone(own, -v); }, x, y);
    r.identity = y - project_cone(other, y - x);
  } else {
    r.value = project_translated([&](const Vector& v) { return project_cone(own, v); }, x, y);
    r.identity = y + project_cone(other, x - y);
  }
  r.path_gap = (r.value - r.identity).norm() / (1.0 + x.norm() + y.norm());
  r.paths_agree = r.path_gap <= path_tolerance_;
  return r;
}

Vector LatticeLikeOps::apply(LatOp op, const Vector& x, const Vector& y) const {
  LatOpResult r = evaluate(op, x, y);
  if (!r.paths_agree) {
    std::ostringstream msg;
    msg << to_string(op) << ": definition and dual-cone paths disagree (scaled gap " << r.path_gap
        << ")";
    throw NumericError(msg.str());
  }
  return std::move(r.value);
}

double l0_swap_residual(const LatticeLikeOps& ops, const Vector& x, const Vector& y) {
  const double s = 1.0 + x.norm() + y.norm();
  const double a = (ops.meet_star(x, y) - ops.meet(y, x)).norm();
  const double b = (ops.join_star(x, y) - ops.join(y, x)).norm();
  return std::max(a, b) / s;
}

bool check_l0_swap(const LatticeLikeOps& ops, const Vector& x, const Vector& y, double tol) {
  return l0_swap_residual(ops, x, y) <= tol;
}

bool PropertyReport::all_pass() const {
  return std::all_of(items.begin(), items.end(), [](const PropertyItem& i) { return i.pass; });
}

double PropertyReport::max_residual() const {
  double r = 0.0;
  for (const PropertyItem& i : items) r = std::max(r, i.residual);
  return r;
}

const PropertyItem* PropertyReport::find(std::string_view item) const {
  for (const PropertyItem& i : items) {
    if (i.item == item) return &i;
  }
  return nullptr;
}

namespace {

class ItemBuilder {
 public:
  ItemBuilder(std::string name, double tol) : tol_(tol) { item_.item = std::move(name); }

  // Residual that must stay below the tolerance.
  void bound(double residual) {
    item_.residual = std::max(item_.residual, residual);
    if (!(residual <= tol_)) item_.pass = false;
  }
  // A failure that is not a residual (e.g. a violated implication).
  void fail() { item_.pass = false; }

  PropertyItem done() { return std::move(item_); }

 private:
  PropertyItem item_;
  double tol_;
};

}  // namespace

PropertyReport check_ll(const LatticeLikeOps& ops, const Vector& x, const Vector& y, const Vector& z,
                        const Vector& w, double lambda, double t, const PropertyOptions& opt) {
  if (!(lambda > 0.0)) throw InvalidArgument("check_ll: lambda must be positive");
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("check_ll: t must lie in [0, 1]");
  require_same_dim(x, y, "check_ll");
  require_same_dim(x, z, "check_ll");
  require_same_dim(x, w, "check_ll");

  const Cone& k = ops.cone();
  const Cone& ks = ops.dual();
  const double s = 1.0 + x.norm() + y.norm() + z.norm() + w.norm();
  const double tol = opt.tolerance;
  auto rel = [&](const Vector& a, const Vector& b) { return (a - b).norm() / s; };
  // scaled distance of b - a from C, i.e. how far "a <=_C b" is from holding
  auto order = [&](const Cone& c, const Vector& a, const Vector& b) {
    return distance_to_cone(c, b - a) / s;
  };

  auto meet = [&](const Vector& a, const Vector& b) { return ops.meet(a, b); };
  auto join = [&](const Vector& a, const Vector& b) { return ops.join(a, b); };
  auto meet_s = [&](const Vector& a, const Vector& b) { return ops.meet_star(a, b); };
  auto join_s = [&](const Vector& a, const Vector& b) { return ops.join_star(a, b); };

  const Vector mxy = meet(x, y);
  const Vector jxy = join(x, y);
  const Vector msxy = meet_s(x, y);
  const Vector jsxy = join_s(x, y);

  PropertyReport report;
  report.witness = PropertyWitness{x, y, z, w, lambda, t};

  // An equality case: when the hypothesis holds, the value must equal `target`;
  // when the value equals `target`, the hypothesis must hold (looser bound).
  auto equality_case = [&](ItemBuilder& b, double hypothesis, const Vector& value, const Vector& target) {
    const double eq = rel(value, target);
    if (hypothesis <= 0.5 * tol) b.bound(eq);
    if (eq <= tol && !(hypothesis <= opt.converse_tolerance)) b.fail();
  };

  {
    ItemBuilder b("order-lower", tol);
    b.bound(order(k, mxy, x));
    b.bound(order(ks, mxy, y));
    b.bound(order(ks, msxy, x));
    b.bound(order(k, msxy, y));
    equality_case(b, order(ks, x, y), mxy, x);
    equality_case(b, order(k, y, x), mxy, y);
    equality_case(b, order(k, x, y), msxy, x);
    equality_case(b, order(ks, y, x), msxy, y);
    report.items.push_back(b.done());
  }
  {
    ItemBuilder b("order-upper", tol);
    b.bound(order(k, x, jxy));
    b.bound(order(ks, y, jxy));
    b.bound(order(ks, x, jsxy));
    b.bound(order(k, y, jsxy));
    equality_case(b, order(ks, y, x), jxy, x);
    equality_case(b, order(k, x, y), jxy, y);
    equality_case(b, order(k, y, x), jsxy, x);
    equality_case(b, order(ks, x, y), jsxy, y);
    report.items.push_back(b.done());
  }
  {
    ItemBuilder b("sum", tol);
    const Vector target = x + y;
    b.bound(rel(mxy + jsxy, target));
    b.bound(rel(msxy + jxy, target));
    b.bound(rel(mxy + join(y, x), target));
    b.bound(rel(msxy + join_s(y, x), target));
    report.items.push_back(b.done());
  }
  {
    ItemBuilder b("translation", tol);
    const Vector xz = x + z;
    const Vector yz = y + z;
    b.bound(rel(meet(xz, yz), mxy + z));
    b.bound(rel(join(xz, yz), jxy + z));
    b.bound(rel(meet_s(xz, yz), msxy + z));
    b.bound(rel(join_s(xz, yz), jsxy + z));
    report.items.push_back(b.done());
  }
  {
    ItemBuilder b("homogeneity", tol);
    const Vector lx = lambda * x;
    const Vector ly = lambda * y;
    const double ls = std::max(1.0, lambda);
    b.bound(rel(meet(lx, ly), lambda * mxy) / ls);
    b.bound(rel(join(lx, ly), lambda * jxy) / ls);
    b.bound(rel(meet_s(lx, ly), lambda * msxy) / ls);
    b.bound(rel(join_s(lx, ly), lambda * jsxy) / ls);
    report.items.push_back(b.done());
  }
  {
    ItemBuilder b("orthogonality", tol);
    b.bound(std::abs((x - mxy).dot(jsxy - x)) / (s * s));
    b.bound(std::abs((x - msxy).dot(jxy - x)) / (s * s));
    report.items.push_back(b.done());
  }
  {
    ItemBuilder b("negation", tol);
    b.bound(rel(join(-x, -y), -mxy));
    b.bound(rel(join_s(-x, -y), -msxy));
    report.items.push_back(b.done());
  }
  {
    ItemBuilder b("lipschitz", tol);
    const double bound = 1.5 * ((x - z).norm() + (y - w).norm());
    b.bound(std::max(0.0, (mxy - meet(z, w)).norm() - bound) / s);
    b.bound(std::max(0.0, (jxy - join(z, w)).norm() - bound) / s);
    report.items.push_back(b.done());
  }
  {
    ItemBuilder b("segment", tol);
    const Vector zm = t * x + (1 - t) * mxy;
    const Vector wm = t * y + (1 - t) * mxy;
    b.bound(rel(meet(zm, wm), mxy));
    const Vector zj = t * x + (1 - t) * jxy;
    const Vector wj = t * y + (1 - t) * jxy;
    b.bound(rel(join(zj, wj), jxy));
    report.items.push_back(b.done());
  }
  return report;
}

}  // namespace isocone
