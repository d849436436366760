#include "isocone/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>

#include "isocone/errors.hpp"
#include "isocone/projection.hpp"
#include "isocone/sampling.hpp"

namespace isocone {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Invariant: return "Invariant";
    case Verdict::NotInvariant: return "NotInvariant";
    case Verdict::Isotone: return "Isotone";
    case Verdict::NotIsotone: return "NotIsotone";
    case Verdict::Sublattice: return "Sublattice";
    case Verdict::NotSublattice: return "NotSublattice";
    case Verdict::ProductForm: return "ProductForm";
    case Verdict::NotProductForm: return "NotProductForm";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

bool is_refutation(Verdict v) {
  return v == Verdict::NotInvariant || v == Verdict::NotIsotone || v == Verdict::NotSublattice ||
         v == Verdict::NotProductForm;
}

std::string_view to_string(NormalCase c) {
  switch (c) {
    case NormalCase::PairCone: return "PairCone";
    case NormalCase::GeneratorRay: return "GeneratorRay";
    case NormalCase::DualRay: return "DualRay";
    case NormalCase::NotInvariant: return "NotInvariant";
  }
  return "NotInvariant";
}

std::string_view to_string(FamilyShape s) {
  switch (s) {
    case FamilyShape::Empty: return "empty";
    case FamilyShape::Ray: return "ray";
    case FamilyShape::Wedge: return "wedge";
  }
  return "empty";
}

namespace {

Vector unit_normal_of(const Vector& n, std::string_view what) {
  require_finite(n, what);
  const double len = n.norm();
  if (!(len > 0.0)) throw InvalidArgument(std::string(what) + ": zero normal");
  return n / len;
}

void require_basis(const Cone& k, std::string_view what) {
  if (!k.has_basis()) {
    throw Unsupported(std::string(what) + ": needs a simplicial cone (orthant or simplicial), got " +
                      std::string(to_string(k.kind())));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Hyperplane rule for cones with a basis

InvarianceMargins hyperplane_invariance_margins(const Cone& k, const Vector& normal) {
  require_basis(k, "hyperplane_invariance_margins");
  if (normal.size() != k.dim()) throw DimensionError("hyperplane_invariance_margins: dimension mismatch");
  const Vector a = unit_normal_of(normal, "hyperplane_invariance_margins");
  const Matrix& e = k.generators();
  const Matrix& u = k.dual_basis();
  const Eigen::Index m = a.size();

  InvarianceMargins r;
  // inner products with the basis vectors
  r.beta = e.transpose() * a;
  r.alpha = u.transpose() * a;
  r.products = r.beta * r.alpha.transpose() - Matrix::Identity(m, m);

  // coordinates: E alpha = a and U beta = a
  const Vector alpha2 = k.coordinates(a);
  const Vector beta2 = Eigen::PartialPivLU<Matrix>(u).solve(a);
  const Matrix products2 = beta2 * alpha2.transpose() - Matrix::Identity(m, m);

  r.route_gap = (r.products - products2).cwiseAbs().maxCoeff();
  const double magnitude = std::max(1.0, (r.beta.cwiseAbs() * r.alpha.cwiseAbs().transpose()).maxCoeff());
  const double allowed = 1e-9 * std::max(1.0, k.condition()) * magnitude;
  if (!(r.route_gap <= allowed)) {
    std::ostringstream msg;
    msg << "hyperplane_invariance_margins: inner-product and coordinate routes disagree by " << r.route_gap;
    throw NumericError(msg.str());
  }
  r.margin = r.products.maxCoeff(&r.i, &r.j);
  return r;
}

bool hyperplane_invariant_simplicial(const Cone& k, const Vector& normal, const Tolerance& tol) {
  return hyperplane_invariance_margins(k, normal).margin <= tol.abs;
}

double orthant_pair_margin(const Vector& normal) {
  const Vector a = unit_normal_of(normal, "orthant_pair_margin");
  if (a.size() < 2) return 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = 0; j < a.size(); ++j) {
      if (i != j) worst = std::max(worst, a[i] * a[j]);
    }
  }
  return worst;
}

std::optional<Cone> simplicial_form(const Cone& k) {
  if (k.has_basis()) return k;
  if (k.kind() == ConeKind::Lorentz && k.dim() == 2) {
    Matrix e(2, 2);
    e << 1, -1, 1, 1;
    return Cone::simplicial(e / std::sqrt(2.0));
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Classification

NormalClass classify_normal(const Cone& k, const Vector& normal, double tol) {
  require_basis(k, "classify_normal");
  if (normal.size() != k.dim()) throw DimensionError("classify_normal: dimension mismatch");
  const Vector a = unit_normal_of(normal, "classify_normal");
  const Matrix& e = k.generators();
  const Matrix& u = k.dual_basis();
  const int m = static_cast<int>(a.size());
  const Vector en = e.colwise().norm().transpose();
  const Vector un = u.colwise().norm().transpose();
  const Matrix ge = e.transpose() * e;
  const Matrix gu = u.transpose() * u;

  struct Match {
    NormalCase kind;
    int p, q, sign;
  };
  std::vector<Match> found;
  double residual = std::numeric_limits<double>::infinity();

  auto ray_matches = [&](const Matrix& vectors, const Vector& norms, const Matrix& gram, NormalCase kind) {
    for (int p = 0; p < m; ++p) {
      bool obtuse = true;
      for (int i = 0; i < m && obtuse; ++i) {
        if (i != p && gram(p, i) / (norms[p] * norms[i]) > tol) obtuse = false;
      }
      if (!obtuse) continue;
      for (int sign : {1, -1}) {
        const double r = (a - sign * vectors.col(p) / norms[p]).norm();
        residual = std::min(residual, r);
        if (r <= tol) found.push_back({kind, p, -1, sign});
      }
    }
  };
  ray_matches(e, en, ge, NormalCase::GeneratorRay);
  ray_matches(u, un, gu, NormalCase::DualRay);

  // a = alpha^i e_i = beta^j u_j, normalized per basis vector
  const Vector alpha = (u.transpose() * a).cwiseQuotient(un);
  const Vector beta = (e.transpose() * a).cwiseQuotient(en);
  for (int p = 0; p < m; ++p) {
    for (int q = 0; q < m; ++q) {
      if (p == q) continue;
      double r = std::max({0.0, -alpha[p], alpha[q], -beta[p], beta[q]});
      for (int i = 0; i < m; ++i) {
        if (i != p && i != q) r = std::max({r, std::abs(alpha[i]), std::abs(beta[i])});
      }
      residual = std::min(residual, r);
      if (r <= tol) found.push_back({NormalCase::PairCone, p, q, 0});
    }
  }

  NormalClass c;
  c.residual = residual;
  c.matches = static_cast<int>(found.size());
  if (found.empty()) return c;
  c.kind = found.front().kind;
  c.p = found.front().p;
  c.q = found.front().q;
  c.sign = found.front().sign;
  for (std::size_t i = 1; i < found.size(); ++i) {
    std::ostringstream s;
    s << to_string(found[i].kind) << "(" << found[i].p + 1;
    if (found[i].kind == NormalCase::PairCone) {
      s << "," << found[i].q + 1;
    } else {
      s << "," << (found[i].sign > 0 ? "+" : "-");
    }
    s << ")";
    c.also.push_back(s.str());
  }
  return c;
}

bool ClassifierBand::contains(double margin, double residual) const {
  return (margin > tol && margin <= 10 * kappa * tol) || (residual > tol && residual <= kappa * std::sqrt(10 * tol));
}

ClassifierBand classifier_band(const Cone& k, double tol) {
  require_basis(k, "classifier_band");
  return {tol, k.generators().colwise().norm().maxCoeff() * k.dual_basis().colwise().norm().maxCoeff()};
}

namespace {

// Directions (cos t, sin t), t in [0, pi/2], satisfying <c, (cos t, sin t)> >= 0
// for every inequality and = 0 for every equality; the feasible set is an arc.
struct ArcConstraint {
  double c1, c2;
  double at(double t) const { return c1 * std::cos(t) + c2 * std::sin(t); }
};

// Angles in [0, pi/2] where <c, (cos t, sin t)> = 0.
std::vector<double> arc_roots(const ArcConstraint& c, double tol) {
  std::vector<double> out;
  for (double sgn : {1.0, -1.0}) {
    const double x = -sgn * c.c2;
    const double y = sgn * c.c1;
    if (x >= -tol && y >= -tol) out.push_back(std::atan2(std::max(y, 0.0), std::max(x, 0.0)));
  }
  return out;
}

}  // namespace

std::vector<NormalFamily> enumerate_invariant_normals(const Cone& k, double tol) {
  require_basis(k, "enumerate_invariant_normals");
  const Matrix& e = k.generators();
  const Matrix& u = k.dual_basis();
  const int m = static_cast<int>(k.dim());
  const Vector en = e.colwise().norm().transpose();
  const Vector un = u.colwise().norm().transpose();
  const Matrix ge = e.transpose() * e;
  const Matrix gu = u.transpose() * u;
  const double half_pi = std::acos(0.0);

  std::vector<NormalFamily> out;
  for (int p = 0; p < m; ++p) {
    for (int q = 0; q < m; ++q) {
      if (p == q) continue;
      // a(t) = cos t e_p - sin t e_q lies in cone{e_p, -e_q}; membership in
      // cone{u_p, -u_q} means <a, e_j> = 0 off {p, q}, <a, e_p> >= 0, <a, e_q> <= 0.
      auto normalized = [&](double c1, double c2, double scale) {
        return ArcConstraint{c1 / scale, c2 / scale};
      };
      std::vector<ArcConstraint> eqs;
      std::vector<ArcConstraint> ineqs;
      for (int j = 0; j < m; ++j) {
        if (j == p || j == q) continue;
        const ArcConstraint c = normalized(ge(p, j) / en[p], -ge(q, j) / en[q], en[j]);
        if (std::hypot(c.c1, c.c2) > tol) eqs.push_back(c);
      }
      ineqs.push_back(normalized(ge(p, p) / en[p], -ge(q, p) / en[q], en[p]));
      ineqs.push_back(normalized(-ge(p, q) / en[p], ge(q, q) / en[q], en[q]));

      auto feasible = [&](double t) {
        for (const auto& c : eqs) {
          if (std::abs(c.at(t)) > tol) return false;
        }
        for (const auto& c : ineqs) {
          if (c.at(t) < -tol) return false;
        }
        return true;
      };

      std::vector<double> candidates;
      if (!eqs.empty()) {
        candidates = arc_roots(eqs.front(), tol);
      } else {
        candidates = {0.0, half_pi};
        for (const auto& c : ineqs) {
          for (double t : arc_roots(c, tol)) candidates.push_back(t);
        }
      }
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (double t : candidates) {
        t = std::clamp(t, 0.0, half_pi);
        if (feasible(t)) {
          lo = std::min(lo, t);
          hi = std::max(hi, t);
        }
      }

      NormalFamily f;
      f.kind = NormalCase::PairCone;
      f.p = p;
      f.q = q;
      auto direction = [&](double t) {
        const Vector a = std::cos(t) * e.col(p) / en[p] - std::sin(t) * e.col(q) / en[q];
        return Vector(a / a.norm());
      };
      if (lo > hi) {
        f.shape = FamilyShape::Empty;
      } else if (hi - lo <= 1e-12) {
        f.shape = FamilyShape::Ray;
        f.edges = {direction(lo)};
        f.representative = f.edges.front();
      } else {
        f.shape = FamilyShape::Wedge;
        f.edges = {direction(lo), direction(hi)};
        f.representative = direction(0.5 * (lo + hi));
      }
      out.push_back(std::move(f));
    }
  }

  auto rays = [&](const Matrix& vectors, const Vector& norms, const Matrix& gram, NormalCase kind) {
    for (int p = 0; p < m; ++p) {
      bool obtuse = true;
      for (int i = 0; i < m && obtuse; ++i) {
        if (i != p && gram(p, i) / (norms[p] * norms[i]) > tol) obtuse = false;
      }
      if (!obtuse) continue;
      for (int sign : {1, -1}) {
        NormalFamily f;
        f.kind = kind;
        f.p = p;
        f.sign = sign;
        f.shape = FamilyShape::Ray;
        f.edges = {sign * vectors.col(p) / norms[p]};
        f.representative = f.edges.front();
        out.push_back(std::move(f));
      }
    }
  };
  rays(e, en, ge, NormalCase::GeneratorRay);
  rays(u, un, gu, NormalCase::DualRay);
  return out;
}

Vector sample_family(const NormalFamily& f, std::mt19937_64& rng) {
  if (f.shape == FamilyShape::Empty) throw InvalidArgument("sample_family: empty family");
  if (f.shape == FamilyShape::Ray) return f.edges.front();
  std::uniform_real_distribution<double> w(0.0, 1.0);
  const Vector a = w(rng) * f.edges[0] + w(rng) * f.edges[1];
  return a / a.norm();
}

// ---------------------------------------------------------------------------
// Rules for hyperplanes through the origin

std::optional<HyperplaneRule> hyperplane_rule(const Cone& k, const Vector& normal) {
  if (normal.size() != k.dim()) throw DimensionError("hyperplane_rule: dimension mismatch");
  if (auto s = simplicial_form(k)) {
    return HyperplaneRule{hyperplane_invariance_margins(*s, normal).margin, "hyperplane-product-rule"};
  }
  // P_H is linear on H through 0, so it is K-isotone iff it maps every
  // generator into K. For Facets(N) use K*-isotonicity with K* = cone(N).
  const Vector a = unit_normal_of(normal, "hyperplane_rule");
  auto image_margin = [&](const Cone& target, const Matrix& gens) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < gens.cols(); ++i) {
      const Vector g = gens.col(i);
      const Vector v = g - a.dot(g) * a;
      worst = std::max(worst, distance_to_cone(target, v) / g.norm());
    }
    return worst;
  };
  if (k.kind() == ConeKind::Generators) {
    return HyperplaneRule{image_margin(k, k.generators()), "generator-image-rule"};
  }
  if (k.kind() == ConeKind::Facets) {
    return HyperplaneRule{image_margin(dual_cone(k), k.normals()), "dual-generator-image-rule"};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Lattice operations of a simplicial cone

namespace {
const Cone& basis_cone(const Cone& k, std::optional<Cone>& storage) {
  if (k.has_basis()) return k;
  storage = simplicial_form(k);
  if (!storage) {
    throw Unsupported("lattice operations need a simplicial cone, got " + std::string(to_string(k.kind())));
  }
  return *storage;
}
}  // namespace

Vector lattice_max(const Cone& k, const Vector& x, const Vector& y) {
  std::optional<Cone> st;
  const Cone& b = basis_cone(k, st);
  return b.generators() * b.coordinates(x).cwiseMax(b.coordinates(y));
}

Vector lattice_min(const Cone& k, const Vector& x, const Vector& y) {
  std::optional<Cone> st;
  const Cone& b = basis_cone(k, st);
  return b.generators() * b.coordinates(x).cwiseMin(b.coordinates(y));
}

// ---------------------------------------------------------------------------
// Set-level machinery

namespace {

// A boundary hyperplane of S through `center`, with room `radius` around
// the center inside S (on the hyperplane).
struct Face {
  std::size_t index = 0;
  Vector normal;  // unit, pointing out of S
  Vector center;
  double radius = 0.0;
  bool two_sided = false;
};

struct FaceList {
  std::vector<Face> faces;
  std::vector<FacetVerdict> skipped;  // non-defining or duplicate inequalities
};

FaceList faces_of(const ConvexSet& s, double radius_cap, const Tolerance& tol) {
  FaceList out;
  if (const auto* h = std::get_if<Hyperplane>(&s)) {
    out.faces.push_back({0, h->unit_normal(), h->anchor(), radius_cap, true});
    return out;
  }
  if (const auto* h = std::get_if<Halfspace>(&s)) {
    out.faces.push_back({0, h->boundary().unit_normal(), h->anchor(), radius_cap, false});
    return out;
  }
  const auto& p = std::get<Polyhedron>(s);
  try {
    interior_point_of(p, tol);
  } catch (const InvalidArgument&) {
    throw Unsupported("polyhedron has empty interior; lower-dimensional sets are not supported");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    const FacetInfo info = facet_info(p, i, tol);
    const Vector n = p.halfspaces()[i].normal() / p.halfspaces()[i].normal().norm();
    if (!info.defining || info.duplicate) {
      FacetVerdict v;
      v.index = i;
      v.normal = n;
      v.defining = info.defining;
      v.duplicate = info.duplicate;
      v.method = info.duplicate ? "duplicate" : "redundant";
      out.skipped.push_back(std::move(v));
      continue;
    }
    out.faces.push_back({i, n, info.center, std::min(0.5 * info.margin, radius_cap), false});
  }
  return out;
}

double check_threshold(const ConvexSet& s, const CheckOptions& opt) {
  return opt.tol.at(10.0 * opt.spread * set_scale(s));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer, so sub-streams of one seed are decorrelated
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vector gaussian_vector(std::mt19937_64& rng, Eigen::Index m, double sigma) {
  std::normal_distribution<double> n(0.0, sigma);
  Vector v(m);
  for (Eigen::Index i = 0; i < m; ++i) v[i] = n(rng);
  return v;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

// Unit direction d in the hyperplane {<a, x> = 0} maximizing |<a, P_K d>|:
// moving one point of a pair along d makes the meet or the join leave the
// hyperplane by |<a, P_K d>| per unit step.
struct ExitDirection {
  Vector d;
  double s = 0.0;  // <a, P_K d>
};

ExitDirection best_exit_direction(const Cone& k, const Vector& a, std::uint64_t seed) {
  const Eigen::Index m = a.size();
  const Matrix basis = tangent_basis(a);
  std::vector<Vector> raw;
  for (Eigen::Index i = 0; i < basis.cols(); ++i) raw.push_back(basis.col(i));
  for (Eigen::Index i = 0; i < m; ++i) raw.push_back(Vector::Unit(m, i));
  if (k.kind() == ConeKind::Orthant || k.kind() == ConeKind::Simplicial || k.kind() == ConeKind::Generators) {
    for (Eigen::Index i = 0; i < k.generators().cols(); ++i) raw.push_back(k.generators().col(i));
  }
  if (k.has_basis()) {
    for (Eigen::Index i = 0; i < m; ++i) raw.push_back(k.dual_basis().col(i));
  }
  if (k.kind() == ConeKind::Facets) {
    for (Eigen::Index i = 0; i < k.normals().cols(); ++i) raw.push_back(k.normals().col(i));
  }
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 32; ++i) raw.push_back(basis * gaussian_vector(rng, basis.cols(), 1.0));

  ExitDirection best;
  best.d = Vector::Zero(m);
  for (const Vector& r : raw) {
    for (double sgn : {1.0, -1.0}) {
      Vector d = sgn * (r - a.dot(r) * a);
      const double len = d.norm();
      if (len <= 1e-12 * std::max(1.0, r.norm())) continue;
      d /= len;
      const double s = a.dot(project_cone(k, d));
      if (std::abs(s) > std::abs(best.s)) best = {d, s};
    }
  }
  return best;
}

// Places the pair at the face center so that the meet (s < 0) or the join
// (s > 0) leaves S through the face.
Counterexample face_witness(const LatticeLikeOps& ops, const ConvexSet& s, const Face& f,
                            const ExitDirection& dir) {
  const double t = f.radius;
  Counterexample c;
  c.source = "exact";
  LatOp op;
  if (dir.s > 0) {
    op = LatOp::Join;
    c.x = f.center;
    c.y = f.center + t * dir.d;
  } else {
    op = LatOp::Meet;
    c.x = f.center + t * dir.d;
    c.y = f.center;
  }
  c.relation = std::string(to_string(op));
  const Vector v = ops.apply(op, c.x, c.y);
  c.derived.emplace_back(c.relation, v);
  c.residual = set_violation(s, v);
  return c;
}

Verdict banded(double margin, double tol, Verdict pass, Verdict fail) {
  if (margin <= tol) return pass;
  if (margin > 10.0 * tol) return fail;
  return Verdict::Inconclusive;
}

struct AnalyzeFlags {
  bool exact = true;
  bool sampled = true;
};

CheckReport analyze_invariance(const ConvexSet& s, const Cone& k, const CheckOptions& opt, AnalyzeFlags flags) {
  if (set_dim(s) != k.dim()) throw DimensionError("set_invariant: set and cone dimensions differ");
  const LatticeLikeOps ops(k);
  CheckReport r;
  r.check = "invariant";
  r.threshold = check_threshold(s, opt);
  const double scale = opt.spread * set_scale(s);

  // (a) exact rules on the boundary hyperplanes, with a constructed witness
  // for every face that is not certified
  bool all_certified = true;
  bool exact_refuted = false;
  std::optional<Counterexample> exact_witness;
  if (flags.exact) {
    FaceList fl = faces_of(s, scale, opt.tol);
    if (fl.faces.empty()) throw InvalidArgument("set_invariant: the set has no facets");
    if (std::holds_alternative<Halfspace>(s)) r.clauses.push_back("halfspace-boundary-rule");
    if (std::holds_alternative<Polyhedron>(s)) {
      r.clauses.push_back("facet-intersection-rule");
      r.clauses.push_back("tangent-hyperplane-rule");
    }
    bool rule_clause_added = false;
    for (const Face& f : fl.faces) {
      FacetVerdict fv;
      fv.index = f.index;
      fv.normal = f.normal;
      std::optional<HyperplaneRule> rule = hyperplane_rule(k, f.normal);
      if (rule) {
        fv.margin = rule->margin;
        fv.method = "exact";
        fv.verdict = banded(rule->margin, opt.tol.abs, Verdict::Invariant, Verdict::NotInvariant);
        if (!rule_clause_added) {
          r.clauses.push_back(rule->clause);
          rule_clause_added = true;
        }
      } else {
        fv.method = "witness";
        fv.verdict = Verdict::Inconclusive;
      }
      if (fv.verdict != Verdict::Invariant) {
        all_certified = false;
        const ExitDirection dir = best_exit_direction(k, f.normal, mix_seed(opt.seed, 1000 + f.index));
        if (dir.s != 0.0 && f.radius > 0.0) {
          Counterexample c = face_witness(ops, s, f, dir);
          if (c.residual > 10.0 * r.threshold) {
            if (fv.verdict == Verdict::Inconclusive && !rule) fv.verdict = Verdict::NotInvariant;
            if (fv.verdict == Verdict::NotInvariant && !exact_witness) exact_witness = c;
          }
          r.max_residual = std::max(r.max_residual, c.residual);
        }
        if (fv.verdict == Verdict::NotInvariant) {
          exact_refuted = true;
          if (rule && !exact_witness) {
            r.notes.push_back("facet " + std::to_string(f.index + 1) +
                              " fails the exact rule but no witness above the guard band was constructed");
          }
        }
      }
      r.facets.push_back(std::move(fv));
    }
    for (auto& v : fl.skipped) r.facets.push_back(std::move(v));
    std::sort(r.facets.begin(), r.facets.end(),
              [](const FacetVerdict& a, const FacetVerdict& b) { return a.index < b.index; });
  }

  // (b) randomized refutation with the meet and the join
  std::optional<Counterexample> sampled_witness;
  if (flags.sampled && opt.samples > 0) {
    r.clauses.push_back("sampled-meet-join");
    SetSampler sampler(s, mix_seed(opt.seed, 0), scale);
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const Vector x = sampler.next();
      const Vector y = sampler.next();
      r.samples_used = i + 1;
      for (LatOp op : {LatOp::Meet, LatOp::Join}) {
        const Vector v = ops.apply(op, x, y);
        const double res = set_violation(s, v);
        r.max_residual = std::max(r.max_residual, res);
        if (res > 10.0 * r.threshold && !sampled_witness) {
          Counterexample c;
          c.relation = std::string(to_string(op));
          c.x = x;
          c.y = y;
          c.derived.emplace_back(c.relation, v);
          c.residual = res;
          c.source = "sampled";
          c.sample_index = i;
          sampled_witness = std::move(c);
        }
      }
      if (sampled_witness) break;
    }
  }

  const bool exact_certified = flags.exact && all_certified;
  if (exact_witness) {
    r.verdict = Verdict::NotInvariant;
    r.method = sampled_witness ? "exact+sampled" : "exact";
    r.counterexample = exact_witness;
  } else if (sampled_witness) {
    r.verdict = Verdict::NotInvariant;
    r.method = "sampled";
    r.counterexample = sampled_witness;
    if (exact_certified) {
      r.consistent = false;
      r.notes.push_back("sampling refuted a set certified by the exact rule");
    }
  } else if (exact_certified) {
    r.verdict = Verdict::Invariant;
    r.method = (flags.sampled && opt.samples > 0) ? "exact+sampled" : "exact";
  } else {
    r.verdict = Verdict::Inconclusive;
    r.method = flags.exact ? "exact+sampled" : "sampled";
    if (!exact_refuted) r.notes.push_back("no exact rule applies to every facet and sampling found no violation");
  }
  return r;
}

}  // namespace

CheckReport set_invariant(const ConvexSet& s, const Cone& k, const CheckOptions& opt) {
  return analyze_invariance(s, k, opt, AnalyzeFlags{});
}

CheckReport isotone_test(const ConvexSet& s, const Cone& k, const CheckOptions& opt) {
  const Eigen::Index m = set_dim(s);
  if (m != k.dim()) throw DimensionError("isotone_test: set and cone dimensions differ");
  CheckReport r;
  r.check = "isotone";
  r.method = "sampled";
  r.threshold = check_threshold(s, opt);
  r.clauses.push_back("sampled-comparable-pairs");
  const double scale = opt.spread * set_scale(s);
  const FaceList fl = faces_of(s, scale, opt.tol);

  SetSampler sampler(s, mix_seed(opt.seed, 0), scale);
  std::mt19937_64 rng(mix_seed(opt.seed, 1));
  std::uniform_int_distribution<std::size_t> pick(0, fl.faces.empty() ? 0 : fl.faces.size() - 1);
  for (std::size_t i = 0; i < opt.samples; ++i) {
    Vector x;
    if (i % 2 == 0 || fl.faces.empty()) {
      x = sampler.next() + gaussian_vector(rng, m, log_uniform(rng, 1e-2, 1.0) * scale);
    } else {
      // near a face, on its outer side
      const Face& f = fl.faces[pick(rng)];
      Vector g = gaussian_vector(rng, m, 1.0);
      g -= f.normal.dot(g) * f.normal;
      if (g.norm() > 0) g *= f.radius / g.norm() * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const double out = log_uniform(rng, 1e-3, 1.0) * scale;
      x = f.center + g + (f.two_sided && (i / 2) % 2 ? -out : out) * f.normal;
    }
    const Vector kk = project_cone(k, gaussian_vector(rng, m, log_uniform(rng, 1e-2, 1.0) * scale));
    const Vector y = x + kk;
    const Vector px = project_set(s, x);
    const Vector py = project_set(s, y);
    const double res = distance_to_cone(k, py - px);
    r.samples_used = i + 1;
    r.max_residual = std::max(r.max_residual, res);
    if (res > 10.0 * r.threshold) {
      Counterexample c;
      c.relation = "isotone";
      c.x = x;
      c.y = y;
      c.derived = {{"px", px}, {"py", py}, {"difference", py - px}};
      c.residual = res;
      c.source = "sampled";
      c.sample_index = i;
      r.counterexample = std::move(c);
      r.verdict = Verdict::NotIsotone;
      return r;
    }
  }
  r.verdict = r.max_residual <= r.threshold ? Verdict::Isotone : Verdict::Inconclusive;
  return r;
}

CheckReport sublattice_test(const ConvexSet& s, const Cone& k, const CheckOptions& opt) {
  const Eigen::Index m = set_dim(s);
  if (m != k.dim()) throw DimensionError("sublattice_test: set and cone dimensions differ");
  std::optional<Cone> form = simplicial_form(k);
  if (!form) {
    throw Unsupported("sublattice_test: needs a simplicial cone, got " + std::string(to_string(k.kind())));
  }
  if (!is_subdual(*form, opt.tol)) {
    throw Unsupported(
        "sublattice_test: the cone is not subdual (some generator lies outside the dual cone), so "
        "isotone projection does not imply the sublattice property");
  }
  CheckReport r;
  r.check = "sublattice";
  r.threshold = check_threshold(s, opt);

  CheckOptions exact_opt = opt;
  exact_opt.samples = 0;
  CheckReport inv = set_invariant(s, k, exact_opt);
  const bool certified = inv.verdict == Verdict::Invariant;
  if (certified) r.clauses.push_back("subdual-invariant-sublattice");
  r.clauses.push_back("sampled-lattice-max-min");

  auto test_pair = [&](const Vector& x, const Vector& y, const std::string& source,
                       std::size_t index) -> std::optional<Counterexample> {
    for (const char* rel : {"lattice-max", "lattice-min"}) {
      const Vector v = std::string(rel) == "lattice-max" ? lattice_max(*form, x, y) : lattice_min(*form, x, y);
      const double res = set_violation(s, v);
      r.max_residual = std::max(r.max_residual, res);
      if (res > 10.0 * r.threshold) {
        Counterexample c;
        c.relation = rel;
        c.x = x;
        c.y = y;
        c.derived.emplace_back(rel, v);
        c.residual = res;
        c.source = source;
        c.sample_index = index;
        return c;
      }
    }
    return std::nullopt;
  };

  std::optional<Counterexample> witness;
  if (inv.counterexample) witness = test_pair(inv.counterexample->x, inv.counterexample->y, "exact", 0);
  if (!witness) {
    SetSampler sampler(s, mix_seed(opt.seed, 0), opt.spread * set_scale(s));
    for (std::size_t i = 0; i < opt.samples && !witness; ++i) {
      const Vector x = sampler.next();
      const Vector y = sampler.next();
      r.samples_used = i + 1;
      witness = test_pair(x, y, "sampled", i);
    }
  }

  if (witness) {
    r.verdict = Verdict::NotSublattice;
    r.method = witness->source;
    r.counterexample = witness;
    if (certified) {
      r.consistent = false;
      r.notes.push_back("a set certified invariant for a subdual cone failed the sublattice test");
    }
  } else if (certified) {
    r.verdict = Verdict::Sublattice;
    r.method = opt.samples > 0 ? "exact+sampled" : "exact";
  } else {
    r.verdict = Verdict::Inconclusive;
    r.method = "sampled";
    r.notes.push_back("no exact certificate; sampling found no violation");
  }
  return r;
}

CheckReport lorentz_product_check(const ConvexSet& s, const CheckOptions& opt) {
  const Eigen::Index m = set_dim(s);
  if (m < 3) throw DimensionError("lorentz_product_check: needs dimension at least 3");
  if (std::holds_alternative<Hyperplane>(s)) {
    throw Unsupported("lorentz_product_check: a hyperplane has empty interior");
  }
  CheckReport r;
  r.check = "lorentz-product";
  r.method = "exact";
  r.threshold = check_threshold(s, opt);
  r.clauses.push_back("lorentz-cylinder-rule");

  const FaceList fl = faces_of(s, opt.spread * set_scale(s), opt.tol);
  bool all_pass = true;
  bool any_fail = false;
  for (const Face& f : fl.faces) {
    FacetVerdict fv;
    fv.index = f.index;
    fv.normal = f.normal;
    fv.margin = std::abs(f.normal[m - 1]);
    fv.method = "exact";
    fv.verdict = banded(*fv.margin, opt.tol.abs, Verdict::ProductForm, Verdict::NotProductForm);
    all_pass = all_pass && fv.verdict == Verdict::ProductForm;
    any_fail = any_fail || fv.verdict == Verdict::NotProductForm;
    r.facets.push_back(std::move(fv));
  }
  r.verdict = any_fail ? Verdict::NotProductForm : (all_pass ? Verdict::ProductForm : Verdict::Inconclusive);

  const Cone lorentz = Cone::lorentz(static_cast<int>(m));
  CheckReport iso = isotone_test(s, lorentz, opt);
  CheckReport inv = set_invariant(s, lorentz, opt);
  const bool refuted = is_refutation(iso.verdict) || is_refutation(inv.verdict);
  if (r.verdict == Verdict::ProductForm && refuted) {
    r.consistent = false;
    r.notes.push_back("a cylinder along the last axis was refuted by sampling");
  }
  if (r.verdict == Verdict::NotProductForm) {
    if (iso.counterexample) {
      r.counterexample = iso.counterexample;
    } else if (inv.counterexample) {
      r.counterexample = inv.counterexample;
    }
    if (!is_refutation(inv.verdict)) r.notes.push_back("no invariance witness was found");
    if (!is_refutation(iso.verdict)) r.notes.push_back("isotone sampling found no violating pair");
  }
  r.samples_used = iso.samples_used + inv.samples_used;
  r.max_residual = std::max(iso.max_residual, inv.max_residual);
  r.subchecks.push_back(std::move(iso));
  r.subchecks.push_back(std::move(inv));
  return r;
}

CheckReport tangent_facets_invariant(const Polyhedron& p, const Cone& k, const CheckOptions& opt) {
  const ConvexSet s = p;
  if (p.dim() != k.dim()) throw DimensionError("tangent_facets_invariant: set and cone dimensions differ");
  CheckReport r;
  r.check = "tangent-facets";
  r.method = "exact";
  r.threshold = check_threshold(s, opt);
  r.clauses.push_back("tangent-hyperplane-rule");
  r.clauses.push_back("facet-intersection-rule");

  const FaceList fl = faces_of(s, opt.spread * set_scale(s), opt.tol);
  if (fl.faces.empty()) throw InvalidArgument("tangent_facets_invariant: no facets");
  bool all_invariant = true;
  bool any_refuted = false;
  for (const Face& f : fl.faces) {
    CheckOptions fo = opt;
    fo.seed = mix_seed(opt.seed, 2000 + f.index);
    const CheckReport sub = set_invariant(Hyperplane(f.normal, f.center), k, fo);
    FacetVerdict fv;
    fv.index = f.index;
    fv.normal = f.normal;
    fv.verdict = sub.verdict;
    fv.method = sub.method;
    if (!sub.facets.empty()) fv.margin = sub.facets.front().margin;
    all_invariant = all_invariant && sub.verdict == Verdict::Invariant;
    any_refuted = any_refuted || sub.verdict == Verdict::NotInvariant;
    r.facets.push_back(std::move(fv));
    r.samples_used += sub.samples_used;
  }
  for (const auto& v : fl.skipped) r.facets.push_back(v);
  std::sort(r.facets.begin(), r.facets.end(),
            [](const FacetVerdict& a, const FacetVerdict& b) { return a.index < b.index; });

  r.verdict = any_refuted ? Verdict::NotInvariant : (all_invariant ? Verdict::Invariant : Verdict::Inconclusive);

  // the polyhedron itself, by sampling alone
  CheckReport sampled = analyze_invariance(s, k, opt, AnalyzeFlags{false, true});
  r.samples_used += sampled.samples_used;
  r.max_residual = sampled.max_residual;
  if (all_invariant && is_refutation(sampled.verdict)) {
    r.consistent = false;
    r.notes.push_back("every facet hyperplane is invariant but sampling refuted the polyhedron");
  }
  if (any_refuted) {
    CheckOptions exact_opt = opt;
    exact_opt.samples = 0;
    CheckReport witness = set_invariant(s, k, exact_opt);
    r.counterexample = witness.counterexample ? witness.counterexample : sampled.counterexample;
    if (!is_refutation(sampled.verdict)) r.notes.push_back("sampling on the polyhedron did not reach a violation");
  }
  r.subchecks.push_back(std::move(sampled));
  return r;
}

double replay(const Counterexample& c, const ConvexSet& s, const Cone& k, const Tolerance& tol) {
  const double premise = 10.0 * tol.at(1.0 + c.x.norm() + c.y.norm());
  if (c.relation == "isotone") {
    if (distance_to_cone(k, c.y - c.x) > premise) throw InvalidArgument("replay: x <=_K y does not hold");
    return distance_to_cone(k, project_set(s, c.y) - project_set(s, c.x));
  }
  if (set_violation(s, c.x) > premise || set_violation(s, c.y) > premise) {
    throw InvalidArgument("replay: the pair does not lie in the set");
  }
  if (c.relation == "lattice-max") return set_violation(s, lattice_max(k, c.x, c.y));
  if (c.relation == "lattice-min") return set_violation(s, lattice_min(k, c.x, c.y));
  const std::optional<LatOp> op = parse_latop(c.relation);
  if (!op) throw InvalidArgument("replay: unknown relation '" + c.relation + "'");
  return set_violation(s, LatticeLikeOps(k).apply(*op, c.x, c.y));
}

}  // namespace isocone
