#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "isocone/cones.hpp"
#include "isocone/latops.hpp"
#include "isocone/sets.hpp"

namespace isocone {

enum class Verdict {
  Invariant,
  NotInvariant,
  Isotone,
  NotIsotone,
  Sublattice,
  NotSublattice,
  ProductForm,
  NotProductForm,
  Inconclusive,
};

std::string_view to_string(Verdict v);
bool is_refutation(Verdict v);

// A pair (x, y) and what was computed from it. `relation` names the
// operation that broke: a lattice-like operation ("meet", "join", ...),
// "isotone" (x <=_K y but P x not <=_K P y), or "lattice-max"/"lattice-min"
// for the simplicial lattice operations.
struct Counterexample {
  std::string relation;
  Vector x;
  Vector y;
  std::vector<std::pair<std::string, Vector>> derived;
  double residual = 0.0;
  std::string source;        // "exact" (constructed) or "sampled"
  std::size_t sample_index = 0;
};

struct FacetVerdict {
  std::size_t index = 0;
  Vector normal;  // unit
  bool defining = true;
  bool duplicate = false;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<double> margin;  // value of the exact rule, when one applies
  std::string method;
};

struct CheckReport {
  std::string check;
  Verdict verdict = Verdict::Inconclusive;
  std::string method;  // "exact", "sampled", "exact+sampled", "witness"
  std::optional<Counterexample> counterexample;
  std::size_t samples_used = 0;
  double max_residual = 0.0;
  double threshold = 0.0;  // residuals above 10 * threshold are violations
  std::vector<std::string> clauses;
  std::vector<FacetVerdict> facets;
  std::vector<CheckReport> subchecks;
  std::vector<std::string> notes;
  bool consistent = true;
};

struct CheckOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  double spread = 1.0;  // sampling radius, in units of set_scale(S)
  Tolerance tol;
};

// ---------------------------------------------------------------------------
// Hyperplanes through the origin and simplicial cones

// M(i, j) = <a, e_i><a, u_j> - delta_ij for the unit vector a = n / |n|.
// The products are formed twice: from inner products with the columns of E
// and U, and from LU solves for the U- and E-coordinates of a. NumericError
// when the two disagree.
struct InvarianceMargins {
  Matrix products;
  Vector alpha;  // alpha^i = <a, u_i>, coordinates of a in the basis e
  Vector beta;   // beta^j = <a, e_j>, coordinates of a in the basis u
  double margin = 0.0;  // max entry of products
  Eigen::Index i = 0, j = 0;
  double route_gap = 0.0;
};

InvarianceMargins hyperplane_invariance_margins(const Cone& k, const Vector& normal);
// margin <= tol.abs. Unsupported for cones without a basis.
bool hyperplane_invariant_simplicial(const Cone& k, const Vector& normal, const Tolerance& tol = {});
// max_{i != j} a^i a^j for the unit vector a = n / |n|; <= 0 is the orthant rule.
double orthant_pair_margin(const Vector& normal);

// Orthant, Simplicial and two-dimensional Lorentz cones, written with a basis.
std::optional<Cone> simplicial_form(const Cone& k);

enum class NormalCase { PairCone, GeneratorRay, DualRay, NotInvariant };
std::string_view to_string(NormalCase c);

// Indices are 0-based here and 1-based in serialized output.
struct NormalClass {
  NormalCase kind = NormalCase::NotInvariant;
  int p = -1;
  int q = -1;
  int sign = 0;
  int matches = 0;  // how many cases matched; the first in the order ray, dual ray, pair is reported
  std::vector<std::string> also;
  // Smallest case residual over all cases; a case matches when its residual is <= tol.
  double residual = 0.0;
};

// First match in the order GeneratorRay, DualRay, PairCone. `tol` bounds the
// scale-free residuals |a - s e_p/|e_p||, <e_p, e_i>/(|e_p||e_i|) and
// <a, u_i>/|u_i|, <a, e_j>/|e_j|.
NormalClass classify_normal(const Cone& k, const Vector& normal, double tol = 1e-9);

// Where classify_normal and the product rule may legitimately disagree. With
// kappa = max_i |e_i| * max_j |u_j|, a normal with classifier residual r has
// product margin at most kappa * r, while a product margin <= tol only bounds
// r by a multiple of kappa * sqrt(tol): the margin is quadratic in
// perturbations that keep the sign pattern. The band is
//   margin in (tol, 10 kappa tol]  or  residual in (tol, kappa sqrt(10 tol)],
// and outside it the two decisions must coincide.
struct ClassifierBand {
  double tol = 1e-9;
  double kappa = 1.0;
  bool contains(double margin, double residual) const;
};
ClassifierBand classifier_band(const Cone& k, double tol = 1e-9);

enum class FamilyShape { Empty, Ray, Wedge };
std::string_view to_string(FamilyShape s);

// One family of invariant unit normals: a ray or a 2D wedge with edges
// `edges` (unit vectors), and a representative unit normal inside it.
struct NormalFamily {
  NormalCase kind = NormalCase::PairCone;
  int p = -1;
  int q = -1;
  int sign = 0;
  FamilyShape shape = FamilyShape::Empty;
  std::vector<Vector> edges;
  Vector representative;
};

// Every ordered pair (p, q) with the shape of cone{e_p, -e_q} ∩ cone{u_p, -u_q}
// (empty entries included), followed by all qualifying rays ±e_p and ±u_p.
std::vector<NormalFamily> enumerate_invariant_normals(const Cone& k, double tol = 1e-9);

// A unit normal drawn from a nonempty family: edges mixed with random
// nonnegative weights.
Vector sample_family(const NormalFamily& f, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Set-level checks

// Exact rule for the hyperplane through the origin with normal n, when one
// exists for this cone: the product rule for cones with a basis, the image
// of generators under P_H for Generators/Facets cones. <= tol means
// invariant.
struct HyperplaneRule {
  double margin = 0.0;
  std::string clause;
};
std::optional<HyperplaneRule> hyperplane_rule(const Cone& k, const Vector& normal);

// Combined exact / constructed-witness / sampled invariance check.
CheckReport set_invariant(const ConvexSet& s, const Cone& k, const CheckOptions& opt = {});

// Samples n comparable pairs x <=_K y and checks P_S x <=_K P_S y.
CheckReport isotone_test(const ConvexSet& s, const Cone& k, const CheckOptions& opt = {});

// Sublattice test of S in (R^m, <=_K) for a subdual simplicial K.
CheckReport sublattice_test(const ConvexSet& s, const Cone& k, const CheckOptions& opt = {});

// The cylinder test against the Lorentz cone of dimension dim(S) >= 3.
CheckReport lorentz_product_check(const ConvexSet& s, const CheckOptions& opt = {});

// Per-facet hyperplane verdicts of a full-dimensional polyhedron and their
// conjunction, cross-checked against sampling on the polyhedron itself.
CheckReport tangent_facets_invariant(const Polyhedron& p, const Cone& k, const CheckOptions& opt = {});

// Recomputes a counterexample from its pair. Returns the residual; throws
// InvalidArgument when the premise (x, y in S, or x <=_K y) does not hold.
double replay(const Counterexample& c, const ConvexSet& s, const Cone& k, const Tolerance& tol = {});

// Lattice operations of a simplicial cone: E max(E^-1 x, E^-1 y) and E min(...).
Vector lattice_max(const Cone& k, const Vector& x, const Vector& y);
Vector lattice_min(const Cone& k, const Vector& x, const Vector& y);

}  // namespace isocone
