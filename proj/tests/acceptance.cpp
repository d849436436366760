// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exits 1 when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "isocone/cli.hpp"
#include "isocone/invariance.hpp"
#include "isocone/latops.hpp"
#include "isocone/polyhedron.hpp"
#include "isocone/projection.hpp"
#include "test_support.hpp"

using namespace isocone;
using isocone::testing::gaussian;
using isocone::testing::random_columns;
using isocone::testing::unit;
using isocone::testing::well_conditioned_basis;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Columns clustered around a random direction, so that both the generated
// cone and the facet cone are nontrivial and pointed.
Matrix clustered_columns(std::mt19937_64& rng, int m, int count) {
  const Vector d = unit(rng, m);
  Matrix g = random_columns(rng, m, count);
  for (int j = 0; j < count; ++j) {
    g.col(j) += 1.2 * d;
    g.col(j).normalize();
  }
  return g;
}

// One cone of each representation in dimension m.
std::vector<Cone> variants(std::mt19937_64& rng, int m) {
  return {Cone::orthant(m), Cone::lorentz(m), Cone::simplicial(well_conditioned_basis(rng, m, 50)),
          Cone::generators(clustered_columns(rng, m, m + 3)), Cone::facets(clustered_columns(rng, m, m + 2))};
}

// Inputs spread over several orders of magnitude.
Vector scaled_input(std::mt19937_64& rng, int m, int i) {
  static const double scales[] = {1e-3, 1e-1, 1.0, 1.0, 10.0, 1e3};
  return gaussian(rng, m, scales[i % 6]);
}

// ---------------------------------------------------------------------------

Outcome moreau_suite() {
  std::mt19937_64 rng(101);
  std::vector<Cone> cones;
  for (int m = 2; m <= 8; ++m) {
    cones.push_back(Cone::orthant(m));
    cones.push_back(Cone::lorentz(m));
    for (int b = 0; b < 20; ++b) cones.push_back(Cone::simplicial(well_conditioned_basis(rng, m, 50)));
    cones.push_back(Cone::generators(clustered_columns(rng, m, m + 3)));
    cones.push_back(Cone::facets(clustered_columns(rng, m, m + 2)));
  }
  int failures = 0;
  double worst_rec = 0, worst_orth = 0;
  for (const Cone& k : cones) {
    const Cone kd = dual_cone(k);
    for (int i = 0; i < 1000; ++i) {
      const Vector x = scaled_input(rng, k.dim(), i);
      const double nx = x.norm();
      const MoreauPair mp = moreau_decompose(k, x);
      const double rec = mp.reconstruction_residual(x) / (1 + nx);
      const double orth = mp.orthogonality_residual() / (1 + nx * nx);
      worst_rec = std::max(worst_rec, rec);
      worst_orth = std::max(worst_orth, orth);
      const Tolerance member{1e-9 * (1 + nx), 0.0};
      const bool ok = rec <= 1e-9 && orth <= 1e-9 && in_cone(k, mp.p, member) && in_cone(kd, mp.q, member);
      failures += !ok;
    }
  }
  return {failures == 0, fmt("%zu cones x 1000 inputs, %d failures, worst scaled residuals %.1e / %.1e",
                             cones.size(), failures, worst_rec, worst_orth)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(202);
  int cones = 0, failures = 0;
  double worst = 0;
  for (int m = 2; m <= 8; ++m) {
    const Cone list[] = {Cone::orthant(m), Cone::simplicial(well_conditioned_basis(rng, m, 50)),
                         Cone::generators(clustered_columns(rng, m, m + 2)),
                         Cone::facets(clustered_columns(rng, m, m + 2))};
    for (const Cone& k : list) {
      ++cones;
      for (int i = 0; i < 500; ++i) {
        const Vector x = gaussian(rng, m);
        const double gap = (project_cone(k, x) - project_cone_oracle(k, x)).norm();
        worst = std::max(worst, gap);
        failures += gap > 1e-8;
      }
    }
  }
  return {failures == 0, fmt("%d cones x 500 inputs, %d failures, worst gap %.1e", cones, failures, worst)};
}

Outcome ll_suite() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const char* names[] = {"orthant", "lorentz", "simplicial", "generators", "facets"};
  std::vector<std::vector<Cone>> by_variant(5);
  for (int m = 2; m <= 6; ++m) {
    std::vector<Cone> vs = variants(rng, m);
    for (std::size_t v = 0; v < vs.size(); ++v) by_variant[v].push_back(std::move(vs[v]));
  }
  std::string failed;
  double worst = 0, worst_lip = -1e300;
  for (std::size_t v = 0; v < by_variant.size(); ++v) {
    std::vector<LatticeLikeOps> ops;
    for (const Cone& k : by_variant[v]) ops.emplace_back(k);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      const LatticeLikeOps& op = ops[static_cast<std::size_t>(i) % ops.size()];
      const int m = op.cone().dim();
      const Vector x = gaussian(rng, m, 2.0);
      // every fourth tuple has y >= x, so the equality clauses are exercised
      const Vector y = i % 4 == 0 ? Vector(x + project_cone(op.cone(), gaussian(rng, m))) : gaussian(rng, m, 2.0);
      const Vector z = gaussian(rng, m, 2.0);
      const Vector w = gaussian(rng, m, 2.0);
      const double lambda = std::exp(6 * u01(rng) - 3);
      const double t = u01(rng);
      const PropertyReport r = check_ll(op, x, y, z, w, lambda, t);
      worst = std::max(worst, r.max_residual());
      // the 3/2 bound, measured directly
      const double bound = 1.5 * ((x - z).norm() + (y - w).norm());
      const double excess = std::max((op.meet(x, y) - op.meet(z, w)).norm(), (op.join(x, y) - op.join(z, w)).norm()) -
                            bound;
      worst_lip = std::max(worst_lip, excess);
      bad += !(r.all_pass() && r.max_residual() < 1e-8 && excess <= 1e-8);
    }
    if (bad) failed += fmt(" %s:%d", names[v], bad);
  }
  return {failed.empty(), fmt("5 variants x 1000 tuples, worst residual %.1e, worst Lipschitz excess %.2f%s", worst,
                              worst_lip, failed.empty() ? "" : (", failures" + failed).c_str())};
}

Outcome swap_suite() {
  std::mt19937_64 rng(404);
  const char* names[] = {"orthant", "lorentz", "simplicial", "generators", "facets"};
  std::string failed;
  double worst = 0;
  for (std::size_t v = 0; v < 5; ++v) {
    int bad = 0;
    for (int block = 0; block < 20; ++block) {
      // a fresh cone every 50 tuples, dimension cycling through 2..8
      const Cone k = variants(rng, 2 + block % 7)[v];
      const LatticeLikeOps ops(k);
      for (int i = 0; i < 50; ++i) {
        const Vector x = gaussian(rng, k.dim(), 2.0);
        const Vector y = gaussian(rng, k.dim(), 2.0);
        const double r = l0_swap_residual(ops, x, y);
        worst = std::max(worst, r);
        bad += !(r < 1e-9);
      }
    }
    if (bad) failed += fmt(" %s:%d", names[v], bad);
  }
  return {failed.empty(), fmt("5 variants x 1000 tuples, worst residual %.1e%s", worst,
                              failed.empty() ? "" : (", failures" + failed).c_str())};
}

Outcome classifier_soundness() {
  std::mt19937_64 rng(505);
  long decided = 0, positives = 0, disagreements = 0, banded = 0;
  while (decided < 100000) {
    const int m = 2 + static_cast<int>(rng() % 6);
    const Cone k = (rng() % 8 == 0) ? Cone::orthant(m) : Cone::simplicial(well_conditioned_basis(rng, m, 50));
    const ClassifierBand band = classifier_band(k);
    std::vector<NormalFamily> fam;
    for (auto& f : enumerate_invariant_normals(k)) {
      if (f.shape != FamilyShape::Empty) fam.push_back(std::move(f));
    }
    for (int i = 0; i < 100; ++i) {
      Vector a;
      if (i % 3 == 0 || fam.empty()) {
        a = unit(rng, m);
      } else {
        // family members and perturbations of decreasing size
        a = sample_family(fam[rng() % fam.size()], rng);
        if (i % 3 == 2) a += gaussian(rng, m, std::pow(10.0, -1.0 - static_cast<double>(rng() % 10)));
      }
      const double margin = hyperplane_invariance_margins(k, a).margin;
      const NormalClass c = classify_normal(k, a);
      if (band.contains(margin, c.residual)) {
        ++banded;
        continue;
      }
      ++decided;
      const bool rule = margin <= 1e-9;
      positives += rule;
      disagreements += rule != (c.kind != NormalCase::NotInvariant);
    }
  }
  return {disagreements == 0 && positives > 10000,
          fmt("%ld pairs decided, %ld invariant by the product rule, %ld in the guard band, %ld disagreements",
              decided, positives, banded, disagreements)};
}

// Polyhedron with the given unit normals around the center c, facet i at
// distance r[i].
Polyhedron around(const Vector& c, const std::vector<Vector>& normals, const std::vector<double>& r) {
  std::vector<Halfspace> hs;
  for (std::size_t i = 0; i < normals.size(); ++i) hs.emplace_back(normals[i], c + r[i] * normals[i]);
  return Polyhedron(hs, c);
}

Outcome isotone_equivalence() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> dist(0.6, 2.0);
  Matrix skew(2, 2);
  skew << 1, 1, 0, 1;
  auto families = [](const Cone& k) {
    std::vector<NormalFamily> fam;
    for (auto& f : enumerate_invariant_normals(k)) {
      if (f.shape != FamilyShape::Empty) fam.push_back(std::move(f));
    }
    return fam;
  };
  // random bases without any invariant hyperplane are redrawn
  auto random_cone = [&](int m) {
    for (;;) {
      Cone k = Cone::simplicial(well_conditioned_basis(rng, m, 10));
      if (!families(k).empty()) return k;
    }
  };
  const Cone cones[] = {Cone::orthant(3), Cone::simplicial(skew), random_cone(3), random_cone(4)};
  int pos_total = 0, pos_ok = 0, neg_total = 0, neg_iso = 0, neg_exact = 0;
  for (const Cone& k : cones) {
    const int m = k.dim();
    const std::vector<NormalFamily> fam = families(k);
    for (int trial = 0; trial < 100; ++trial) {
      const bool negative = trial >= 50;
      const Vector c = gaussian(rng, m);
      std::vector<Vector> normals;
      std::vector<double> r;
      for (int i = 0; i < m + 1; ++i) {
        const Vector a = sample_family(fam[rng() % fam.size()], rng);
        normals.push_back(a);
        r.push_back(dist(rng));
        normals.push_back(-a);
        r.push_back(dist(rng));
      }
      std::size_t bad_facet = normals.size();
      if (negative) {
        // one clearly violating facet, closer to c than any other so it is defining
        Vector a;
        do {
          a = unit(rng, m);
        } while (hyperplane_invariance_margins(k, a).margin < 1e-3);
        bad_facet = normals.size();
        normals.push_back(a);
        r.push_back(0.3);
      }
      const Polyhedron p = around(c, normals, r);
      CheckOptions opt;
      opt.seed = static_cast<std::uint64_t>(trial) + 1000u * static_cast<std::uint64_t>(m);
      opt.samples = 10000;
      if (!negative) {
        ++pos_total;
        pos_ok += isotone_test(p, k, opt).verdict == Verdict::Isotone;
        continue;
      }
      ++neg_total;
      neg_iso += isotone_test(p, k, opt).verdict == Verdict::NotIsotone;
      CheckOptions exact = opt;
      exact.samples = 0;
      const CheckReport inv = set_invariant(p, k, exact);
      bool facet_refuted = false;
      for (const FacetVerdict& f : inv.facets) {
        if (f.index == bad_facet) facet_refuted = f.verdict == Verdict::NotInvariant && f.margin && *f.margin > 1e-9;
      }
      neg_exact += inv.verdict == Verdict::NotInvariant && inv.method == "exact" && facet_refuted;
    }
  }
  const bool pass = pos_total > 0 && pos_ok == pos_total && neg_iso >= 0.95 * neg_total && neg_exact == neg_total;
  return {pass, fmt("4 cones; invariant: %d/%d isotone; violating: %d/%d NotIsotone, %d/%d refuted exactly", pos_ok,
                    pos_total, neg_iso, neg_total, neg_exact, neg_total)};
}

// Random polygon-like polyhedron in R^(m-1), lifted to a cylinder in R^m.
Polyhedron random_cylinder(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  const Vector c = gaussian(rng, m - 1);
  std::vector<Halfspace> hs;
  for (int i = 0; i < 2 * m + 1; ++i) {
    Vector a = Vector::Zero(m);
    a.head(m - 1) = unit(rng, m - 1);
    Vector anchor = Vector::Zero(m);
    anchor.head(m - 1) = c + dist(rng) * a.head(m - 1);
    hs.emplace_back(a, anchor);
  }
  Vector interior = Vector::Zero(m);
  interior.head(m - 1) = c;
  return Polyhedron(hs, interior);
}

// Rotation by theta in the plane of the unit head direction d and the last axis.
Matrix tilt(const Vector& d, double theta) {
  const Eigen::Index m = d.size() + 1;
  Vector e = Vector::Zero(m);
  e.head(m - 1) = d;
  Vector t = Vector::Zero(m);
  t[m - 1] = 1;
  return Matrix::Identity(m, m) + std::sin(theta) * (t * e.transpose() - e * t.transpose()) +
         (std::cos(theta) - 1) * (e * e.transpose() + t * t.transpose());
}

Outcome lorentz_products() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> angle(0.3, 1.2);
  int certified = 0, isotone = 0, refuted = 0, refutable = 0;
  CheckOptions opt;
  opt.samples = 10000;
  for (int i = 0; i < 10; ++i) {
    const int m = 3 + i % 2;
    const Polyhedron cyl = random_cylinder(rng, m);
    opt.seed = static_cast<std::uint64_t>(i);
    certified += lorentz_product_check(cyl, opt).verdict == Verdict::ProductForm;
    isotone += isotone_test(cyl, Cone::lorentz(m), opt).verdict == Verdict::Isotone;

    const Matrix rot = tilt(unit(rng, m - 1), angle(rng));
    std::vector<Halfspace> hs;
    for (const Halfspace& h : cyl.halfspaces()) hs.emplace_back(rot * h.normal(), rot * h.anchor());
    const Polyhedron tilted(hs, Vector(rot * *cyl.interior_point()));
    ++refutable;
    const CheckReport r = lorentz_product_check(tilted, opt);
    refuted += r.verdict == Verdict::NotProductForm && r.counterexample &&
               replay(*r.counterexample, tilted, Cone::lorentz(m)) > 10 * r.threshold;
  }
  for (int m = 3; m <= 4; ++m) {
    const Polyhedron box = Polyhedron::box(Vector::Zero(m), Vector::Ones(m));
    ++refutable;
    const CheckReport r = lorentz_product_check(box, opt);
    refuted += r.verdict == Verdict::NotProductForm && r.counterexample &&
               replay(*r.counterexample, box, Cone::lorentz(m)) > 10 * r.threshold;
  }
  return {certified == 10 && isotone == 10 && refuted == refutable,
          fmt("cylinders: %d/10 ProductForm, %d/10 isotone; box and rotated cylinders: %d/%d refuted with witness",
              certified, isotone, refuted, refutable)};
}

Outcome orthant_reduction() {
  std::mt19937_64 rng(808);
  int agree = 0, invariant = 0;
  for (int i = 0; i < 10000; ++i) {
    const int m = 2 + i % 5;
    Vector a = gaussian(rng, m);
    // sparse normals make the invariant side common
    for (int j = 0; j < m; ++j) {
      if (rng() % 3 == 0) a[j] = 0;
    }
    if (a.isZero()) a[0] = 1;
    a.normalize();
    bool pair_rule = true;
    for (int p = 0; p < m; ++p) {
      for (int q = 0; q < m; ++q) pair_rule = pair_rule && (p == q || a[p] * a[q] <= 0);
    }
    const bool rule = hyperplane_invariant_simplicial(Cone::orthant(m), a);
    agree += rule == pair_rule;
    invariant += pair_rule;
  }
  return {agree == 10000, fmt("%d/10000 agree (%d invariant)", agree, invariant)};
}

Outcome determinism() {
  const std::string d = ISOCONE_TEST_DATA;
  const std::vector<std::vector<std::string>> commands = {
      {"project", d + "/lorentz3.json", d + "/v_3_4_0.json"},
      {"latop", "meet", d + "/skew2.json", d + "/v_1_3.json", d + "/v_2_1.json"},
      {"check", "classify-normal", d + "/normal_1_m1.json", d + "/orthant2.json"},
      {"check", "enumerate-normals", d + "/skew2.json"},
      {"check", "invariant", d + "/triangle2.json", d + "/orthant2.json"},
      {"check", "isotone", d + "/halfspace_1_1.json", d + "/orthant2.json"},
      {"check", "isotone", d + "/cylinder3.json", d + "/lorentz3.json"},
      {"check", "sublattice", d + "/box2.json", d + "/skew2.json"},
      {"check", "lorentz-product", d + "/box3.json"},
      {"check", "tangent-facets", d + "/box3.json", d + "/facets3.json"},
  };
  const char* seeds[] = {"0", "7", "18446744073709551615"};
  int runs = 0, identical = 0;
  for (const auto& base : commands) {
    for (const char* seed : seeds) {
      std::vector<std::string> args = base;
      args.insert(args.end(), {"--seed", seed, "--samples", "500"});
      std::ostringstream a, b, ea, eb;
      const int ca = run_cli(args, a, ea);
      const int cb = run_cli(args, b, eb);
      ++runs;
      identical += ca == cb && !a.str().empty() && a.str() == b.str() && ea.str() == eb.str();
    }
  }
  return {identical == runs, fmt("%d/%d command runs byte-identical", identical, runs)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0: no stated runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "Moreau decomposition suite", 10, moreau_suite},
      {2, "projection agrees with the enumeration oracle", 60, oracle_equivalence},
      {3, "lattice-like operation identities", 30, ll_suite},
      {4, "swap identities", 0, swap_suite},
      {5, "classifier matches the product rule", 60, classifier_soundness},
      {6, "invariance and isotone projection agree", 300, isotone_equivalence},
      {7, "Lorentz cylinders", 0, lorentz_products},
      {8, "orthant sign rule", 0, orthant_reduction},
      {9, "CLI determinism", 0, determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.budget_s > 0) {
      timing += fmt(" of %.0f s", c.budget_s);
      if (secs >= c.budget_s) o.pass = false;
    }
    std::printf("criterion %d: %s  %s  [%s; %s]\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
