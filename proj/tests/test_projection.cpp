#include <cmath>
#include <random>

#include "doctest.h"
#include "isocone/errors.hpp"
#include "isocone/projection.hpp"
#include "test_support.hpp"

using namespace isocone;
using isocone::testing::gaussian;
using isocone::testing::random_columns;
using isocone::testing::random_in_cone;
using isocone::testing::vec;
using isocone::testing::well_conditioned_basis;

namespace {

Matrix skew() {
  Matrix e(2, 2);
  e << 1, 1, 0, 1;
  return e;
}

std::vector<Cone> sample_cones(std::mt19937_64& rng, Eigen::Index m) {
  return {Cone::orthant(static_cast<int>(m)), Cone::lorentz(static_cast<int>(m)),
          Cone::simplicial(well_conditioned_basis(rng, m)),
          Cone::generators(random_columns(rng, m, m + 2)),
          Cone::facets(random_columns(rng, m, m + 1))};
}

}  // namespace

TEST_CASE("project_cone examples") {
  CHECK((project_cone(Cone::orthant(2), vec({1, -2})) - vec({1, 0})).norm() == 0.0);
  CHECK(project_cone(Cone::lorentz(3), vec({1, 0, -2})).isZero(0.0));
  CHECK((project_cone(Cone::lorentz(3), vec({3, 4, 0})) - vec({1.5, 2, 2.5})).norm() < 1e-15);
  CHECK((project_cone(Cone::simplicial(skew()), vec({0, 1})) - vec({0.5, 0.5})).norm() < 1e-15);
  CHECK_THROWS_AS(project_cone(Cone::orthant(2), vec({1, 2, 3})), DimensionError);
}

TEST_CASE("lorentz projection against a dense boundary search") {
  // Boundary points (r cos t, r sin t, r); nearest one to (3, 4, 0).
  const Vector x = vec({3, 4, 0});
  double best = 1e300;
  Vector arg;
  for (int i = 0; i <= 2000; ++i) {
    for (int j = 0; j <= 720; ++j) {
      const double r = 5.0 * i / 2000.0;
      const double t = 2 * M_PI * j / 720.0;
      const Vector y = vec({r * std::cos(t), r * std::sin(t), r});
      const double d = (y - x).norm();
      if (d < best) {
        best = d;
        arg = y;
      }
    }
  }
  const Vector p = project_cone(Cone::lorentz(3), x);
  CHECK((p - arg).norm() < 1e-2);
  CHECK((p - x).norm() <= best + 1e-12);
  // Characterization against cone samples.
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    const Vector z = random_in_cone(rng, Cone::lorentz(3), 3.0);
    CHECK((p - x).dot(p - z) <= 1e-12);
  }
}

TEST_CASE("simplicial projection against explicit face enumeration") {
  // Faces of cone{(1,0),(1,1)}: {0}, ray e1, ray e2, whole cone.
  const Vector x = vec({0, 1});
  const Vector e1 = vec({1, 0});
  const Vector e2 = vec({1, 1});
  std::vector<Vector> candidates = {Vector::Zero(2)};
  for (const Vector& e : {e1, e2}) {
    const double t = x.dot(e) / e.squaredNorm();
    if (t >= 0) candidates.push_back(t * e);
  }
  double best = 1e300;
  Vector arg;
  for (const Vector& c : candidates) {
    if ((c - x).norm() < best) {
      best = (c - x).norm();
      arg = c;
    }
  }
  CHECK((arg - vec({0.5, 0.5})).norm() < 1e-15);
  CHECK((project_cone_oracle(Cone::simplicial(skew()), x) - arg).norm() < 1e-15);
  // KKT residuals of the oracle answer.
  const Vector r = x - arg;
  CHECK(r.dot(e1) <= 1e-12);
  CHECK(std::abs(r.dot(e2)) <= 1e-12);
}

TEST_CASE("oracle fixed points and guards") {
  CHECK((project_cone_oracle(Cone::orthant(2), vec({1, -2})) - vec({1, 0})).norm() == 0.0);
  CHECK((project_cone_oracle(Cone::simplicial(skew()), vec({3, 1})) - vec({3, 1})).norm() < 1e-14);
  CHECK_THROWS_AS(project_cone_oracle(Cone::lorentz(3), vec({1, 2, 3})), Unsupported);
  CHECK_THROWS_AS(project_cone_oracle(Cone::orthant(17), Vector::Ones(17)), InvalidArgument);
}

TEST_CASE("project_cone agrees with the oracle on polyhedral cones") {
  std::mt19937_64 rng(41);
  for (Eigen::Index m = 2; m <= 6; ++m) {
    for (const Cone& k : sample_cones(rng, m)) {
      if (!k.is_polyhedral()) continue;
      for (int i = 0; i < 60; ++i) {
        const Vector x = gaussian(rng, m, 3.0);
        CHECK((project_cone(k, x) - project_cone_oracle(k, x)).norm() <= 1e-8);
      }
    }
  }
}

TEST_CASE("lorentz branches agree at their boundaries") {
  const Cone k = Cone::lorentz(4);
  std::mt19937_64 rng(43);
  for (int i = 0; i < 200; ++i) {
    Vector h = gaussian(rng, 3);
    const double r = h.norm();
    for (const double tail : {r, -r}) {
      Vector x(4);
      x << h, tail;
      const Vector p = project_cone(k, x);
      for (const double eps : {1e-9, -1e-9}) {
        Vector y = x;
        y[3] += eps;
        CHECK((project_cone(k, y) - p).norm() <= 2e-9);
      }
    }
  }
}

TEST_CASE("zero is a fixed point for every cone") {
  std::mt19937_64 rng(47);
  for (const Cone& k : sample_cones(rng, 3)) {
    CHECK(project_cone(k, Vector::Zero(3)).isZero(0.0));
  }
}

TEST_CASE("project_translated") {
  const Cone k = Cone::orthant(2);
  const Projector onto = [&](const Vector& v) { return project_cone(k, v); };
  CHECK((project_translated(onto, vec({1, 1}), vec({0, 3})) - vec({1, 3})).norm() == 0.0);
  CHECK((project_translated(onto, vec({1, 1}), vec({2, 5})) - vec({2, 5})).norm() == 0.0);
  CHECK((project_translated(onto, vec({0, 0}), vec({-1, 5})) - vec({0, 5})).norm() == 0.0);
  CHECK_THROWS_AS(project_translated(onto, vec({0, 0}), vec({1, 2, 3})), DimensionError);
}

TEST_CASE("moreau_decompose examples") {
  const MoreauPair o = moreau_decompose(Cone::orthant(2), vec({1, -1}));
  CHECK((o.p - vec({1, 0})).norm() == 0.0);
  CHECK((o.q - vec({0, 1})).norm() == 0.0);

  const MoreauPair l = moreau_decompose(Cone::lorentz(3), vec({3, 4, 0}));
  CHECK((l.p - vec({1.5, 2, 2.5})).norm() < 1e-15);
  CHECK((l.q - vec({-1.5, -2, 2.5})).norm() < 1e-15);
  CHECK(in_cone(Cone::lorentz(3), l.q));
  CHECK(l.orthogonality_residual() < 1e-14);

  const MoreauPair in = moreau_decompose(Cone::orthant(2), vec({2, 3}));
  CHECK((in.p - vec({2, 3})).norm() == 0.0);
  CHECK(in.q.isZero(0.0));
}

TEST_CASE("projection properties: moreau, segment idempotence, characterization, nonexpansiveness") {
  std::mt19937_64 rng(53);
  for (Eigen::Index m = 2; m <= 5; ++m) {
    for (const Cone& k : sample_cones(rng, m)) {
      const Cone dual = dual_cone(k);
      for (int i = 0; i < 100; ++i) {
        const Vector x = gaussian(rng, m, 2.0);
        const MoreauPair mp = moreau_decompose(k, x);
        const Tolerance tol;
        CHECK(mp.reconstruction_residual(x) <= tol.at(x));
        CHECK(mp.orthogonality_residual() <= tol.at(x) * (1 + x.norm()));
        CHECK(in_cone(k, mp.p));
        CHECK(in_cone(dual, mp.q));

        for (const double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
          const Vector s = t * x + (1 - t) * mp.p;
          CHECK((project_cone(k, s) - mp.p).norm() <= 1e-10 * (1 + x.norm()));
        }
        for (int j = 0; j < 20; ++j) {
          const Vector z = random_in_cone(rng, k, 2.0);
          CHECK((mp.p - x).dot(mp.p - z) <= 1e-10 * (1 + x.norm() + z.norm()));
        }
        const Vector y = gaussian(rng, m, 2.0);
        CHECK((project_cone(k, x) - project_cone(k, y)).norm() <= (x - y).norm() + 1e-12);
      }
    }
  }
}
