#pragma once

#include <cstdint>
#include <random>

#include "isocone/sets.hpp"

namespace isocone {

// Seeded point sampler for a convex set.
//
//   Hyperplane  anchor + Gaussian in the tangent basis (std `spread`)
//   Halfspace   a hyperplane point pushed inward by |N(0, spread)| along the
//               normal; one draw in three stays on the boundary
//   Polyhedron  hit-and-run from the interior point after 100 burn-in steps,
//               chords clipped to a ball of radius 10 * spread around it;
//               one draw in three is the facet endpoint of the chord
//
// The same seed always produces the same sequence.
class SetSampler {
 public:
  SetSampler(const ConvexSet& s, std::uint64_t seed, double spread = 1.0);

  Vector next();
  std::mt19937_64& rng() { return rng_; }

  static constexpr int kBurnIn = 100;

 private:
  Vector gaussian(Eigen::Index m, double sigma);
  Vector hit_and_run_step(bool allow_boundary);

  const ConvexSet* set_;
  std::mt19937_64 rng_;
  double spread_;
  Matrix tangent_;
  Vector unit_normal_;
  // polyhedron state
  Matrix rows_;
  Vector offsets_;
  Vector center_;
  Vector state_;
};

}  // namespace isocone
