#include "isocone/sampling.hpp"

#include <cmath>
#include <limits>

namespace isocone {

SetSampler::SetSampler(const ConvexSet& s, std::uint64_t seed, double spread)
    : set_(&s), rng_(seed), spread_(spread) {
  if (const auto* h = std::get_if<Hyperplane>(&s)) {
    tangent_ = tangent_basis(h->normal());
    unit_normal_ = h->unit_normal();
  } else if (const auto* h = std::get_if<Halfspace>(&s)) {
    tangent_ = tangent_basis(h->normal());
    unit_normal_ = h->boundary().unit_normal();
  } else {
    const auto& p = std::get<Polyhedron>(s);
    rows_ = p.normals();
    offsets_ = p.offsets();
    for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
      const double n = rows_.row(i).norm();
      rows_.row(i) /= n;
      offsets_[i] /= n;
    }
    center_ = interior_point_of(p);
    state_ = center_;
    for (int i = 0; i < kBurnIn; ++i) hit_and_run_step(false);
  }
}

Vector SetSampler::gaussian(Eigen::Index m, double sigma) {
  std::normal_distribution<double> n(0.0, sigma);
  Vector v(m);
  for (Eigen::Index i = 0; i < m; ++i) v[i] = n(rng_);
  return v;
}

Vector SetSampler::hit_and_run_step(bool allow_boundary) {
  const Eigen::Index m = center_.size();
  Vector d = gaussian(m, 1.0);
  d /= d.norm();

  // ball |x + t d - c| <= R
  const double radius = 10.0 * spread_ + (state_ - center_).norm();
  const Vector rel = state_ - center_;
  const double pd = rel.dot(d);
  const double disc = std::sqrt(std::max(0.0, pd * pd - (rel.squaredNorm() - radius * radius)));
  double lo = -pd - disc;
  double hi = -pd + disc;
  bool lo_facet = false;
  bool hi_facet = false;

  const Vector ad = rows_ * d;
  const Vector slack = offsets_ - rows_ * state_;
  for (Eigen::Index i = 0; i < ad.size(); ++i) {
    const double s = std::max(0.0, slack[i]);
    if (ad[i] > 0 && s / ad[i] < hi) {
      hi = s / ad[i];
      hi_facet = true;
    } else if (ad[i] < 0 && s / ad[i] > lo) {
      lo = s / ad[i];
      lo_facet = true;
    }
  }

  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double t = lo + (hi - lo) * u(rng_);
  state_ = state_ + t * d;
  if (allow_boundary && u(rng_) < 1.0 / 3.0) {
    const bool take_hi = u(rng_) < 0.5;
    if (take_hi && hi_facet) return state_ + (hi - t) * d;
    if (!take_hi && lo_facet) return state_ + (lo - t) * d;
  }
  return state_;
}

Vector SetSampler::next() {
  if (const auto* h = std::get_if<Hyperplane>(set_)) {
    return h->anchor() + tangent_ * gaussian(tangent_.cols(), spread_);
  }
  if (const auto* h = std::get_if<Halfspace>(set_)) {
    Vector x = h->anchor() + tangent_ * gaussian(tangent_.cols(), spread_);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng_) >= 1.0 / 3.0) {
      std::normal_distribution<double> n(0.0, spread_);
      x -= std::abs(n(rng_)) * unit_normal_;
    }
    return x;
  }
  return hit_and_run_step(true);
}

}  // namespace isocone
