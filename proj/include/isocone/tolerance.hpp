#pragma once

#include <Eigen/Core>

namespace isocone {

// Absolute-plus-relative tolerance used for every membership and equality
// comparison: tol(x) = abs + rel * |x|.
struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-12;

  double at(double scale) const { return abs + rel * scale; }
  double at(const Eigen::VectorXd& x) const { return at(x.norm()); }
};

}  // namespace isocone
