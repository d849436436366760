#include "isocone/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "isocone/errors.hpp"

namespace isocone {
namespace {

// Least-squares solve restricted to the passive columns; other entries zero.
Vector solve_passive(const Matrix& a, const Vector& b, const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (passive[j]) cols.push_back(j);
  }
  Vector z = Vector::Zero(a.cols());
  if (cols.empty()) return z;
  Matrix sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) sub.col(k) = a.col(cols[k]);
  const Vector zs = sub.colPivHouseholderQr().solve(b);
  for (std::size_t k = 0; k < cols.size(); ++k) z[cols[k]] = zs[k];
  return z;
}

}  // namespace

NnlsResult nnls(const Matrix& a, const Vector& b, int max_iterations) {
  if (a.rows() != b.size()) {
    throw DimensionError("nnls: matrix has " + std::to_string(a.rows()) + " rows, rhs has " +
                         std::to_string(b.size()));
  }
  const Eigen::Index n = a.cols();
  const int cap = max_iterations > 0
                      ? max_iterations
                      : 50 * static_cast<int>(std::max<Eigen::Index>({a.rows(), n, 1}));

  NnlsResult out;
  out.coefficients = Vector::Zero(n);
  if (n == 0) {
    out.residual_norm = b.norm();
    return out;
  }

  Vector& x = out.coefficients;
  std::vector<bool> passive(n, false);
  std::vector<bool> blocked(n, false);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double a_norm = std::max(1.0, a.norm());

  Vector w = a.transpose() * (b - a * x);
  int iterations = 0;
  for (;;) {
    // Rounding error of w grows with |A| (|b| + |A| |x|); gradients below it
    // carry no sign information, and chasing them cycles on degenerate input.
    const double gradient_floor = 64.0 * eps * a_norm * std::max(1.0, b.norm() + a_norm * x.norm());
    Eigen::Index entering = -1;
    double best = gradient_floor;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && !blocked[j] && w[j] > best) {
        best = w[j];
        entering = j;
      }
    }
    if (entering < 0) break;
    passive[entering] = true;

    bool first_pass = true;
    bool moved = false;
    for (;;) {
      if (++iterations > cap) {
        throw NumericError("nnls: no convergence within " + std::to_string(cap) +
                           " iterations (ill-conditioned generators?)");
      }
      Vector z = solve_passive(a, b, passive);
      if (first_pass && z[entering] <= 0.0) {
        // Rounding made the entering column look useful; skip it until the
        // iterate changes.
        passive[entering] = false;
        blocked[entering] = true;
        break;
      }
      first_pass = false;

      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z[j] <= 0.0) {
          feasible = false;
          break;
        }
      }
      if (feasible) {
        x = z;
        moved = true;
        break;
      }

      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z[j] <= 0.0) {
          const double denom = x[j] - z[j];
          if (denom > 0.0) alpha = std::min(alpha, x[j] / denom);
        }
      }
      if (!std::isfinite(alpha)) alpha = 0.0;
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && x[j] <= eps * std::max(1.0, std::abs(z[j]))) {
          passive[j] = false;
          x[j] = 0.0;
        }
      }
      moved = true;
    }
    if (moved) std::fill(blocked.begin(), blocked.end(), false);
    w = a.transpose() * (b - a * x);
  }

  out.iterations = iterations;
  out.residual_norm = (a * x - b).norm();
  return out;
}

}  // namespace isocone
