#pragma once

#include "isocone/geometry.hpp"

namespace isocone {

struct NnlsResult {
  Vector coefficients;
  double residual_norm = 0.0;
  int iterations = 0;
};

// Lawson-Hanson active-set solver for  min |A t - b|  subject to  t >= 0.
//
// Entering variables are chosen by largest dual gradient with ties broken
// toward the lowest column index. `max_iterations` <= 0 selects the default
// cap of 50 * max(rows, cols). Throws NumericError when the cap is hit.
NnlsResult nnls(const Matrix& a, const Vector& b, int max_iterations = 0);

}  // namespace isocone
