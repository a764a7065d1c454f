#pragma once

#include "cgeom/types.hpp"

namespace cgeom {

struct NnlsResult {
  Vec x;
  double residual_norm = 0.0;
  int iterations = 0;
};

/// Lawson-Hanson active-set solver for  min ||A x - b||  subject to  x >= 0.
NnlsResult nnls(const Mat& A, const Vec& b, int max_iterations = 0);

}  // namespace cgeom
