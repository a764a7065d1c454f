#pragma once

#include "cgeom/types.hpp"

namespace cgeom {

enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Vec x;
};

/// Dense two-phase simplex for   maximize <c, x>  subject to  A x <= b,
/// with x free.  Intended for the small problems of this library
/// (tens of constraints, dimension up to ~10).
LpResult lp_maximize(const Vec& c, const Mat& A, const Vec& b,
                     double pivot_tol = 1e-10);

}  // namespace cgeom
