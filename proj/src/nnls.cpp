#include "cgeom/nnls.hpp"

#include "cgeom/error.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace cgeom {

namespace {

Vec solve_passive(const Mat& A, const Vec& b, const std::vector<int>& passive) {
  Mat sub(A.rows(), static_cast<Eigen::Index>(passive.size()));
  for (std::size_t k = 0; k < passive.size(); ++k) sub.col(k) = A.col(passive[k]);
  const Vec coeffs = sub.colPivHouseholderQr().solve(b);
  Vec z = Vec::Zero(A.cols());
  for (std::size_t k = 0; k < passive.size(); ++k) z(passive[k]) = coeffs(k);
  return z;
}

}  // namespace

NnlsResult nnls(const Mat& A, const Vec& b, int max_iterations) {
  if (A.rows() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "nnls: rows of A must match b");
  }
  const int n = static_cast<int>(A.cols());
  if (max_iterations <= 0) max_iterations = 3 * n + 30;

  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     std::max<double>(A.rows(), n) * std::max(1.0, A.cwiseAbs().maxCoeff());

  Vec x = Vec::Zero(n);
  std::vector<bool> in_passive(n, false);
  NnlsResult result;

  for (int outer = 0; outer < max_iterations; ++outer) {
    const Vec w = A.transpose() * (b - A * x);
    int best = -1;
    double best_w = tol;
    for (int j = 0; j < n; ++j) {
      if (!in_passive[j] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    in_passive[best] = true;
    ++result.iterations;

    for (int inner = 0; inner <= 3 * n; ++inner) {
      std::vector<int> passive;
      for (int j = 0; j < n; ++j) {
        if (in_passive[j]) passive.push_back(j);
      }
      const Vec z = solve_passive(A, b, passive);
      bool feasible = true;
      for (int j : passive) {
        if (z(j) <= tol) feasible = false;
      }
      if (feasible) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (int j : passive) {
        if (z(j) <= tol) {
          const double denom = x(j) - z(j);
          if (denom > 0.0) alpha = std::min(alpha, x(j) / denom);
        }
      }
      x += alpha * (z - x);
      for (int j : passive) {
        if (x(j) <= tol) {
          x(j) = 0.0;
          in_passive[j] = false;
        }
      }
    }
  }

  result.x = x;
  result.residual_norm = (A * x - b).norm();
  return result;
}

}  // namespace cgeom
