#include "cgeom/lp.hpp"

#include "cgeom/error.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace cgeom {

namespace {

// Tableau layout: columns [x+ (d) | x- (d) | slack (m) | artificial (a) | rhs],
// rows [constraints (m) | objective].  The objective row holds reduced costs
// of a maximization: a column may enter while its entry is negative.
class Tableau {
 public:
  Tableau(const Mat& A, const Vec& b, double tol)
      : m_(static_cast<int>(A.rows())), d_(static_cast<int>(A.cols())), tol_(tol) {
    int artificial = 0;
    for (int i = 0; i < m_; ++i) {
      if (b(i) < 0.0) ++artificial;
    }
    cols_ = 2 * d_ + m_ + artificial;
    t_ = Mat::Zero(m_ + 1, cols_ + 1);
    basis_.assign(m_, -1);
    first_artificial_ = 2 * d_ + m_;
    int next_art = first_artificial_;
    for (int i = 0; i < m_; ++i) {
      const double sign = b(i) < 0.0 ? -1.0 : 1.0;
      for (int j = 0; j < d_; ++j) {
        t_(i, j) = sign * A(i, j);
        t_(i, d_ + j) = -sign * A(i, j);
      }
      t_(i, 2 * d_ + i) = sign;
      t_(i, cols_) = sign * b(i);
      if (sign < 0.0) {
        t_(i, next_art) = 1.0;
        basis_[i] = next_art++;
      } else {
        basis_[i] = 2 * d_ + i;
      }
    }
  }

  bool has_artificial() const { return cols_ > first_artificial_; }

  // Phase I: maximize -sum(artificial).  Returns false when infeasible.
  bool phase_one() {
    if (!has_artificial()) return true;
    t_.row(m_).setZero();
    for (int j = first_artificial_; j < cols_; ++j) t_(m_, j) = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= first_artificial_) t_.row(m_) -= t_.row(i);
    }
    if (run(cols_) == Outcome::Unbounded) return false;  // cannot happen
    const double scale = 1.0 + t_.col(cols_).head(m_).cwiseAbs().maxCoeff();
    if (t_(m_, cols_) < -1e-9 * scale) return false;
    // Drive zero-level artificials out of the basis where possible.
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      for (int j = 0; j < first_artificial_; ++j) {
        if (std::abs(t_(i, j)) > tol_) {
          pivot(i, j);
          break;
        }
      }
    }
    return true;
  }

  // Phase II on the original objective; artificial columns never re-enter.
  bool phase_two(const Vec& c) {
    t_.row(m_).setZero();
    for (int j = 0; j < d_; ++j) {
      t_(m_, j) = -c(j);
      t_(m_, d_ + j) = c(j);
    }
    for (int i = 0; i < m_; ++i) {
      const double r = t_(m_, basis_[i]);
      if (r != 0.0) t_.row(m_) -= r * t_.row(i);
    }
    return run(first_artificial_) == Outcome::Optimal;
  }

  double value() const { return t_(m_, cols_); }

  Vec solution() const {
    Vec x = Vec::Zero(d_);
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      if (j < d_) {
        x(j) += t_(i, cols_);
      } else if (j < 2 * d_) {
        x(j - d_) -= t_(i, cols_);
      }
    }
    return x;
  }

 private:
  enum class Outcome { Optimal, Unbounded };

  Outcome run(int allowed_cols) {
    const int max_iter = 50 * (m_ + cols_) + 1000;
    int degenerate_streak = 0;
    for (int iter = 0; iter < max_iter; ++iter) {
      const bool bland = degenerate_streak > 25;
      int enter = -1;
      double best = -tol_;
      for (int j = 0; j < allowed_cols; ++j) {
        const double r = t_(m_, j);
        if (r < best) {
          enter = j;
          if (bland) break;
          best = r;
        }
      }
      if (enter < 0) return Outcome::Optimal;

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a <= tol_) continue;
        const double ratio = t_(i, cols_) / a;
        if (ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 && leave >= 0 &&
             basis_[i] < basis_[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return Outcome::Unbounded;
      degenerate_streak = best_ratio <= 1e-12 ? degenerate_streak + 1 : 0;
      pivot(leave, enter);
    }
    throw Error(ErrorCode::NoConvergence, "simplex iteration limit reached");
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  int m_;
  int d_;
  int cols_ = 0;
  int first_artificial_ = 0;
  double tol_;
  Mat t_;
  std::vector<int> basis_;
};

}  // namespace

LpResult lp_maximize(const Vec& c, const Mat& A, const Vec& b, double pivot_tol) {
  if (A.cols() != c.size() || A.rows() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "lp_maximize: inconsistent shapes");
  }
  LpResult result;
  Tableau tableau(A, b, pivot_tol);
  if (!tableau.phase_one()) {
    result.status = LpStatus::Infeasible;
    return result;
  }
  if (!tableau.phase_two(c)) {
    result.status = LpStatus::Unbounded;
    result.value = std::numeric_limits<double>::infinity();
    return result;
  }
  result.status = LpStatus::Optimal;
  result.x = tableau.solution();
  result.value = c.dot(result.x);
  return result;
}

}  // namespace cgeom
