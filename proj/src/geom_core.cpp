#include "cgeom/geom_core.hpp"

#include "cgeom/error.hpp"
#include "cgeom/lp.hpp"
#include "cgeom/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace cgeom {

namespace {

void require_dim(int expected, Eigen::Index got, const char* where) {
  if (got != expected) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(where) + ": expected dimension " + std::to_string(expected) +
                    ", got " + std::to_string(got));
  }
}

double binomial(int m, int k) {
  if (k < 0 || k > m) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (m - k + i) / i;
  return r;
}

bool all_finite(const Mat& m) { return m.allFinite(); }

}  // namespace

// ---------------------------------------------------------------- Subspace

Subspace::Subspace(Mat basis) : basis_(std::move(basis)) {
  const int k = dim();
  const int n = ambient_dim();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::InvalidArgument, "Subspace: need 1 <= k <= n, got k=" +
                                                std::to_string(k) + " n=" + std::to_string(n));
  }
  if (!all_finite(basis_)) throw Error(ErrorCode::NonFinite, "Subspace: non-finite basis");
  const Mat gram = basis_ * basis_.transpose();
  const double dev = (gram - Mat::Identity(k, k)).cwiseAbs().maxCoeff();
  if (dev > kOrthonormalTol) {
    throw Error(ErrorCode::InvalidArgument,
                "Subspace: basis rows are not orthonormal (Gram deviation " +
                    std::to_string(dev) + ")");
  }
}

Subspace Subspace::full(int n) { return Subspace(Mat::Identity(n, n)); }

Vec Subspace::coordinates(const Vec& x) const {
  require_dim(ambient_dim(), x.size(), "Subspace::coordinates");
  return basis_ * x;
}

Vec Subspace::embed(const Vec& y) const {
  require_dim(dim(), y.size(), "Subspace::embed");
  return basis_.transpose() * y;
}

Subspace Subspace::rotated(const Mat& Q) const {
  require_dim(ambient_dim(), Q.rows(), "Subspace::rotated");
  // Re-orthonormalize to absorb the rounding of the product.
  return orthonormalize_subspace(basis_ * Q.transpose());
}

Subspace orthonormalize_subspace(const Mat& rows) {
  const int k = static_cast<int>(rows.rows());
  const int n = static_cast<int>(rows.cols());
  if (k < 1 || k > n) {
    throw Error(ErrorCode::InvalidArgument, "orthonormalize_subspace: need 1 <= rows <= n");
  }
  Mat q(k, n);
  for (int i = 0; i < k; ++i) {
    Vec v = rows.row(i).transpose();
    const double scale = std::max(1.0, v.norm());
    // Two passes of modified Gram-Schmidt keep the Gram matrix at 1e-15.
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < i; ++j) v -= q.row(j).dot(v) * q.row(j).transpose();
    }
    const double norm = v.norm();
    if (norm <= kPivotTol * scale) {
      throw Error(ErrorCode::RankDeficient,
                  "orthonormalize_subspace: row " + std::to_string(i) +
                      " is linearly dependent on the previous rows");
    }
    q.row(i) = (v / norm).transpose();
  }
  return Subspace(std::move(q));
}

Subspace random_subspace(int n, int k, std::uint64_t seed) {
  CounterStream rng(seed, 0x5b5ace);
  for (int attempt = 0; attempt < 16; ++attempt) {
    Mat rows(k, n);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < n; ++j) rows(i, j) = rng.normal();
    }
    try {
      return orthonormalize_subspace(rows);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
    }
  }
  throw Error(ErrorCode::NoConvergence, "random_subspace: repeated rank-deficient draws");
}

Mat random_orthogonal(int n, std::uint64_t seed) {
  CounterStream rng(seed, 0x0e7409);
  Mat g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  const Mat r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

// ---------------------------------------------------------------- polytopes

VPolytope::VPolytope(Mat vertices) {
  if (vertices.rows() < 1 || vertices.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "VPolytope: need at least one vertex");
  }
  if (!all_finite(vertices)) throw Error(ErrorCode::NonFinite, "VPolytope: non-finite vertex");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < vertices.rows(); ++i) {
    bool dup = false;
    for (Eigen::Index j : keep) {
      if ((vertices.row(i) - vertices.row(j)).norm() < kDedupTol) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(i);
  }
  vertices_.resize(static_cast<Eigen::Index>(keep.size()), vertices.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) vertices_.row(r) = vertices.row(keep[r]);
}

HPolytope::HPolytope(Mat normals, Vec offsets)
    : normals_(std::move(normals)), offsets_(std::move(offsets)) {
  if (normals_.rows() < 1 || normals_.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "HPolytope: need at least one constraint");
  }
  if (normals_.rows() != offsets_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "HPolytope: normals and offsets differ in count");
  }
  if (!all_finite(normals_) || !offsets_.allFinite()) {
    throw Error(ErrorCode::NonFinite, "HPolytope: non-finite data");
  }
  for (Eigen::Index i = 0; i < normals_.rows(); ++i) {
    if (normals_.row(i).norm() == 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  "HPolytope: normal " + std::to_string(i) + " is zero");
    }
  }
}

bool HPolytope::contains(const Vec& x, double tol) const {
  require_dim(dim(), x.size(), "HPolytope::contains");
  return ((normals_ * x - offsets_).array() <= tol).all();
}

double support_v(const VPolytope& body, const Vec& x) {
  require_dim(body.dim(), x.size(), "support_v");
  return (body.vertices() * x).maxCoeff();
}

double support_h(const HPolytope& body, const Vec& x) {
  require_dim(body.dim(), x.size(), "support_h");
  const LpResult r = lp_maximize(x, body.normals(), body.offsets(), kPivotTol);
  switch (r.status) {
    case LpStatus::Optimal: return r.value;
    case LpStatus::Unbounded: throw Error(ErrorCode::Unbounded, "support_h: LP is unbounded");
    case LpStatus::Infeasible: break;
  }
  throw Error(ErrorCode::Infeasible, "support_h: constraint set is empty");
}

VPolytope project_polytope(const VPolytope& body, const Subspace& H) {
  require_dim(H.ambient_dim(), body.dim(), "project_polytope");
  return VPolytope(body.vertices() * H.basis().transpose());
}

VPolytope hull_reduce(const VPolytope& body) {
  const int m = body.size();
  const int d = body.dim();
  if (m <= 1) return body;
  const Mat& v = body.vertices();
  std::vector<Eigen::Index> extreme;
  // Point p is extreme iff some direction x (in the unit box) separates it:
  // max <x, p> - t  s.t.  <x, q> <= t  for every other q  is positive.
  for (int j = 0; j < m; ++j) {
    Mat A = Mat::Zero(m - 1 + 2 * d, d + 1);
    Vec b = Vec::Zero(m - 1 + 2 * d);
    int row = 0;
    for (int i = 0; i < m; ++i) {
      if (i == j) continue;
      A.row(row).head(d) = v.row(i);
      A(row, d) = -1.0;
      ++row;
    }
    for (int i = 0; i < d; ++i) {
      A(row, i) = 1.0;
      b(row++) = 1.0;
      A(row, i) = -1.0;
      b(row++) = 1.0;
    }
    Vec c(d + 1);
    c.head(d) = v.row(j).transpose();
    c(d) = -1.0;
    const LpResult r = lp_maximize(c, A, b, kPivotTol);
    const double scale = 1.0 + v.row(j).cwiseAbs().sum();
    if (r.status == LpStatus::Unbounded || (r.status == LpStatus::Optimal && r.value > 1e-9 * scale)) {
      extreme.push_back(j);
    }
  }
  Mat out(static_cast<Eigen::Index>(extreme.size()), d);
  for (std::size_t r = 0; r < extreme.size(); ++r) out.row(r) = v.row(extreme[r]);
  return VPolytope(std::move(out));
}

std::optional<HPolytope> section_polytope(const HPolytope& body, const Subspace& H) {
  require_dim(H.ambient_dim(), body.dim(), "section_polytope");
  const Mat projected = body.normals() * H.basis().transpose();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < projected.rows(); ++i) {
    if (projected.row(i).norm() < 1e-12) {
      if (body.offsets()(i) < 0.0) return std::nullopt;
    } else {
      keep.push_back(i);
    }
  }
  if (keep.empty()) {
    throw Error(ErrorCode::Unbounded, "section_polytope: section is the whole subspace");
  }
  Mat normals(static_cast<Eigen::Index>(keep.size()), H.dim());
  Vec offsets(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    normals.row(r) = projected.row(keep[r]);
    offsets(r) = body.offsets()(keep[r]);
  }
  return HPolytope(std::move(normals), std::move(offsets));
}

HPolytope polar_v(const VPolytope& body) {
  HPolytope polar(body.vertices(), Vec::Ones(body.size()));
  const int d = body.dim();
  for (int i = 0; i < d; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vec e = Vec::Zero(d);
      e(i) = sign;
      const LpResult r = lp_maximize(e, polar.normals(), polar.offsets(), kPivotTol);
      if (r.status != LpStatus::Optimal) {
        throw Error(ErrorCode::OriginNotInterior,
                    "polar_v: origin is not interior to the vertex hull");
      }
    }
  }
  return polar;
}

double gauge_v(const VPolytope& body, const Vec& x) {
  require_dim(body.dim(), x.size(), "gauge_v");
  const int m = body.size();
  const int d = body.dim();
  // min sum(lambda)  s.t.  V^T lambda = x,  lambda >= 0.
  Mat A = Mat::Zero(m + 2 * d, m);
  Vec b = Vec::Zero(m + 2 * d);
  A.topRows(m) = -Mat::Identity(m, m);
  A.middleRows(m, d) = body.vertices().transpose();
  b.segment(m, d) = x;
  A.bottomRows(d) = -body.vertices().transpose();
  b.tail(d) = -x;
  const LpResult r = lp_maximize(-Vec::Ones(m), A, b, kPivotTol);
  if (r.status != LpStatus::Optimal) {
    throw Error(ErrorCode::OriginNotInterior, "gauge_v: point outside the cone of the vertices");
  }
  return std::max(0.0, -r.value);
}

double gauge_h(const HPolytope& body, const Vec& x) {
  require_dim(body.dim(), x.size(), "gauge_h");
  if ((body.offsets().array() <= 0.0).any()) {
    throw Error(ErrorCode::OriginNotInterior, "gauge_h: offsets must be positive");
  }
  const Vec ratios = (body.normals() * x).cwiseQuotient(body.offsets());
  return std::max(0.0, ratios.maxCoeff());
}

VPolytope enumerate_vertices(const HPolytope& body, double max_subsets) {
  const int d = body.dim();
  const int m = body.size();
  if (binomial(m, d) > max_subsets) {
    throw Error(ErrorCode::InvalidArgument, "enumerate_vertices: too many constraint subsets");
  }
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e(i) = 1.0;
    support_h(body, e);   // throws Unbounded / Infeasible
    support_h(body, -e);
  }
  Mat A = body.normals();
  Vec b = body.offsets();
  for (int i = 0; i < m; ++i) {
    const double norm = A.row(i).norm();
    A.row(i) /= norm;
    b(i) /= norm;
  }

  std::vector<Vec> found;
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;
  Mat sub(d, d);
  Vec rhs(d);
  while (true) {
    for (int r = 0; r < d; ++r) {
      sub.row(r) = A.row(idx[r]);
      rhs(r) = b(idx[r]);
    }
    Eigen::FullPivLU<Mat> lu(sub);
    lu.setThreshold(kPivotTol);
    if (lu.isInvertible()) {
      const Vec y = lu.solve(rhs);
      const Vec slack = A * y - b;
      if ((slack.array() <= 1e-9 * (1.0 + b.array().abs())).all()) {
        bool dup = false;
        for (const Vec& f : found) {
          if ((f - y).norm() < 1e-9 * (1.0 + y.norm())) {
            dup = true;
            break;
          }
        }
        if (!dup) found.push_back(y);
      }
    }
    // Advance to the next d-combination of m.
    int pos = d - 1;
    while (pos >= 0 && idx[pos] == m - d + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int r = pos + 1; r < d; ++r) idx[r] = idx[r - 1] + 1;
  }
  if (found.empty()) throw Error(ErrorCode::Infeasible, "enumerate_vertices: no vertices");
  Mat out(static_cast<Eigen::Index>(found.size()), d);
  for (std::size_t r = 0; r < found.size(); ++r) out.row(r) = found[r].transpose();
  return VPolytope(std::move(out));
}

SupportFn support_oracle(const VPolytope& body) {
  const Mat v = body.vertices();
  return [v](const Vec& x) { return (v * x).maxCoeff(); };
}

SupportFn support_oracle(const HPolytope& body) {
  if (binomial(body.size(), body.dim()) <= 2.0e6) {
    return support_oracle(enumerate_vertices(body));
  }
  return [body](const Vec& x) { return support_h(body, x); };
}

VPolytope linear_image(const VPolytope& body, const Mat& M) {
  require_dim(body.dim(), M.cols(), "linear_image");
  return VPolytope(body.vertices() * M.transpose());
}

HPolytope affine_image(const HPolytope& body, const Mat& M, const Vec& shift) {
  require_dim(body.dim(), M.cols(), "affine_image");
  require_dim(body.dim(), M.rows(), "affine_image");
  require_dim(body.dim(), shift.size(), "affine_image");
  Eigen::FullPivLU<Mat> lu(M);
  if (!lu.isInvertible()) throw Error(ErrorCode::RankDeficient, "affine_image: singular map");
  const Mat normals = body.normals() * lu.inverse();
  const Vec offsets = body.offsets() + normals * shift;
  return HPolytope(normals, offsets);
}

}  // namespace cgeom
