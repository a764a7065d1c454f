#pragma once

#include "cgeom/types.hpp"

#include <cstdint>
#include <optional>

namespace cgeom {

inline constexpr double kOrthonormalTol = 1e-12;
inline constexpr double kDedupTol = 1e-10;
inline constexpr double kPivotTol = 1e-10;
inline constexpr double kSupportTol = 1e-8;

/// A k-dimensional linear subspace of R^n stored as k orthonormal rows.
/// Projected and sectioned bodies are always expressed in this basis frame.
class Subspace {
 public:
  /// Throws InvalidArgument unless the rows are orthonormal to 1e-12.
  explicit Subspace(Mat basis);

  static Subspace full(int n);

  int ambient_dim() const { return static_cast<int>(basis_.cols()); }
  int dim() const { return static_cast<int>(basis_.rows()); }
  const Mat& basis() const { return basis_; }

  /// Coordinates of P_H x in the basis frame.
  Vec coordinates(const Vec& x) const;
  /// The ambient vector with the given basis coordinates.
  Vec embed(const Vec& y) const;
  /// The subspace Q H for an orthogonal Q.
  Subspace rotated(const Mat& Q) const;

 private:
  Mat basis_;
};

/// Gram-Schmidt in input order.  Throws RankDeficient when a row has no
/// component (above 1e-10) outside the span of the previous rows.
Subspace orthonormalize_subspace(const Mat& rows);

/// Orthonormalized Gaussian k x n matrix; deterministic in seed.
Subspace random_subspace(int n, int k, std::uint64_t seed);

/// Haar-distributed orthogonal n x n matrix; deterministic in seed.
Mat random_orthogonal(int n, std::uint64_t seed);

/// conv of a finite point set, one vertex per row.  Points closer than 1e-10
/// are merged; non-extreme points may remain (see hull_reduce).
class VPolytope {
 public:
  explicit VPolytope(Mat vertices);

  int dim() const { return static_cast<int>(vertices_.cols()); }
  int size() const { return static_cast<int>(vertices_.rows()); }
  const Mat& vertices() const { return vertices_; }
  Vec vertex(int i) const { return vertices_.row(i).transpose(); }

 private:
  Mat vertices_;
};

/// {x : <normal_i, x> <= offset_i for all i}, one normal per row.
class HPolytope {
 public:
  HPolytope(Mat normals, Vec offsets);

  int dim() const { return static_cast<int>(normals_.cols()); }
  int size() const { return static_cast<int>(normals_.rows()); }
  const Mat& normals() const { return normals_; }
  const Vec& offsets() const { return offsets_; }

  bool contains(const Vec& x, double tol = 0.0) const;

 private:
  Mat normals_;
  Vec offsets_;
};

double support_v(const VPolytope& body, const Vec& x);

/// LP optimum of max <x, y> over the body.  Throws Unbounded or Infeasible.
double support_h(const HPolytope& body, const Vec& x);

/// Vertices B v for every vertex v, in basis coordinates of H.
VPolytope project_polytope(const VPolytope& body, const Subspace& H);

/// Removes non-extreme points (LP separation test, any dimension).
VPolytope hull_reduce(const VPolytope& body);

/// Section by H in basis coordinates, or nullopt when the section is empty.
/// Rows whose image vanishes (< 1e-12) are dropped if their offset is
/// nonnegative; a dropped row with a negative offset empties the section.
/// Throws Unbounded when every row is dropped.
std::optional<HPolytope> section_polytope(const HPolytope& body, const Subspace& H);

/// Polar of a V-polytope: normals are the vertices, offsets are one.
/// Throws OriginNotInterior when the polar is unbounded in some +-e_i.
HPolytope polar_v(const VPolytope& body);

/// Minkowski functional min{t >= 0 : x in t conv(V)} by linear programming.
/// Throws OriginNotInterior when x is not in the cone of the vertices.
double gauge_v(const VPolytope& body, const Vec& x);

/// Minkowski functional of an H-polytope with all offsets positive:
/// max_i <a_i, x> / b_i (clamped at zero).
double gauge_h(const HPolytope& body, const Vec& x);

/// Brute-force vertex enumeration over all dim-subsets of constraints.
/// Throws Unbounded / Infeasible, or InvalidArgument when the number of
/// subsets exceeds max_subsets.
VPolytope enumerate_vertices(const HPolytope& body, double max_subsets = 5.0e6);

/// Fast support evaluator for repeated calls (Monte Carlo).  The H-polytope
/// variant enumerates vertices once when that is affordable and falls back to
/// the LP otherwise.
SupportFn support_oracle(const VPolytope& body);
SupportFn support_oracle(const HPolytope& body);

/// Image of a V-polytope under x -> M x.
VPolytope linear_image(const VPolytope& body, const Mat& M);
/// Image of an H-polytope under x -> M x + shift (M invertible).
HPolytope affine_image(const HPolytope& body, const Mat& M, const Vec& shift);

}  // namespace cgeom
