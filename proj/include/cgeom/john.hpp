#pragma once

#include "cgeom/geom_core.hpp"
#include "cgeom/measures.hpp"
#include "cgeom/types.hpp"

#include <utility>

namespace cgeom {

/// {x : (x - center)^T shape^{-1} (x - center) <= 1}, with shape = factor^2
/// and factor symmetric positive definite.
struct Ellipsoid {
  Vec center;
  Mat shape;
  Mat factor;

  static Ellipsoid from_factor(Mat factor, Vec center);
};

/// x -> linear x + shift.
struct AffineMap {
  Mat linear;
  Vec shift;

  Vec apply(const Vec& x) const { return linear * x + shift; }
  AffineMap inverse() const;
};

struct JohnOptions {
  /// Outer iterations stop once the barrier gap m / t falls below this.
  double gap_tol = 1e-10;
  int max_newton = 200;
};

/// Maximal volume ellipsoid inside an H-polytope, by Newton's method on a
/// log-barrier for  max log det E  s.t.  |E a_i| + <a_i, d> <= b_i.
/// Throws Unbounded, Empty or NoConvergence.
Ellipsoid john_ellipsoid(const HPolytope& body, const JohnOptions& opts = {});

/// The image of body under the map sending its John ellipsoid to the unit
/// ball, together with that map.
std::pair<HPolytope, AffineMap> to_john_position(const HPolytope& body);

/// Tolerances used to pick and weigh contact points.
inline constexpr double kTangencyTol = 1e-6;
inline constexpr double kDecompositionTol = 1e-6;
inline constexpr double kContactPairTol = 1e-9;

/// John weights on the facets tangent to the unit ball, from nonnegative
/// least squares on  sum c_i u_i u_i^T = I,  sum c_i u_i = 0.
/// Throws DecompositionFailed when the residual exceeds 1e-6.
DiscreteSphericalMeasure contact_decomposition(const HPolytope& body_in_john_position);

/// Contact measure of a V-polytope in Loewner position, obtained as the John
/// contacts of its polar.
DiscreteSphericalMeasure loewner_contacts(const VPolytope& body_in_loewner_position);

struct JohnResult {
  Ellipsoid ellipsoid;
  /// Sends the John ellipsoid to the unit ball.
  AffineMap transform;
  HPolytope positioned;
  DiscreteSphericalMeasure contacts;
};

JohnResult john_decomposition(const HPolytope& body);

}  // namespace cgeom
