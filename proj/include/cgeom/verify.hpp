#pragma once

#include "cgeom/gauss.hpp"
#include "cgeom/geom_core.hpp"
#include "cgeom/measures.hpp"
#include "cgeom/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cgeom {

enum class BoundDirection { Lower, Upper };

/// Comparison of a Monte Carlo estimate against an exact bound.  The margin
/// is the slack in the direction of the inequality (lhs - rhs for lower
/// bounds, rhs - lhs for upper bounds), so a holding bound has margin >= 0 up
/// to noise.  holds <=> margin >= -3 stderr.
struct BoundReport {
  std::string name;
  int n = 0;
  int k = 0;
  Estimate lhs;
  double rhs = 0.0;
  BoundDirection direction = BoundDirection::Lower;
  double margin = 0.0;
  bool holds = false;
  bool equality = false;
};

BoundReport make_bound_report(std::string name, int n, int k, const Estimate& lhs, double rhs,
                              BoundDirection direction, bool extremal);

/// W(P_H C) >= sqrt(k/n) W(Delta_k), C the hull of the support.
BoundReport verify_projection_simplex(const DiscreteSphericalMeasure& mu, const Subspace& H,
                                      const MCConfig& cfg);
/// W(P_H C) >= sqrt(k/n) W(B_1^k) for even mu.
BoundReport verify_projection_cross(const DiscreteSphericalMeasure& mu, const Subspace& H,
                                    const MCConfig& cfg);
/// W(C° cap H) <= sqrt(n/k) W(B_inf^k) for even mu.
BoundReport verify_section_cube(const DiscreteSphericalMeasure& mu, const Subspace& H,
                                const MCConfig& cfg);

/// l(C° cap H) >= sqrt(k/n) l(B_inf^k) for even mu.
BoundReport verify_ell_section_cross(const DiscreteSphericalMeasure& mu, const Subspace& H,
                                     const MCConfig& cfg);
/// l(P_H C) <= sqrt(n/k) l(B_1^k) for even mu.
BoundReport verify_ell_projection_cross(const DiscreteSphericalMeasure& mu, const Subspace& H,
                                        const MCConfig& cfg);
/// l(C° cap H) >= sqrt(k/n) l(Delta_k°).
BoundReport verify_ell_section_simplex(const DiscreteSphericalMeasure& mu, const Subspace& H,
                                       const MCConfig& cfg);

/// W(P_H K) against sqrt(k/n) W(Delta_k) for an arbitrary body K, typically
/// one containing the hull of an isotropic measure in R^n.
BoundReport verify_projection_simplex_body(const VPolytope& K, const Subspace& H,
                                           const MCConfig& cfg);

struct ScalarCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  bool equality = false;
};

/// det sum c_i f_i u_i u_i^T  >=  exp sum c_i log f_i.
ScalarCheck ball_barthe_check(const DiscreteSphericalMeasure& nu, const std::vector<double>& f);
/// |sum c_i f_i u_i|  <=  (sum c_i f_i^2)^{1/2}.  equality is always false.
ScalarCheck lyz_norm_check(const DiscreteSphericalMeasure& nu, const std::vector<double>& f);

struct TransportReport {
  int n = 0;
  int k = 0;
  double lambda = 0.0;
  Estimate lhs;
  double rhs = 0.0;
  /// From the lifted measure, and again from mu directly.
  double beta = 0.0;
  double beta_from_mu = 0.0;
  double r_max = 0.0;
  int r_steps = 0;
  bool holds = false;
};

/// int_0^inf exp(-r^2/2 + (lambda - sqrt(n+1)) r) gamma_k((r/sqrt n)(C° cap H)) dr
/// against (2 pi)^{-k/2} exp sum_nu weight log G(w).  r_max <= 0 selects
/// sqrt(n) (8 + |lambda|).
TransportReport transport_bound_check(const DiscreteSphericalMeasure& mu, const Subspace& H,
                                      double lambda, const MCConfig& cfg, double r_max = 0.0,
                                      int r_steps = 2000);

/// Whether the extreme points of body match scale * target up to an
/// orthogonal map (equal count, sorted pairwise inner products within 1e-6).
bool equality_case_detect(const VPolytope& body, const ReferenceBody& target, double scale);

/// max over directions of |h_{C° cap H}(x) - ||x||_{P_H C}|, both by LP.
double duality_gap(const DiscreteSphericalMeasure& mu, const Subspace& H, int directions,
                   std::uint64_t seed);

enum class SweepKind {
  ProjectionSimplex,
  ProjectionCross,
  SectionCube,
  EllSectionCross,
  EllProjectionCross,
  EllSectionSimplex,
};

std::string_view to_string(SweepKind kind);
std::optional<SweepKind> parse_sweep_kind(std::string_view name);
bool sweep_uses_simplex(SweepKind kind);

BoundReport run_check(SweepKind kind, const DiscreteSphericalMeasure& mu, const Subspace& H,
                      const MCConfig& cfg);

struct SweepOptions {
  SweepKind kind = SweepKind::ProjectionCross;
  int n_min = 2;
  int n_max = 6;
  /// Measures per dimension.
  int count = 1;
  std::uint64_t seed = 0;
  /// false: each measure gets `subspaces` subspaces of random dimension
  /// 1..n-1; true: `subspaces` subspaces for every k in 1..n-1.
  bool all_k = false;
  int subspaces = 3;
  std::uint64_t samples = 200000;
};

struct SweepRow {
  std::uint64_t seed = 0;
  int m_atoms = 0;
  BoundReport report;
};

/// Seeded instances sorted by (n, k, seed).
std::vector<SweepRow> run_sweep(const SweepOptions& opts);

}  // namespace cgeom
