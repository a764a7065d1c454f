#pragma once

#include "cgeom/geom_core.hpp"
#include "cgeom/types.hpp"

#include <cstdint>
#include <vector>

namespace cgeom {

inline constexpr double kUnitTol = 1e-12;
inline constexpr double kEvenTol = 1e-12;
inline constexpr double kMergeTol = 1e-10;

struct Atom {
  Vec u;
  double c = 0.0;
};

/// Finite atomic measure on S^{n-1}.  Construction validates unit atoms,
/// positive weights and, when `even` is claimed, exact +-pairing with equal
/// weights (1e-12).
class DiscreteSphericalMeasure {
 public:
  DiscreteSphericalMeasure(int dim, std::vector<Atom> atoms, bool even = false);

  int dim() const { return dim_; }
  bool even() const { return even_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  double mass() const;
  /// Sum c_i u_i u_i^T.
  Mat moment_matrix() const;
  /// Sum c_i u_i.
  Vec first_moment() const;
  /// The support points as rows.
  Mat support_matrix() const;
  /// conv(supp mu).
  VPolytope hull() const;
  /// Q mu (atoms u -> Q u).
  DiscreteSphericalMeasure rotated(const Mat& Q) const;

 private:
  int dim_;
  std::vector<Atom> atoms_;
  bool even_;
};

/// Whether the atoms pair up as +-u with equal weights within tol.
bool has_even_pairing(const std::vector<Atom>& atoms, double tol);

struct IsotropyReport {
  double frobenius_defect = 0.0;
  double centroid_norm = 0.0;
  double mass = 0.0;

  bool isotropic(double tol) const { return frobenius_defect <= tol; }
  bool centered(double tol) const { return centroid_norm <= tol; }
};

IsotropyReport isotropy_check(const DiscreteSphericalMeasure& m);

enum class CanonicalKind { Cross, Simplex };

/// Vertices of the regular simplex inscribed in S^{n-1}, one per row: the
/// first at e_n, the rest built recursively from the (n-1)-simplex.
Mat regular_simplex_vertices(int n);

DiscreteSphericalMeasure canonical_measure(CanonicalKind kind, int n);

/// Even isotropic measure with 2 m_atoms atoms, built by repeatedly
/// whitening random directions with M^{-1/2}.  Throws NoConvergence after
/// 500 iterations.
DiscreteSphericalMeasure random_even_isotropic(int m_atoms, int n, std::uint64_t seed);

/// The measure on S^{k-1} (H coordinates) with atoms P_H u / |P_H u| and
/// weights c |P_H u|^2; atoms in H-perp are dropped, coincident images merged.
DiscreteSphericalMeasure project_measure(const DiscreteSphericalMeasure& m, const Subspace& H);

/// Isotropic measure on S^k in H' = span{H, e_{n+1}}, stored in k+1
/// coordinates with the distinguished axis last.
class LiftedMeasure {
 public:
  LiftedMeasure(int k, std::vector<Atom> atoms);

  int k() const { return k_; }
  const std::vector<Atom>& atoms() const { return measure_.atoms(); }
  const DiscreteSphericalMeasure& as_measure() const { return measure_; }
  double mass() const { return measure_.mass(); }
  /// || sum weight * w <w, e_last> - e_last ||.
  double last_axis_residual() const;

 private:
  int k_;
  DiscreteSphericalMeasure measure_;
};

/// The embedding u -> P_H' v(u) / |P_H' v(u)| with
/// v(u) = (-sqrt(n/(n+1)) u, 1/sqrt(n+1)) and weights
/// ((n+1)/n) c |P_H' v(u)|^2.
LiftedMeasure lift_measure(const DiscreteSphericalMeasure& m, const Subspace& H);

/// Merges atoms closer than tol, summing their weights.
std::vector<Atom> merge_atoms(std::vector<Atom> atoms, double tol = kMergeTol);

}  // namespace cgeom
