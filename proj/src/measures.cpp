#include "cgeom/measures.hpp"

#include "cgeom/error.hpp"
#include "cgeom/random.hpp"

#include <cmath>
#include <string>

namespace cgeom {

bool has_even_pairing(const std::vector<Atom>& atoms, double tol) {
  std::vector<bool> used(atoms.size(), false);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (used[i]) continue;
    bool matched = false;
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (used[j]) continue;
      if ((atoms[i].u + atoms[j].u).norm() <= tol &&
          std::abs(atoms[i].c - atoms[j].c) <= tol) {
        used[i] = used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

DiscreteSphericalMeasure::DiscreteSphericalMeasure(int dim, std::vector<Atom> atoms, bool even)
    : dim_(dim), atoms_(std::move(atoms)), even_(even) {
  if (dim_ < 1) throw Error(ErrorCode::InvalidArgument, "measure: dimension must be positive");
  if (atoms_.empty()) throw Error(ErrorCode::InvalidArgument, "measure: no atoms");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    const std::string where = "measure: atom " + std::to_string(i);
    if (a.u.size() != dim_) throw Error(ErrorCode::DimensionMismatch, where + " has wrong dimension");
    if (!a.u.allFinite() || !std::isfinite(a.c)) throw Error(ErrorCode::NonFinite, where + " is not finite");
    if (std::abs(a.u.norm() - 1.0) > kUnitTol) {
      throw Error(ErrorCode::InvalidArgument, where + " is not a unit vector");
    }
    if (!(a.c > 0.0)) throw Error(ErrorCode::InvalidArgument, where + " has nonpositive weight");
  }
  if (even_ && !has_even_pairing(atoms_, kEvenTol)) {
    throw Error(ErrorCode::NotEven, "measure: flagged even but atoms are not +-paired with equal weights");
  }
}

double DiscreteSphericalMeasure::mass() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.c;
  return s;
}

Mat DiscreteSphericalMeasure::moment_matrix() const {
  Mat m = Mat::Zero(dim_, dim_);
  for (const Atom& a : atoms_) m.noalias() += a.c * a.u * a.u.transpose();
  return m;
}

Vec DiscreteSphericalMeasure::first_moment() const {
  Vec v = Vec::Zero(dim_);
  for (const Atom& a : atoms_) v += a.c * a.u;
  return v;
}

Mat DiscreteSphericalMeasure::support_matrix() const {
  Mat s(static_cast<Eigen::Index>(atoms_.size()), dim_);
  for (std::size_t i = 0; i < atoms_.size(); ++i) s.row(i) = atoms_[i].u.transpose();
  return s;
}

VPolytope DiscreteSphericalMeasure::hull() const { return VPolytope(support_matrix()); }

DiscreteSphericalMeasure DiscreteSphericalMeasure::rotated(const Mat& Q) const {
  std::vector<Atom> out;
  out.reserve(atoms_.size());
  for (const Atom& a : atoms_) {
    const Vec u = Q * a.u;
    out.push_back({u / u.norm(), a.c});
  }
  return DiscreteSphericalMeasure(dim_, std::move(out), even_);
}

IsotropyReport isotropy_check(const DiscreteSphericalMeasure& m) {
  IsotropyReport r;
  r.mass = m.mass();
  r.frobenius_defect = (m.moment_matrix() - Mat::Identity(m.dim(), m.dim())).norm();
  r.centroid_norm = m.first_moment().norm() / r.mass;
  return r;
}

Mat regular_simplex_vertices(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "regular simplex needs n >= 1");
  if (n == 1) {
    Mat v(2, 1);
    v << 1.0, -1.0;
    return v;
  }
  const Mat lower = regular_simplex_vertices(n - 1);
  const double shrink = std::sqrt(1.0 - 1.0 / (static_cast<double>(n) * n));
  Mat v = Mat::Zero(n + 1, n);
  v(0, n - 1) = 1.0;
  for (int i = 0; i < n; ++i) {
    v.row(i + 1).head(n - 1) = shrink * lower.row(i);
    v(i + 1, n - 1) = -1.0 / n;
  }
  return v;
}

DiscreteSphericalMeasure canonical_measure(CanonicalKind kind, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "canonical_measure: n must be >= 1");
  std::vector<Atom> atoms;
  if (kind == CanonicalKind::Cross) {
    for (int i = 0; i < n; ++i) {
      Vec e = Vec::Zero(n);
      e(i) = 1.0;
      atoms.push_back({e, 0.5});
      atoms.push_back({-e, 0.5});
    }
    return DiscreteSphericalMeasure(n, std::move(atoms), true);
  }
  const Mat v = regular_simplex_vertices(n);
  const double w = static_cast<double>(n) / (n + 1);
  for (int i = 0; i <= n; ++i) atoms.push_back({v.row(i).transpose(), w});
  // The 1-simplex {+1, -1} happens to be symmetric.
  return DiscreteSphericalMeasure(n, std::move(atoms), n == 1);
}

DiscreteSphericalMeasure random_even_isotropic(int m_atoms, int n, std::uint64_t seed) {
  if (n < 1 || m_atoms < n) {
    throw Error(ErrorCode::InvalidArgument, "random_even_isotropic: need m_atoms >= n >= 1");
  }
  CounterStream rng(seed, 0x150);
  std::vector<Vec> dirs(m_atoms);
  std::vector<double> weights(m_atoms, static_cast<double>(n) / m_atoms);
  for (auto& u : dirs) {
    do {
      u = rng.normal_vector(n);
    } while (u.norm() < 1e-8);
    u.normalize();
  }
  const Mat I = Mat::Identity(n, n);
  constexpr int kMaxIterations = 500;
  bool converged = false;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    Mat M = Mat::Zero(n, n);
    for (int i = 0; i < m_atoms; ++i) M.noalias() += weights[i] * dirs[i] * dirs[i].transpose();
    if ((M - I).norm() <= 1e-10) {
      converged = true;
      break;
    }
    Eigen::SelfAdjointEigenSolver<Mat> eig(M);
    const Vec& ev = eig.eigenvalues();
    if (ev.minCoeff() <= 1e-12 * ev.maxCoeff()) {
      throw Error(ErrorCode::NoConvergence, "random_even_isotropic: degenerate draw, reseed");
    }
    const Mat inv_sqrt = eig.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                         eig.eigenvectors().transpose();
    for (int i = 0; i < m_atoms; ++i) {
      const Vec t = inv_sqrt * dirs[i];
      const double norm = t.norm();
      dirs[i] = t / norm;
      weights[i] *= norm * norm;
    }
  }
  if (!converged) {
    throw Error(ErrorCode::NoConvergence, "random_even_isotropic: 500 iterations exhausted");
  }
  std::vector<Atom> atoms;
  atoms.reserve(2 * m_atoms);
  for (int i = 0; i < m_atoms; ++i) {
    atoms.push_back({dirs[i], 0.5 * weights[i]});
    atoms.push_back({-dirs[i], 0.5 * weights[i]});
  }
  return DiscreteSphericalMeasure(n, std::move(atoms), true);
}

std::vector<Atom> merge_atoms(std::vector<Atom> atoms, double tol) {
  std::vector<Atom> out;
  for (Atom& a : atoms) {
    bool merged = false;
    for (Atom& o : out) {
      if ((o.u - a.u).norm() <= tol) {
        o.c += a.c;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(std::move(a));
  }
  return out;
}

DiscreteSphericalMeasure project_measure(const DiscreteSphericalMeasure& m, const Subspace& H) {
  if (H.ambient_dim() != m.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "project_measure: subspace and measure dimensions differ");
  }
  std::vector<Atom> images;
  for (const Atom& a : m.atoms()) {
    const Vec p = H.coordinates(a.u);
    const double norm = p.norm();
    if (norm <= 1e-12) continue;
    images.push_back({p / norm, a.c * norm * norm});
  }
  if (images.empty()) {
    throw Error(ErrorCode::Empty, "project_measure: every atom lies in the orthogonal complement");
  }
  return DiscreteSphericalMeasure(H.dim(), merge_atoms(std::move(images)), m.even());
}

LiftedMeasure::LiftedMeasure(int k, std::vector<Atom> atoms)
    : k_(k), measure_(k + 1, std::move(atoms), false) {
  for (const Atom& a : measure_.atoms()) {
    if (!(a.u(k_) > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "lifted measure: atom outside the open upper hemisphere");
    }
  }
  const double mass = measure_.mass();
  if (std::abs(mass - (k_ + 1)) > 1e-8) {
    throw Error(ErrorCode::NotIsotropic,
                "lifted measure: total weight " + std::to_string(mass) + " differs from k+1");
  }
}

double LiftedMeasure::last_axis_residual() const {
  Vec s = Vec::Zero(k_ + 1);
  for (const Atom& a : atoms()) s += a.c * a.u * a.u(k_);
  s(k_) -= 1.0;
  return s.norm();
}

LiftedMeasure lift_measure(const DiscreteSphericalMeasure& m, const Subspace& H) {
  if (H.ambient_dim() != m.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "lift_measure: subspace and measure dimensions differ");
  }
  const IsotropyReport report = isotropy_check(m);
  if (!report.isotropic(1e-9)) throw Error(ErrorCode::NotIsotropic, "lift_measure: measure is not isotropic");
  if (!report.centered(1e-9)) throw Error(ErrorCode::NotCentered, "lift_measure: measure is not centered");

  const int n = m.dim();
  const int k = H.dim();
  const double a = -std::sqrt(static_cast<double>(n) / (n + 1));
  const double last = 1.0 / std::sqrt(static_cast<double>(n + 1));
  const double scale = static_cast<double>(n + 1) / n;
  std::vector<Atom> lifted;
  lifted.reserve(m.size());
  for (const Atom& atom : m.atoms()) {
    Vec pv(k + 1);
    pv.head(k) = a * H.coordinates(atom.u);
    pv(k) = last;
    const double norm = pv.norm();
    lifted.push_back({pv / norm, scale * atom.c * norm * norm});
  }
  return LiftedMeasure(k, merge_atoms(std::move(lifted)));
}

}  // namespace cgeom
