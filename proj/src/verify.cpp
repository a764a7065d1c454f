#include "cgeom/verify.hpp"

#include "cgeom/error.hpp"
#include "cgeom/random.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

namespace cgeom {

namespace {

constexpr double kPreconditionTol = 1e-8;
constexpr double kSigmas = 3.0;

void require_matching(const DiscreteSphericalMeasure& mu, const Subspace& H, const char* where) {
  if (H.ambient_dim() != mu.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(where) + ": subspace lives in R^" + std::to_string(H.ambient_dim()) +
                    " but the measure in R^" + std::to_string(mu.dim()));
  }
}

void require_isotropic(const DiscreteSphericalMeasure& mu, double tol, const char* where) {
  const IsotropyReport r = isotropy_check(mu);
  if (!r.isotropic(tol)) {
    throw Error(ErrorCode::NotIsotropic, std::string(where) + ": measure is not isotropic (defect " +
                                             std::to_string(r.frobenius_defect) + ")");
  }
}

void require_centered(const DiscreteSphericalMeasure& mu, const char* where) {
  const IsotropyReport r = isotropy_check(mu);
  if (!r.centered(kPreconditionTol)) {
    throw Error(ErrorCode::NotCentered, std::string(where) + ": measure is not centered (centroid " +
                                            std::to_string(r.centroid_norm) + ")");
  }
}

void require_even(const DiscreteSphericalMeasure& mu, const char* where) {
  if (!mu.even()) throw Error(ErrorCode::NotEven, std::string(where) + ": measure must be even");
}

// C° cap H in basis coordinates: {y : <P_H u_i, y> <= 1}.
HPolytope polar_section(const DiscreteSphericalMeasure& mu, const Subspace& H) {
  auto s = section_polytope(polar_v(mu.hull()), H);
  if (!s) throw Error(ErrorCode::OriginNotInterior, "polar section is empty");
  return *s;
}

double ratio(int a, int b) { return std::sqrt(static_cast<double>(a) / b); }

}  // namespace

BoundReport make_bound_report(std::string name, int n, int k, const Estimate& lhs, double rhs,
                              BoundDirection direction, bool extremal) {
  BoundReport r;
  r.name = std::move(name);
  r.n = n;
  r.k = k;
  r.lhs = lhs;
  r.rhs = rhs;
  r.direction = direction;
  r.margin = direction == BoundDirection::Lower ? lhs.value - rhs : rhs - lhs.value;
  r.holds = r.margin >= -kSigmas * lhs.std_error;
  r.equality = extremal && r.holds;
  return r;
}

BoundReport verify_projection_simplex_body(const VPolytope& K, const Subspace& H, const MCConfig& cfg) {
  if (H.ambient_dim() != K.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "projection: body and subspace dimensions differ");
  }
  const int n = K.dim();
  const int k = H.dim();
  const VPolytope P = hull_reduce(project_polytope(K, H));
  const Estimate w = mean_width_mc(k, support_oracle(P), cfg);
  const double rhs = ratio(k, n) * mean_width_reference({ReferenceKind::Simplex, k});
  const bool eq = equality_case_detect(P, {ReferenceKind::Simplex, k}, ratio(k, n));
  return make_bound_report("projection-simplex", n, k, w, rhs, BoundDirection::Lower, eq);
}

BoundReport verify_projection_simplex(const DiscreteSphericalMeasure& mu, const Subspace& H,
                                      const MCConfig& cfg) {
  require_matching(mu, H, "projection-simplex");
  require_isotropic(mu, kPreconditionTol, "projection-simplex");
  require_centered(mu, "projection-simplex");
  return verify_projection_simplex_body(mu.hull(), H, cfg);
}

BoundReport verify_projection_cross(const DiscreteSphericalMeasure& mu, const Subspace& H,
                                    const MCConfig& cfg) {
  require_matching(mu, H, "projection-cross");
  require_even(mu, "projection-cross");
  require_isotropic(mu, kPreconditionTol, "projection-cross");
  const int n = mu.dim();
  const int k = H.dim();
  const VPolytope P = hull_reduce(project_polytope(mu.hull(), H));
  const Estimate w = mean_width_mc(k, support_oracle(P), cfg);
  const double rhs = ratio(k, n) * mean_width_reference({ReferenceKind::Cross, k});
  const bool eq = equality_case_detect(P, {ReferenceKind::Cross, k}, ratio(k, n));
  return make_bound_report("projection-cross", n, k, w, rhs, BoundDirection::Lower, eq);
}

BoundReport verify_section_cube(const DiscreteSphericalMeasure& mu, const Subspace& H,
                                const MCConfig& cfg) {
  require_matching(mu, H, "section-cube");
  require_even(mu, "section-cube");
  require_isotropic(mu, kPreconditionTol, "section-cube");
  const int n = mu.dim();
  const int k = H.dim();
  const VPolytope S = enumerate_vertices(polar_section(mu, H));
  const Estimate w = mean_width_mc(k, support_oracle(S), cfg);
  const double rhs = ratio(n, k) * mean_width_reference({ReferenceKind::Cube, k});
  const bool eq = equality_case_detect(S, {ReferenceKind::Cube, k}, ratio(n, k));
  return make_bound_report("section-cube", n, k, w, rhs, BoundDirection::Upper, eq);
}

BoundReport verify_ell_section_cross(const DiscreteSphericalMeasure& mu, const Subspace& H,
                                     const MCConfig& cfg) {
  require_matching(mu, H, "ell-section-cross");
  require_even(mu, "ell-section-cross");
  require_isotropic(mu, kPreconditionTol, "ell-section-cross");
  const int n = mu.dim();
  const int k = H.dim();
  const HPolytope S = polar_section(mu, H);
  const Estimate l = ell_norm(k, [&S](const Vec& x) { return gauge_h(S, x); }, cfg);
  // l(B_inf^k) = c_k W(B_1^k).
  const double rhs = ratio(k, n) * gaussian_constants(k).c_n *
                     mean_width_reference({ReferenceKind::Cross, k});
  const bool eq = equality_case_detect(enumerate_vertices(S), {ReferenceKind::Cube, k}, ratio(n, k));
  return make_bound_report("ell-section-cross", n, k, l, rhs, BoundDirection::Lower, eq);
}

BoundReport verify_ell_projection_cross(const DiscreteSphericalMeasure& mu, const Subspace& H,
                                        const MCConfig& cfg) {
  require_matching(mu, H, "ell-projection-cross");
  require_even(mu, "ell-projection-cross");
  require_isotropic(mu, kPreconditionTol, "ell-projection-cross");
  const int n = mu.dim();
  const int k = H.dim();
  // The gauge of P_H C is the support function of its polar C° cap H.
  const Estimate l = ell_norm(k, support_oracle(enumerate_vertices(polar_section(mu, H))), cfg);
  // l(B_1^k) = E |g|_1.
  const double rhs = ratio(n, k) * k * std::sqrt(2.0 / std::numbers::pi);
  const VPolytope P = hull_reduce(project_polytope(mu.hull(), H));
  const bool eq = equality_case_detect(P, {ReferenceKind::Cross, k}, ratio(k, n));
  return make_bound_report("ell-projection-cross", n, k, l, rhs, BoundDirection::Upper, eq);
}

BoundReport verify_ell_section_simplex(const DiscreteSphericalMeasure& mu, const Subspace& H,
                                       const MCConfig& cfg) {
  require_matching(mu, H, "ell-section-simplex");
  require_isotropic(mu, kPreconditionTol, "ell-section-simplex");
  require_centered(mu, "ell-section-simplex");
  const int n = mu.dim();
  const int k = H.dim();
  const HPolytope S = polar_section(mu, H);
  const Estimate l = ell_norm(k, [&S](const Vec& x) { return gauge_h(S, x); }, cfg);
  // l(Delta_k°) = c_k W(Delta_k).
  const double rhs = ratio(k, n) * gaussian_constants(k).c_n *
                     mean_width_reference({ReferenceKind::Simplex, k});
  const bool eq =
      equality_case_detect(enumerate_vertices(S), {ReferenceKind::PolarSimplex, k}, ratio(n, k));
  return make_bound_report("ell-section-simplex", n, k, l, rhs, BoundDirection::Lower, eq);
}

ScalarCheck ball_barthe_check(const DiscreteSphericalMeasure& nu, const std::vector<double>& f) {
  if (f.size() != nu.size()) {
    throw Error(ErrorCode::DimensionMismatch, "ball-barthe: need one weight per atom");
  }
  require_isotropic(nu, 1e-9, "ball-barthe");
  const int k = nu.dim();
  Mat M = Mat::Zero(k, k);
  double log_rhs = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i] > 0.0) || !std::isfinite(f[i])) {
      throw Error(ErrorCode::InvalidArgument, "ball-barthe: weights must be positive and finite");
    }
    const Atom& a = nu.atoms()[i];
    M += a.c * f[i] * a.u * a.u.transpose();
    log_rhs += a.c * std::log(f[i]);
  }
  ScalarCheck r;
  r.lhs = M.determinant();
  r.rhs = std::exp(log_rhs);
  r.holds = r.lhs >= r.rhs * (1.0 - 1e-9);
  r.equality = std::abs(r.lhs - r.rhs) <= 1e-9 * r.rhs;
  return r;
}

ScalarCheck lyz_norm_check(const DiscreteSphericalMeasure& nu, const std::vector<double>& f) {
  if (f.size() != nu.size()) {
    throw Error(ErrorCode::DimensionMismatch, "lyz-norm: need one value per atom");
  }
  require_isotropic(nu, 1e-9, "lyz-norm");
  Vec s = Vec::Zero(nu.dim());
  double sq = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) throw Error(ErrorCode::NonFinite, "lyz-norm: non-finite value");
    const Atom& a = nu.atoms()[i];
    s += a.c * f[i] * a.u;
    sq += a.c * f[i] * f[i];
  }
  ScalarCheck r;
  r.lhs = s.norm();
  r.rhs = std::sqrt(sq);
  r.holds = r.lhs <= r.rhs + 1e-12;
  return r;
}

TransportReport transport_bound_check(const DiscreteSphericalMeasure& mu, const Subspace& H,
                                      double lambda, const MCConfig& cfg, double r_max,
                                      int r_steps) {
  require_matching(mu, H, "transport");
  if (!std::isfinite(lambda)) throw Error(ErrorCode::InvalidArgument, "transport: lambda must be finite");
  if (r_steps < 2) throw Error(ErrorCode::InvalidArgument, "transport: need at least 2 nodes");
  const LiftedMeasure nu = lift_measure(mu, H);
  const int n = mu.dim();
  const int k = H.dim();
  const double sn = std::sqrt(static_cast<double>(n));
  const double sn1 = std::sqrt(static_cast<double>(n + 1));
  const double shift = lambda - sn1;
  if (r_max <= 0.0) r_max = sn * (8.0 + std::abs(lambda));

  TransportReport rep;
  rep.n = n;
  rep.k = k;
  rep.lambda = lambda;
  rep.r_max = r_max;
  rep.r_steps = r_steps;

  // tail[j] = trapezoid sum of the weight over nodes j..end, so a sample whose
  // scaled gauge first fits at node j contributes tail[j].
  const double h = r_max / (r_steps - 1);
  std::vector<double> tail(r_steps + 1, 0.0);
  for (int j = r_steps - 1; j >= 0; --j) {
    const double r = j * h;
    const double w = (j == 0 || j == r_steps - 1) ? 0.5 * h : h;
    tail[j] = tail[j + 1] + w * std::exp(-0.5 * r * r + shift * r);
  }
  const HPolytope S = polar_section(mu, H);
  rep.lhs = gaussian_expectation(
      k,
      [&](const Vec& g) {
        const double s = sn * gauge_h(S, g);
        if (s > r_max) return 0.0;
        int j = static_cast<int>(std::ceil(s / h));
        while (j > 0 && (j - 1) * h >= s) --j;
        while (j < r_steps && j * h < s) ++j;
        return tail[j];
      },
      cfg);

  double log_a = 0.0;
  double beta_sum = 0.0;
  for (const Atom& a : nu.atoms()) {
    const double w_last = a.u[k];
    log_a += a.c * log_half_line_gaussian_integral(shift * w_last);
    beta_sum += a.c * w_last;
  }
  rep.rhs = std::exp(-0.5 * k * std::log(2.0 * std::numbers::pi) + log_a);
  rep.beta = sn1 / std::sqrt(k + 1.0) * beta_sum;

  double via_mu = 0.0;
  for (const Atom& a : mu.atoms()) {
    const double p2 = n / (n + 1.0) * H.coordinates(a.u).squaredNorm() + 1.0 / (n + 1.0);
    via_mu += a.c * std::sqrt(p2);
  }
  rep.beta_from_mu = (n + 1.0) / (n * std::sqrt(k + 1.0)) * via_mu;

  rep.holds = rep.rhs > 0.0 && rep.lhs.value <= rep.rhs + kSigmas * rep.lhs.std_error &&
              rep.beta <= sn1 + 1e-8;
  return rep;
}

namespace {

std::vector<double> gram_multiset(const Mat& v) {
  const Mat g = v * v.transpose();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(g.rows() * (g.rows() + 1) / 2));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = i; j < g.cols(); ++j) out.push_back(g(i, j));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool equality_case_detect(const VPolytope& body, const ReferenceBody& target, double scale) {
  if (target.kind == ReferenceKind::Ball || body.dim() != target.k || !(scale > 0.0)) return false;
  if (target.kind == ReferenceKind::Cube && target.k > 12) return false;
  const VPolytope ext = hull_reduce(body);
  const Mat ref = scale * reference_vertices(target).vertices();
  if (ext.size() != ref.rows()) return false;
  const std::vector<double> a = gram_multiset(ext.vertices());
  const std::vector<double> b = gram_multiset(ref);
  const double tol = 1e-6 * std::max(1.0, scale * scale);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

double duality_gap(const DiscreteSphericalMeasure& mu, const Subspace& H, int directions,
                   std::uint64_t seed) {
  require_matching(mu, H, "duality");
  const HPolytope S = polar_section(mu, H);
  const VPolytope P = project_polytope(mu.hull(), H);
  double gap = 0.0;
  for (int i = 0; i < directions; ++i) {
    CounterStream rng(seed, static_cast<std::uint64_t>(i));
    const Vec x = rng.normal_vector(H.dim());
    gap = std::max(gap, std::abs(support_h(S, x) - gauge_v(P, x)));
  }
  return gap;
}

std::string_view to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::ProjectionSimplex: return "projection-simplex";
    case SweepKind::ProjectionCross: return "projection-cross";
    case SweepKind::SectionCube: return "section-cube";
    case SweepKind::EllSectionCross: return "ell-section-cross";
    case SweepKind::EllProjectionCross: return "ell-projection-cross";
    case SweepKind::EllSectionSimplex: return "ell-section-simplex";
  }
  return "unknown";
}

std::optional<SweepKind> parse_sweep_kind(std::string_view name) {
  for (SweepKind k : {SweepKind::ProjectionSimplex, SweepKind::ProjectionCross, SweepKind::SectionCube,
                      SweepKind::EllSectionCross, SweepKind::EllProjectionCross,
                      SweepKind::EllSectionSimplex}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

bool sweep_uses_simplex(SweepKind kind) {
  return kind == SweepKind::ProjectionSimplex || kind == SweepKind::EllSectionSimplex;
}

BoundReport run_check(SweepKind kind, const DiscreteSphericalMeasure& mu, const Subspace& H,
                      const MCConfig& cfg) {
  switch (kind) {
    case SweepKind::ProjectionSimplex: return verify_projection_simplex(mu, H, cfg);
    case SweepKind::ProjectionCross: return verify_projection_cross(mu, H, cfg);
    case SweepKind::SectionCube: return verify_section_cube(mu, H, cfg);
    case SweepKind::EllSectionCross: return verify_ell_section_cross(mu, H, cfg);
    case SweepKind::EllProjectionCross: return verify_ell_projection_cross(mu, H, cfg);
    case SweepKind::EllSectionSimplex: return verify_ell_section_simplex(mu, H, cfg);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown check");
}

std::vector<SweepRow> run_sweep(const SweepOptions& opts) {
  if (opts.n_min < 2 || opts.n_max < opts.n_min) {
    throw Error(ErrorCode::InvalidArgument, "sweep: need 2 <= n-min <= n-max");
  }
  if (opts.count < 1) throw Error(ErrorCode::InvalidArgument, "sweep: count must be >= 1");
  if (opts.subspaces < 1) throw Error(ErrorCode::InvalidArgument, "sweep: subspaces must be >= 1");
  if (opts.samples < 1) throw Error(ErrorCode::InvalidArgument, "sweep: samples must be >= 1");

  std::vector<SweepRow> rows;
  for (int n = opts.n_min; n <= opts.n_max; ++n) {
    for (int i = 0; i < opts.count; ++i) {
      const std::uint64_t mseed =
          derive_key(opts.seed, static_cast<std::uint64_t>(n) * 1000003ULL + static_cast<std::uint64_t>(i));
      CounterStream rng(mseed, 0);
      const DiscreteSphericalMeasure mu =
          sweep_uses_simplex(opts.kind)
              ? canonical_measure(CanonicalKind::Simplex, n)
              : random_even_isotropic(rng.uniform_int(n, 2 * n), n, derive_key(mseed, 1));
      std::vector<int> ks;
      if (opts.all_k) {
        for (int k = 1; k < n; ++k)
          for (int j = 0; j < opts.subspaces; ++j) ks.push_back(k);
      } else {
        for (int j = 0; j < opts.subspaces; ++j) ks.push_back(rng.uniform_int(1, n - 1));
      }
      for (std::size_t j = 0; j < ks.size(); ++j) {
        const std::uint64_t iseed = derive_key(mseed, 2 + j);
        const Subspace H = random_subspace(n, ks[j], iseed);
        MCConfig cfg;
        cfg.samples = opts.samples;
        cfg.seed = iseed;
        rows.push_back({iseed, static_cast<int>(mu.size()), run_check(opts.kind, mu, H, cfg)});
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.report.n, a.report.k, a.seed) < std::tie(b.report.n, b.report.k, b.seed);
  });
  return rows;
}

}  // namespace cgeom
