#pragma once

#include "cgeom/geom_core.hpp"
#include "cgeom/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

namespace cgeom {

/// c_n in  E_gamma[h_K] = c_n W(K),  together with the volume of B_2^n.
struct GaussianConstants {
  int n = 0;
  double c_n = 0.0;
  double omega_n = 0.0;
};

/// c_n = Gamma((n+1)/2) / (sqrt(2) Gamma(n/2)), so that c_n W(B_2^n) = E|g|.
GaussianConstants gaussian_constants(int n);

enum class ReferenceKind { Ball, Cube, Cross, Simplex, PolarSimplex };

struct ReferenceBody {
  ReferenceKind kind = ReferenceKind::Ball;
  int k = 1;
};

std::string_view to_string(ReferenceKind kind);
std::optional<ReferenceKind> parse_reference_kind(std::string_view name);

/// Vertex set of a polytopal reference body (Ball throws InvalidArgument).
/// The simplex is inscribed in the unit sphere; its polar is -k times it.
VPolytope reference_vertices(const ReferenceBody& body);
SupportFn reference_support(const ReferenceBody& body);

/// Exact mean width (quadrature where no closed form is used).
double mean_width_reference(const ReferenceBody& body);

struct MCConfig {
  std::uint64_t samples = 200000;
  std::uint64_t seed = 0;
  /// Samples per parallel work item.  Does not affect results.
  std::uint64_t batch = 16384;
};

struct Estimate {
  double value = 0.0;
  /// Sample standard deviation over sqrt(samples).
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

/// Worker threads used by the Monte Carlo estimators.  Defaults to the
/// CGEOM_THREADS environment variable, else the hardware concurrency.
void set_worker_threads(int threads);
int worker_threads();

/// E f(g) for g standard Gaussian in R^dim.  Sample i always draws from
/// substream (seed, i), and partial sums are reduced over fixed-size chunks in
/// index order, so the result is bit-identical for any thread count.
/// Throws NonFinite if f returns a non-finite value.
Estimate gaussian_expectation(int dim, const std::function<double(const Vec&)>& f,
                              const MCConfig& cfg);

/// (1/c_k) E h(g).
Estimate mean_width_mc(int dim, const SupportFn& support, const MCConfig& cfg);

/// gamma_dim(t K) for a membership oracle of K.
Estimate gaussian_mass(int dim, const MembershipFn& body, double t, const MCConfig& cfg);

struct ComplementEstimate {
  Estimate estimate;
  /// Estimated 1 - gamma(r_max K°).
  double tail_mass = 0.0;
  /// Set when the tail mass exceeds 1e-4 (r_max too small).
  bool truncation_warning = false;
};

/// W(K) = (1/c_n) int_0^inf [1 - gamma_n(t K°)] dt, trapezoid over r_steps
/// nodes on [0, r_max].  Every node uses the draws of gaussian_mass with the
/// same cfg; the crossing node of each sample is located by bisection, which
/// relies on t K° growing with t.
ComplementEstimate mean_width_complement(int dim, const MembershipFn& polar_membership,
                                         const MCConfig& cfg, double r_max = 12.0,
                                         int r_steps = 2000);

/// Same estimator, with membership x in t K° decided as ||x||_{K°} <= t.
ComplementEstimate mean_width_complement_gauge(int dim, const GaugeFn& polar_gauge,
                                               const MCConfig& cfg, double r_max = 12.0,
                                               int r_steps = 2000);

/// l(K) = E ||g||_K.
Estimate ell_norm(int dim, const GaugeFn& gauge, const MCConfig& cfg);

double normal_cdf(double t);
/// exp(x^2) erfc(x).
double erfcx(double x);
/// log of  int_0^inf exp(-s^2/2 + a s) ds = sqrt(pi/2) e^{a^2/2} (1 + erf(a/sqrt 2)).
double log_half_line_gaussian_integral(double a);

}  // namespace cgeom
