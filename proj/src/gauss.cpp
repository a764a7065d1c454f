#include "cgeom/gauss.hpp"

#include "cgeom/error.hpp"
#include "cgeom/measures.hpp"
#include "cgeom/random.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

namespace cgeom {

namespace {

constexpr std::uint64_t kReductionChunk = 4096;

std::atomic<int> g_threads{0};

int default_threads() {
  if (const char* env = std::getenv("CGEOM_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(count + o.count);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.count) / n;
    m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / n;
    count += o.count;
  }
};

double gk_integrate(const std::function<double(double)>& f, double a, double b) {
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14, &error);
}

void require_dim(int dim) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
}

void require_samples(const MCConfig& cfg) {
  if (cfg.samples < 1) throw Error(ErrorCode::InvalidArgument, "MCConfig: samples must be >= 1");
}

}  // namespace

GaussianConstants gaussian_constants(int n) {
  require_dim(n);
  GaussianConstants g;
  g.n = n;
  g.c_n = std::exp(std::lgamma((n + 1) / 2.0) - std::lgamma(n / 2.0)) / std::numbers::sqrt2;
  g.omega_n = std::exp(n / 2.0 * std::log(std::numbers::pi) - std::lgamma(n / 2.0 + 1.0));
  return g;
}

std::string_view to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::Ball: return "ball";
    case ReferenceKind::Cube: return "cube";
    case ReferenceKind::Cross: return "cross";
    case ReferenceKind::Simplex: return "simplex";
    case ReferenceKind::PolarSimplex: return "polar_simplex";
  }
  return "unknown";
}

std::optional<ReferenceKind> parse_reference_kind(std::string_view name) {
  for (ReferenceKind k : {ReferenceKind::Ball, ReferenceKind::Cube, ReferenceKind::Cross,
                          ReferenceKind::Simplex, ReferenceKind::PolarSimplex}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

VPolytope reference_vertices(const ReferenceBody& body) {
  const int k = body.k;
  require_dim(k);
  switch (body.kind) {
    case ReferenceKind::Ball:
      throw Error(ErrorCode::InvalidArgument, "the ball has no vertex representation");
    case ReferenceKind::Cube: {
      if (k > 20) throw Error(ErrorCode::InvalidArgument, "cube vertex set too large");
      const int count = 1 << k;
      Mat v(count, k);
      for (int s = 0; s < count; ++s) {
        for (int i = 0; i < k; ++i) v(s, i) = (s >> i & 1) ? 1.0 : -1.0;
      }
      return VPolytope(std::move(v));
    }
    case ReferenceKind::Cross: {
      Mat v(2 * k, k);
      v.topRows(k) = Mat::Identity(k, k);
      v.bottomRows(k) = -Mat::Identity(k, k);
      return VPolytope(std::move(v));
    }
    case ReferenceKind::Simplex: return VPolytope(regular_simplex_vertices(k));
    case ReferenceKind::PolarSimplex: return VPolytope(-static_cast<double>(k) * regular_simplex_vertices(k));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown reference body");
}

SupportFn reference_support(const ReferenceBody& body) {
  switch (body.kind) {
    case ReferenceKind::Ball: return [](const Vec& x) { return x.norm(); };
    case ReferenceKind::Cube: return [](const Vec& x) { return x.lpNorm<1>(); };
    case ReferenceKind::Cross: return [](const Vec& x) { return x.lpNorm<Eigen::Infinity>(); };
    default: return support_oracle(reference_vertices(body));
  }
}

double mean_width_reference(const ReferenceBody& body) {
  const int k = body.k;
  require_dim(k);
  const double c_k = gaussian_constants(k).c_n;
  switch (body.kind) {
    case ReferenceKind::Ball: return 2.0;
    case ReferenceKind::Cube:
      return 2.0 * k * std::exp(std::lgamma(k / 2.0) - std::lgamma((k + 1) / 2.0)) /
             std::sqrt(std::numbers::pi);
    case ReferenceKind::Cross: {
      // E ||g||_inf = int_0^inf P(max |g_i| > t) dt.
      const auto tail = [k](double t) {
        return 1.0 - std::pow(std::erf(t / std::numbers::sqrt2), k);
      };
      return gk_integrate(tail, 0.0, 12.0) / c_k;
    }
    case ReferenceKind::Simplex:
    case ReferenceKind::PolarSimplex: {
      // <g, v_i> are exchangeable with covariance -1/k, i.e. distributed as
      // sqrt((k+1)/k) (g_i - mean g) over k+1 iid normals.
      const auto density = [k](double t) {
        const double phi = std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
        return t * (k + 1) * phi * std::pow(normal_cdf(t), k);
      };
      const double expected_max = gk_integrate(density, -12.0, 12.0);
      const double w = std::sqrt((k + 1.0) / k) * expected_max / c_k;
      return body.kind == ReferenceKind::Simplex ? w : k * w;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown reference body");
}

void set_worker_threads(int threads) { g_threads.store(std::max(0, threads)); }

int worker_threads() {
  const int t = g_threads.load();
  return t > 0 ? t : default_threads();
}

Estimate gaussian_expectation(int dim, const std::function<double(const Vec&)>& f,
                              const MCConfig& cfg) {
  require_dim(dim);
  require_samples(cfg);
  const std::uint64_t n = cfg.samples;
  const std::uint64_t chunks = (n + kReductionChunk - 1) / kReductionChunk;
  const std::uint64_t per_item =
      std::max<std::uint64_t>(1, (std::max<std::uint64_t>(cfg.batch, 1) + kReductionChunk - 1) / kReductionChunk);
  const std::uint64_t items = (chunks + per_item - 1) / per_item;

  std::vector<Moments> partial(chunks);
  std::vector<std::exception_ptr> errors(items);
  std::atomic<std::uint64_t> next{0};

  const auto work = [&]() {
    Vec g(dim);
    for (std::uint64_t item = next++; item < items; item = next++) {
      try {
        for (std::uint64_t c = item * per_item; c < std::min(chunks, (item + 1) * per_item); ++c) {
          Moments m;
          const std::uint64_t end = std::min(n, (c + 1) * kReductionChunk);
          for (std::uint64_t i = c * kReductionChunk; i < end; ++i) {
            CounterStream rng(cfg.seed, i);
            rng.fill_normal(g);
            const double v = f(g);
            if (!std::isfinite(v)) {
              throw Error(ErrorCode::NonFinite,
                          "Monte Carlo integrand is not finite at sample " + std::to_string(i));
            }
            m.add(v);
          }
          partial[c] = m;
        }
      } catch (...) {
        errors[item] = std::current_exception();
      }
    }
  };

  const int threads = static_cast<int>(std::min<std::uint64_t>(worker_threads(), items));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Moments total;
  for (const Moments& m : partial) total.merge(m);
  Estimate est;
  est.samples = n;
  est.value = total.mean;
  est.std_error = n > 1 ? std::sqrt(total.m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  return est;
}

Estimate mean_width_mc(int dim, const SupportFn& support, const MCConfig& cfg) {
  const double c = gaussian_constants(dim).c_n;
  Estimate e = gaussian_expectation(dim, support, cfg);
  e.value /= c;
  e.std_error /= c;
  return e;
}

Estimate gaussian_mass(int dim, const MembershipFn& body, double t, const MCConfig& cfg) {
  require_dim(dim);
  require_samples(cfg);
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "gaussian_mass: scale must be >= 0");
  if (t == 0.0) return Estimate{0.0, 0.0, cfg.samples};
  const double inv = 1.0 / t;
  return gaussian_expectation(dim, [&](const Vec& x) { return body(inv * x) ? 1.0 : 0.0; }, cfg);
}

namespace {

// Trapezoid value of int_0^{r_max} 1{t < crossing} dt on the node grid, where
// `outside_count` nodes (starting at t = 0) lie below the crossing.
double trapezoid_indicator(int outside_count, int r_steps, double h) {
  if (outside_count <= 0) return 0.0;
  double s = static_cast<double>(outside_count) - 0.5;  // first node has half weight
  if (outside_count == r_steps) s -= 0.5;               // so does the last
  return h * s;
}

ComplementEstimate finish_complement(int dim, Estimate raw, double tail_mass) {
  const double c = gaussian_constants(dim).c_n;
  ComplementEstimate out;
  out.estimate = raw;
  out.estimate.value /= c;
  out.estimate.std_error /= c;
  out.tail_mass = tail_mass;
  out.truncation_warning = tail_mass > 1e-4;
  return out;
}

void require_grid(double r_max, int r_steps) {
  if (!(r_max > 0.0) || r_steps < 2) {
    throw Error(ErrorCode::InvalidArgument, "complement integral needs r_max > 0 and r_steps >= 2");
  }
}

}  // namespace

ComplementEstimate mean_width_complement(int dim, const MembershipFn& polar_membership,
                                         const MCConfig& cfg, double r_max, int r_steps) {
  require_grid(r_max, r_steps);
  const double h = r_max / (r_steps - 1);
  const auto inside = [&](const Vec& x, int node) { return polar_membership(x / (node * h)); };
  const auto per_sample = [&](const Vec& x) {
    // Node 0 (t = 0) is always outside; find the first inside node.
    if (!inside(x, r_steps - 1)) return trapezoid_indicator(r_steps, r_steps, h);
    int lo = 0, hi = r_steps - 1;  // lo outside, hi inside
    while (hi - lo > 1) {
      const int mid = lo + (hi - lo) / 2;
      if (inside(x, mid)) hi = mid; else lo = mid;
    }
    return trapezoid_indicator(hi, r_steps, h);
  };
  const Estimate raw = gaussian_expectation(dim, per_sample, cfg);
  const Estimate tail = gaussian_mass(dim, polar_membership, r_max, cfg);
  return finish_complement(dim, raw, 1.0 - tail.value);
}

ComplementEstimate mean_width_complement_gauge(int dim, const GaugeFn& polar_gauge,
                                               const MCConfig& cfg, double r_max, int r_steps) {
  require_grid(r_max, r_steps);
  const double h = r_max / (r_steps - 1);
  const auto per_sample = [&](const Vec& x) {
    const double g = polar_gauge(x);
    if (!std::isfinite(g)) return g;
    if (g > r_max) return trapezoid_indicator(r_steps, r_steps, h);
    // Nodes j*h < g are outside.
    int outside = static_cast<int>(std::ceil(g / h));
    while (outside > 0 && (outside - 1) * h >= g) --outside;
    while (outside < r_steps && outside * h < g) ++outside;
    return trapezoid_indicator(outside, r_steps, h);
  };
  const Estimate raw = gaussian_expectation(dim, per_sample, cfg);
  const Estimate tail = gaussian_expectation(
      dim, [&](const Vec& x) { return polar_gauge(x) > r_max ? 1.0 : 0.0; }, cfg);
  return finish_complement(dim, raw, tail.value);
}

Estimate ell_norm(int dim, const GaugeFn& gauge, const MCConfig& cfg) {
  return gaussian_expectation(dim, gauge, cfg);
}

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

double erfcx(double x) {
  if (x < 10.0) return std::exp(x * x) * std::erfc(x);
  // Continued fraction  sqrt(pi) erfcx(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
  double t = x;
  for (int k = 80; k >= 1; --k) t = x + (k / 2.0) / t;
  return 1.0 / (std::sqrt(std::numbers::pi) * t);
}

double log_half_line_gaussian_integral(double a) {
  const double base = 0.5 * std::log(std::numbers::pi / 2.0);
  const double z = a / std::numbers::sqrt2;
  if (a < 0.0) return base + std::log(erfcx(-z));
  return base + 0.5 * a * a + std::log1p(std::erf(z));
}

}  // namespace cgeom
