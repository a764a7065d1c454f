// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "cgeom/error.hpp"
#include "cgeom/gauss.hpp"
#include "cgeom/io.hpp"
#include "cgeom/john.hpp"
#include "cgeom/measures.hpp"
#include "cgeom/random.hpp"
#include "cgeom/verify.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace cgeom;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

MCConfig mc(std::uint64_t samples, std::uint64_t seed) {
  MCConfig c;
  c.samples = samples;
  c.seed = seed;
  return c;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Mat cross_vertices(int k) {
  Mat v(2 * k, k);
  v << Mat::Identity(k, k), -Mat::Identity(k, k);
  return v;
}

Mat cube_vertices(int k) { return reference_vertices({ReferenceKind::Cube, k}).vertices(); }

HPolytope cube_h(int k) { return HPolytope(cross_vertices(k), Vec::Ones(2 * k)); }

// ---------------------------------------------------------------- criterion 1

Outcome constant_pin() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const Estimate e = mean_width_mc(k, [](const Vec& x) { return x.norm(); }, mc(1000000, 100 + k));
    const double z = std::abs(e.value - 2.0) / e.std_error;
    worst = std::max(worst, z);
    o.require(z <= 3.0, "k=" + std::to_string(k) + " off by " + fmt(z) + " sigma");
  }
  const double t = seconds_since(t0);
  o.require(t < 5.0, "took " + fmt(t) + " s");
  if (o.pass) o.detail = "worst " + fmt(worst) + " sigma, " + fmt(t) + " s";
  return o;
}

// ---------------------------------------------------------------- criterion 2

Outcome closed_forms() {
  Outcome o;
  struct Case {
    ReferenceBody body;
    double exact;
  };
  const std::array<Case, 3> cases = {{{{ReferenceKind::Cube, 2}, 8 / std::numbers::pi},
                                      {{ReferenceKind::Cross, 2}, 4 * std::sqrt(2.0) / std::numbers::pi},
                                      {{ReferenceKind::Simplex, 1}, 2.0}}};
  double worst = 0.0;
  for (const Case& c : cases) {
    const std::string name(to_string(c.body.kind));
    const double ref = mean_width_reference(c.body);
    o.require(std::abs(ref - c.exact) <= 1e-10, name + " reference " + fmt(ref));
    const Estimate e = mean_width_mc(c.body.k, support_oracle(reference_vertices(c.body)), mc(1000000, 7));
    const double z = std::abs(e.value - c.exact) / e.std_error;
    worst = std::max(worst, z);
    o.require(z <= 3.0, name + " Monte Carlo off by " + fmt(z) + " sigma");
  }
  if (o.pass) o.detail = "references exact to 1e-10, worst MC " + fmt(worst) + " sigma";
  return o;
}

// ---------------------------------------------------------------- criterion 3

struct TestBody {
  std::string name;
  GaugeFn gauge;            // ||.||_K from an H-representation of K
  SupportFn support;        // h_K from a V-representation of K
  SupportFn polar_support;  // h_{K°} from a V-representation of K°
  MembershipFn polar_member;
};

std::vector<TestBody> identity_bodies() {
  std::vector<TestBody> out;
  out.push_back({"B2^2", [](const Vec& x) { return x.norm(); }, [](const Vec& x) { return x.norm(); },
                 [](const Vec& x) { return x.norm(); }, [](const Vec& x) { return x.norm() <= 1.0; }});

  const HPolytope cross_h = polar_v(VPolytope(cube_vertices(2)));
  const HPolytope cube = cube_h(2);
  const VPolytope cross_v(cross_vertices(2));
  const VPolytope cube_v(cube_vertices(2));
  out.push_back({"B1^2", [cross_h](const Vec& x) { return gauge_h(cross_h, x); }, support_oracle(cross_v),
                 support_oracle(cube_v), [cube](const Vec& x) { return cube.contains(x); }});
  out.push_back({"Binf^2", [cube](const Vec& x) { return gauge_h(cube, x); }, support_oracle(cube_v),
                 support_oracle(cross_v), [cross_h](const Vec& x) { return cross_h.contains(x); }});

  // Delta_2 = {<-v_j, x> <= 1/2}; its polar is -2 Delta_2.
  const Mat v = regular_simplex_vertices(2);
  const HPolytope tri_h(-v, Vec::Constant(3, 0.5));
  const VPolytope tri_v(v);
  const VPolytope polar_v_rep(-2.0 * v);
  const HPolytope polar_h = polar_v(tri_v);
  out.push_back({"Delta_2", [tri_h](const Vec& x) { return gauge_h(tri_h, x); }, support_oracle(tri_v),
                 support_oracle(polar_v_rep), [polar_h](const Vec& x) { return polar_h.contains(x); }});
  return out;
}

Outcome identity_suite() {
  Outcome o;
  const double c2 = gaussian_constants(2).c_n;
  double worst = 0.0;
  for (const TestBody& b : identity_bodies()) {
    const Estimate ell = ell_norm(2, b.gauge, mc(400000, 11));
    const Estimate wp = mean_width_mc(2, b.polar_support, mc(400000, 12));
    const double z1 = std::abs(ell.value - c2 * wp.value) /
                      std::hypot(ell.std_error, c2 * wp.std_error);
    o.require(z1 <= 3.0, b.name + ": l(K) vs c W(K°) off by " + fmt(z1) + " sigma");

    const ComplementEstimate comp = mean_width_complement(2, b.polar_member, mc(200000, 13));
    const Estimate w = mean_width_mc(2, b.support, mc(400000, 14));
    const double z2 = std::abs(comp.estimate.value - w.value) / std::hypot(comp.estimate.std_error, w.std_error);
    o.require(!comp.truncation_warning, b.name + ": complement range truncated");
    o.require(z2 <= 3.0, b.name + ": complement vs direct off by " + fmt(z2) + " sigma");
    worst = std::max({worst, z1, z2});
  }
  if (o.pass) o.detail = "4 bodies, worst " + fmt(worst) + " sigma";
  return o;
}

// ---------------------------------------------------------------- criterion 4

Outcome duality() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const int n = 2 + static_cast<int>(i % 4);
    CounterStream rng(404, i);
    const int k = rng.uniform_int(1, n - 1);
    const DiscreteSphericalMeasure mu = i % 2 == 0 ? random_even_isotropic(rng.uniform_int(n, 2 * n), n, i)
                                                   : canonical_measure(CanonicalKind::Simplex, n).rotated(
                                                         random_orthogonal(n, i));
    const double gap = duality_gap(mu, random_subspace(n, k, 1000 + i), 200, i);
    worst = std::max(worst, gap);
    o.require(gap <= 1e-8, "pair " + std::to_string(i) + " gap " + fmt(gap));
  }
  if (o.pass) o.detail = "20 pairs x 200 directions, max gap " + fmt(worst);
  return o;
}

// ---------------------------------------------------------------- criteria 5, 6

Outcome cross_cube_sweep() {
  Outcome o;
  const auto t0 = Clock::now();
  SweepOptions opts;
  opts.n_min = 2;
  opts.n_max = 6;
  opts.count = 20;
  opts.seed = 2024;
  opts.samples = 200000;
  int rows = 0, violations = 0, measures = 0;
  for (SweepKind kind : {SweepKind::ProjectionCross, SweepKind::SectionCube}) {
    opts.kind = kind;
    const std::vector<SweepRow> r = run_sweep(opts);
    rows += static_cast<int>(r.size());
    for (const SweepRow& row : r) {
      if (!row.report.holds) {
        ++violations;
        o.require(false, std::string(to_string(kind)) + " violated at seed " + std::to_string(row.seed));
      }
    }
  }
  measures = opts.count * (opts.n_max - opts.n_min + 1);
  const double t = seconds_since(t0);
  o.require(rows == 2 * 3 * measures, "unexpected row count " + std::to_string(rows));
  o.require(t < 120.0, "took " + fmt(t) + " s");
  if (o.pass) {
    o.detail = std::to_string(measures) + " measures x 3 subspaces, " + std::to_string(rows) +
               " checks, 0 violations, " + fmt(t) + " s";
  }
  (void)violations;
  return o;
}

Outcome simplex_sweep() {
  Outcome o;
  SweepOptions opts;
  opts.kind = SweepKind::ProjectionSimplex;
  opts.n_min = 2;
  opts.n_max = 6;
  opts.count = 1;
  opts.seed = 77;
  const std::vector<SweepRow> r = run_sweep(opts);
  for (const SweepRow& row : r) {
    o.require(row.report.holds, "violation at n=" + std::to_string(row.report.n) + " seed " + std::to_string(row.seed));
  }
  for (int n = 2; n <= 6; ++n) {
    const BoundReport full = verify_projection_simplex(canonical_measure(CanonicalKind::Simplex, n),
                                                       Subspace::full(n), mc(200000, n));
    o.require(full.equality, "k=n equality missed at n=" + std::to_string(n));
  }
  if (o.pass) o.detail = std::to_string(r.size()) + " checks hold, k=n equality at n=2..6";
  return o;
}

// ---------------------------------------------------------------- criterion 7

Outcome equality_instances() {
  Outcome o;
  const double r = 1 / std::sqrt(2.0);
  Mat b(1, 2);
  b << r, r;
  const BoundReport diag =
      verify_projection_cross(canonical_measure(CanonicalKind::Cross, 2), Subspace(b), mc(200000, 1));
  o.require(diag.equality, "diagonal instance not flagged");
  o.require(std::abs(diag.lhs.value - std::sqrt(2.0)) <= 3 * diag.lhs.std_error, "diagonal width off");
  for (int n = 2; n <= 5; ++n) {
    const auto cross = canonical_measure(CanonicalKind::Cross, n);
    const auto simplex = canonical_measure(CanonicalKind::Simplex, n);
    const Subspace full = Subspace::full(n);
    o.require(verify_projection_cross(cross, full, mc(100000, n)).equality, "cross k=n, n=" + std::to_string(n));
    o.require(verify_section_cube(cross, full, mc(100000, n)).equality, "cube k=n, n=" + std::to_string(n));
    o.require(verify_projection_simplex(simplex, full, mc(100000, n)).equality,
              "simplex k=n, n=" + std::to_string(n));
  }
  if (o.pass) o.detail = "diagonal W=" + fmt(diag.lhs.value) + ", k=n flagged for n=2..5";
  return o;
}

// ---------------------------------------------------------------- criterion 8

Outcome ball_barthe() {
  Outcome o;
  int strict = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const int k = 2 + static_cast<int>(i % 3);
    CounterStream rng(808, i);
    const DiscreteSphericalMeasure nu =
        i % 4 == 3 ? canonical_measure(CanonicalKind::Simplex, k).rotated(random_orthogonal(k, i))
                   : random_even_isotropic(rng.uniform_int(k, 2 * k), k, i);
    std::vector<double> f;
    for (std::size_t j = 0; j < nu.size(); ++j) f.push_back(std::exp(1.5 * rng.normal()));
    const ScalarCheck c = ball_barthe_check(nu, f);
    o.require(c.lhs >= c.rhs * (1 - 1e-9), "instance " + std::to_string(i) + " lhs < rhs");
    strict += c.lhs > c.rhs ? 1 : 0;
  }
  // Hand instance against an explicit 2 x 2 computation.
  const double s = std::sqrt(3.0) / 2;
  const double u[3][2] = {{0.0, 1.0}, {s, -0.5}, {-s, -0.5}};
  const double f[3] = {4.0, 1.0, 1.0};
  double m00 = 0, m01 = 0, m11 = 0, logr = 0;
  for (int i = 0; i < 3; ++i) {
    const double w = 2.0 / 3.0 * f[i];
    m00 += w * u[i][0] * u[i][0];
    m01 += w * u[i][0] * u[i][1];
    m11 += w * u[i][1] * u[i][1];
    logr += 2.0 / 3.0 * std::log(f[i]);
  }
  const double det = m00 * m11 - m01 * m01;
  const ScalarCheck hand = ball_barthe_check(canonical_measure(CanonicalKind::Simplex, 2), {4.0, 1.0, 1.0});
  o.require(std::abs(det - 3.0) <= 1e-12 && std::abs(hand.lhs - 3.0) <= 1e-12, "hand lhs " + fmt(hand.lhs));
  o.require(std::abs(std::exp(logr) - std::pow(4.0, 2.0 / 3.0)) <= 1e-12 &&
                std::abs(hand.rhs - std::pow(4.0, 2.0 / 3.0)) <= 1e-12,
            "hand rhs " + fmt(hand.rhs));
  o.require(std::abs(hand.lhs - det) <= 1e-12, "library and oracle disagree");
  if (o.pass) o.detail = "1000 instances hold (" + std::to_string(strict) + " strict), hand lhs 3, rhs 4^(2/3)";
  return o;
}

// ---------------------------------------------------------------- criterion 9

Outcome embedding() {
  Outcome o;
  double worst_defect = 0, worst_mass = 0, worst_res = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const int n = 2 + static_cast<int>(i % 5);
    CounterStream rng(909, i);
    const int k = rng.uniform_int(1, n);
    const DiscreteSphericalMeasure mu = i % 3 == 2 ? canonical_measure(CanonicalKind::Simplex, n)
                                                   : random_even_isotropic(rng.uniform_int(n, 2 * n), n, i);
    const LiftedMeasure nu = lift_measure(mu, random_subspace(n, k, 5000 + i));
    worst_defect = std::max(worst_defect, isotropy_check(nu.as_measure()).frobenius_defect);
    worst_mass = std::max(worst_mass, std::abs(nu.mass() - (k + 1)));
    worst_res = std::max(worst_res, nu.last_axis_residual());
  }
  o.require(worst_defect <= 1e-8, "defect " + fmt(worst_defect));
  o.require(worst_mass <= 1e-10, "mass error " + fmt(worst_mass));
  o.require(worst_res <= 1e-8, "moment residual " + fmt(worst_res));

  Mat e1(1, 2);
  e1 << 1, 0;
  const LiftedMeasure hand = lift_measure(canonical_measure(CanonicalKind::Cross, 2), Subspace(e1));
  const double a = std::sqrt(2.0 / 3.0), b = 1 / std::sqrt(3.0);
  const std::vector<std::array<double, 3>> expected = {{-a, b, 0.75}, {a, b, 0.75}, {0.0, 1.0, 0.5}};
  o.require(hand.atoms().size() == 3, "hand lift has " + std::to_string(hand.atoms().size()) + " atoms");
  for (const auto& ex : expected) {
    const bool found = std::any_of(hand.atoms().begin(), hand.atoms().end(), [&](const Atom& at) {
      return std::abs(at.u[0] - ex[0]) <= 1e-12 && std::abs(at.u[1] - ex[1]) <= 1e-12 &&
             std::abs(at.c - ex[2]) <= 1e-12;
    });
    o.require(found, "hand lift atom (" + fmt(ex[0]) + ", " + fmt(ex[1]) + ") missing");
  }
  if (o.pass) {
    o.detail = "50 instances: defect " + fmt(worst_defect) + ", mass " + fmt(worst_mass) + ", residual " +
               fmt(worst_res) + "; hand lift exact";
  }
  return o;
}

// ---------------------------------------------------------------- criterion 10

Outcome transport() {
  Outcome o;
  int checks = 0;
  double worst_beta = -1e9;
  for (CanonicalKind kind : {CanonicalKind::Simplex, CanonicalKind::Cross}) {
    for (int n : {2, 3}) {
      const DiscreteSphericalMeasure mu = canonical_measure(kind, n);
      for (int k = 1; k <= n; ++k) {
        const Subspace H = k == n ? Subspace::full(n) : random_subspace(n, k, 31 * n + k);
        for (double lambda : {-2.0, 0.0, std::sqrt(n + 1.0), 2.0}) {
          const TransportReport r = transport_bound_check(mu, H, lambda, mc(200000, checks));
          ++checks;
          const std::string where = std::string(kind == CanonicalKind::Simplex ? "simplex" : "cross") +
                                    " n=" + std::to_string(n) + " k=" + std::to_string(k) +
                                    " lambda=" + fmt(lambda);
          o.require(r.lhs.value <= r.rhs + 3 * r.lhs.std_error, where + " lhs exceeds rhs");
          o.require(r.beta <= std::sqrt(n + 1.0) + 1e-8, where + " beta " + fmt(r.beta));
          o.require(std::abs(r.beta - r.beta_from_mu) <= 1e-10, where + " beta routes disagree");
          worst_beta = std::max(worst_beta, r.beta - std::sqrt(n + 1.0));
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(checks) + " checks hold, max beta - sqrt(n+1) = " + fmt(worst_beta);
  return o;
}

// ---------------------------------------------------------------- criterion 11

std::vector<double> sorted_gram(const DiscreteSphericalMeasure& m) {
  const Mat u = m.support_matrix();
  const Mat g = u * u.transpose();
  std::vector<double> out(g.data(), g.data() + g.size());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> sorted_weights(const DiscreteSphericalMeasure& m) {
  std::vector<double> w;
  for (const Atom& a : m.atoms()) w.push_back(a.c);
  std::sort(w.begin(), w.end());
  return w;
}

bool same_up_to_rotation(const DiscreteSphericalMeasure& a, const DiscreteSphericalMeasure& b, double tol) {
  if (a.size() != b.size()) return false;
  const auto ga = sorted_gram(a), gb = sorted_gram(b);
  const auto wa = sorted_weights(a), wb = sorted_weights(b);
  for (std::size_t i = 0; i < ga.size(); ++i)
    if (std::abs(ga[i] - gb[i]) > tol) return false;
  for (std::size_t i = 0; i < wa.size(); ++i)
    if (std::abs(wa[i] - wb[i]) > tol) return false;
  return true;
}

Outcome john_pipeline() {
  Outcome o;
  std::vector<std::pair<std::string, HPolytope>> bodies;
  std::vector<DiscreteSphericalMeasure> expected;
  for (int n = 2; n <= 5; ++n) {
    bodies.emplace_back("cube n=" + std::to_string(n), cube_h(n));
    expected.push_back(canonical_measure(CanonicalKind::Cross, n));
  }
  bodies.emplace_back("polar triangle", polar_v(VPolytope(regular_simplex_vertices(2))));
  expected.push_back(canonical_measure(CanonicalKind::Simplex, 2));

  for (std::size_t i = 0; i < bodies.size(); ++i) {
    const auto& [name, body] = bodies[i];
    const int n = body.dim();
    const DiscreteSphericalMeasure direct = contact_decomposition(body);
    o.require(isotropy_check(direct).frobenius_defect <= 1e-6, name + ": defect too large");
    o.require(same_up_to_rotation(direct, expected[i], 1e-9), name + ": wrong contact measure");

    CounterStream rng(1111, i);
    Mat M(n, n);
    do {
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) M(r, c) = rng.normal();
    } while (std::abs(M.determinant()) < 0.3);
    const Vec shift = rng.normal_vector(n);
    const JohnResult jr = john_decomposition(affine_image(body, M, shift));
    const IsotropyReport iso = isotropy_check(jr.contacts);
    o.require(iso.frobenius_defect <= 1e-6 && iso.centroid_norm <= 1e-6, name + ": image contacts not isotropic");
    o.require(same_up_to_rotation(jr.contacts, expected[i], 1e-5), name + ": image contacts differ");
  }
  if (o.pass) o.detail = "cubes n=2..5 and the polar triangle, direct and after random affine maps";
  return o;
}

// ---------------------------------------------------------------- criterion 12

struct ToolRun {
  int code = -1;
  std::string out;
};

ToolRun tool(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(CGEOM_TOOL) + " " + args + " 2>/dev/null";
  ToolRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Outcome cli_contract() {
  Outcome o;
  const std::string d = std::string(CGEOM_TEST_DATA) + "/";
  struct Case {
    std::string args;
    int code;
  };
  const std::vector<Case> cases = {
      {"check-isotropic " + d + "cross3.json --tol 1e-9", 0},
      {"check-isotropic " + d + "simplex2.json", 0},
      {"check-isotropic " + d + "single_atom.json", 1},
      {"check-isotropic " + d + "truncated.json", 2},
      {"check-isotropic " + d + "bad_field.json", 2},
      {"check-isotropic " + d + "does_not_exist.json", 2},
      {"verify projection-cross " + d + "cross2.json " + d + "diag_line.json", 0},
      {"verify section-cube " + d + "cross3.json " + d + "e12_plane.json", 0},
      {"verify projection-simplex " + d + "simplex2.json " + d + "e1_line.json", 0},
      {"verify projection-simplex " + d + "fake_even.json " + d + "e1_line.json", 2},
      {"verify projection-cross " + d + "simplex2.json " + d + "e1_line.json", 2},
      {"verify projection-cross " + d + "cross2.json " + d + "dim_mismatch.json", 2},
      {"verify ball-barthe " + d + "nu120.json --f 4,1,1", 0},
      {"verify lyz-norm " + d + "nu120.json --f 1,0,0", 0},
      {"verify transport " + d + "simplex2.json " + d + "e1_line.json --lambda 2", 0},
      {"verify ell-section-simplex " + d + "simplex2.json", 0},
      {"verify projection-cross " + d + "cross3.json " + d + "skew_plane.json --format csv", 0},
      {"sweep projection-cross --n-min 2 --n-max 4 --count 10 --seed 1", 0},
      {"sweep section-cube --n-min 2 --n-max 3 --count 2 --seed 5 --k-policy all --format json", 0},
      {"sweep projection-cross --count 0", 2},
      {"sweep projection-cross --n-min 4 --n-max 2", 2},
      {"john " + d + "cube3_h.json", 0},
      {"john " + d + "triangle_polar.json --contacts-only", 0},
      {"john " + d + "unbounded.json", 1},
      {"john " + d + "truncated.json", 2},
      {"mean-width " + d + "ball2_ref.json --method reference", 0},
      {"mean-width " + d + "cross2_ref.json --method reference", 0},
      {"mean-width " + d + "cube2_v.json --samples 1000000", 0},
      {"mean-width " + d + "cube2_h.json --method complement", 0},
      {"mean-width " + d + "cube2_v.json --method reference", 2},
      {"no-such-command", 2},
      {"verify", 2},
  };
  int runs = 0;
  for (const Case& c : cases) {
    const ToolRun a = tool(c.args);
    const ToolRun b = tool(c.args, "CGEOM_THREADS=3");
    runs += 2;
    o.require(a.code == c.code, "'" + c.args + "' exited " + std::to_string(a.code) + ", expected " +
                                    std::to_string(c.code));
    o.require(a.code == b.code && a.out == b.out, "'" + c.args + "' is not reproducible");
    if (c.code == 2 && c.args.find("sweep") == std::string::npos) {
      // Input errors come with a machine-readable error object.
      bool ok = false;
      try {
        ok = parse_json_text(a.out).contains("error");
      } catch (const Error&) {
      }
      o.require(ok, "'" + c.args + "' printed no error object");
    }
  }

  // Spot-check report content.
  const Json eq = parse_json_text(tool("verify projection-cross " + d + "cross2.json " + d + "diag_line.json").out);
  o.require(eq["report"]["equality"] == true, "diagonal instance not flagged as equality");
  const Json ref = parse_json_text(tool("mean-width " + d + "cross2_ref.json --method reference").out);
  o.require(std::abs(ref["value"].get<double>() - 4 * std::sqrt(2.0) / std::numbers::pi) <= 1e-10,
            "cross reference value");
  const Json cube = parse_json_text(tool("mean-width " + d + "cube2_v.json --samples 1000000").out);
  o.require(std::abs(cube["value"].get<double>() - 8 / std::numbers::pi) <= 3 * cube["stderr"].get<double>(),
            "cube Monte Carlo");
  const ToolRun one = tool("check-isotropic " + d + "single_atom.json");
  o.require(std::abs(parse_json_text(one.out)["report"]["frobenius_defect"].get<double>() - std::sqrt(2.0)) <= 1e-15,
            "single-atom defect");

  // John contacts pipe straight into verify.
  const ToolRun piped = tool("john " + d + "cube3_h.json --contacts-only | " + std::string(CGEOM_TOOL) +
                             " verify section-cube - " + d + "e12_plane.json");
  o.require(piped.code == 0, "john | verify pipeline exited " + std::to_string(piped.code));
  runs += 5;

  if (o.pass) o.detail = std::to_string(cases.size()) + " corpus cases, " + std::to_string(runs) + " runs, reruns identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "ball mean width pins c_k", constant_pin},
      {2, "closed-form reference widths", closed_forms},
      {3, "l-norm and complement identities", identity_suite},
      {4, "section/projection duality", duality},
      {5, "cross and cube bounds on random even measures", cross_cube_sweep},
      {6, "simplex bound sweep and k=n equality", simplex_sweep},
      {7, "equality instances", equality_instances},
      {8, "Ball-Barthe inequality", ball_barthe},
      {9, "lifted isotropic embedding", embedding},
      {10, "Gaussian transport bound", transport},
      {11, "John contact pipeline", john_pipeline},
      {12, "command-line contract", cli_contract},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " -- " << o.detail
              << " [" << fmt(seconds_since(t0)) << " s]" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
