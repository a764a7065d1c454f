#include "cgeom/error.hpp"
#include "cgeom/lp.hpp"
#include "cgeom/nnls.hpp"
#include "cgeom/random.hpp"
#include "helpers.hpp"

using namespace cgeom;
using testutil::rows;
using testutil::vec;

TEST_SUITE("solvers") {

TEST_CASE("lp on the unit square") {
  const Mat A = rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  const Vec b = vec({1, 1, 1, 1});
  const LpResult r = lp_maximize(vec({1, 1}), A, b);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.x[1] == doctest::Approx(1.0));
}

TEST_CASE("lp detects unbounded and infeasible problems") {
  const Mat A = rows({{1, 0}, {-1, 0}, {0, 1}});
  CHECK(lp_maximize(vec({0, -1}), A, vec({1, 1, 1})).status == LpStatus::Unbounded);
  const Mat B = rows({{1, 0}, {-1, 0}});
  CHECK(lp_maximize(vec({1, 0}), B, vec({-1, -1})).status == LpStatus::Infeasible);
}

TEST_CASE("lp with negative offsets needs phase one") {
  // x >= 1, y >= 2, x + y <= 5: max x is 3.
  const Mat A = rows({{-1, 0}, {0, -1}, {1, 1}});
  const LpResult r = lp_maximize(vec({1, 0}), A, vec({-1, -2, 5}));
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("lp survives a degenerate vertex") {
  // Many constraints through the optimum (1,1).
  const Mat A = rows({{1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 2}, {-1, 0}, {0, -1}});
  const LpResult r = lp_maximize(vec({1, 1}), A, vec({1, 1, 2, 3, 3, 0, 0}));
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("nnls matches an unconstrained solution with positive entries") {
  const Mat A = rows({{1, 0}, {0, 1}, {1, 1}});
  const NnlsResult r = nnls(A, vec({1, 2, 3}));
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.x[1] == doctest::Approx(2.0));
  CHECK(r.residual_norm < 1e-12);
}

TEST_CASE("nnls clamps at zero") {
  const Mat A = rows({{1, 0}, {0, 1}});
  const NnlsResult r = nnls(A, vec({1, -2}));
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.x[1] == 0.0);
  CHECK(r.residual_norm == doctest::Approx(2.0));
}

TEST_CASE("counter streams are reproducible and independent of order") {
  CounterStream a(7, 3), b(7, 3), c(7, 4);
  const double x = a.normal();
  CHECK(x == b.normal());
  CHECK(x != c.normal());
  CHECK(derive_key(1, 2) == derive_key(1, 2));
  CHECK(derive_key(1, 2) != derive_key(2, 1));
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK((u > 0.0 && u < 1.0));
    const int k = a.uniform_int(2, 4);
    CHECK((k >= 2 && k <= 4));
  }
}

}
