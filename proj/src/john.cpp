#include "cgeom/john.hpp"

#include "cgeom/error.hpp"
#include "cgeom/lp.hpp"
#include "cgeom/nnls.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace cgeom {

Ellipsoid Ellipsoid::from_factor(Mat factor, Vec center) {
  Ellipsoid e;
  e.factor = 0.5 * (factor + factor.transpose());
  e.shape = e.factor * e.factor;
  e.shape = 0.5 * (e.shape + e.shape.transpose());
  e.center = std::move(center);
  return e;
}

AffineMap AffineMap::inverse() const {
  AffineMap inv;
  inv.linear = linear.inverse();
  inv.shift = -inv.linear * shift;
  return inv;
}

namespace {

// Symmetric basis S_pq, p <= q, in vech order.
struct SymBasis {
  int n;
  std::vector<std::pair<int, int>> idx;

  explicit SymBasis(int dim) : n(dim) {
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q) idx.emplace_back(p, q);
  }
  int size() const { return static_cast<int>(idx.size()); }

  Mat matrix(const Vec& v) const {
    Mat E = Mat::Zero(n, n);
    for (int a = 0; a < size(); ++a) {
      const auto [p, q] = idx[a];
      E(p, q) = v[a];
      E(q, p) = v[a];
    }
    return E;
  }

  Vec vech(const Mat& E) const {
    Vec v(size());
    for (int a = 0; a < size(); ++a) v[a] = E(idx[a].first, idx[a].second);
    return v;
  }

  // S_alpha x.
  Vec apply(int a, const Vec& x) const {
    const auto [p, q] = idx[a];
    Vec r = Vec::Zero(n);
    r[p] += x[q];
    if (p != q) r[q] += x[p];
    return r;
  }
};

struct Barrier {
  const Mat& A;
  const Vec& b;
  const SymBasis& S;
  double t;

  int n() const { return S.n; }
  int vars() const { return S.size() + n(); }

  // Objective, or +inf outside the domain.
  double value(const Vec& x) const {
    const Mat E = S.matrix(x.head(S.size()));
    const Vec d = x.tail(n());
    Eigen::LLT<Mat> llt(E);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const Mat L = llt.matrixL();
    double logdet = 0.0;
    for (int i = 0; i < n(); ++i) {
      if (!(L(i, i) > 0.0)) return std::numeric_limits<double>::infinity();
      logdet += 2.0 * std::log(L(i, i));
    }
    double f = -t * logdet;
    for (int i = 0; i < A.rows(); ++i) {
      const Vec a = A.row(i).transpose();
      const double g = b[i] - a.dot(d) - (E * a).norm();
      if (!(g > 0.0)) return std::numeric_limits<double>::infinity();
      f -= std::log(g);
    }
    return f;
  }

  void derivatives(const Vec& x, Vec& grad, Mat& hess) const {
    const int ns = S.size();
    const int nv = vars();
    const Mat E = S.matrix(x.head(ns));
    const Vec d = x.tail(n());
    const Mat Einv = E.inverse();
    grad = Vec::Zero(nv);
    hess = Mat::Zero(nv, nv);

    std::vector<Mat> ES(ns);
    for (int a = 0; a < ns; ++a) {
      Mat Sa = Mat::Zero(n(), n());
      const auto [p, q] = S.idx[a];
      Sa(p, q) = 1.0;
      Sa(q, p) = 1.0;
      ES[a] = Einv * Sa;
      grad[a] = -t * ES[a].trace();
    }
    for (int a = 0; a < ns; ++a) {
      for (int c = a; c < ns; ++c) {
        const double h = t * (ES[a].cwiseProduct(ES[c].transpose())).sum();
        hess(a, c) += h;
        if (c != a) hess(c, a) += h;
      }
    }

    Mat J(n(), nv);
    Vec q(nv);
    for (int i = 0; i < A.rows(); ++i) {
      const Vec a = A.row(i).transpose();
      const Vec y = E * a;
      const double ny = y.norm();
      const double g = b[i] - a.dot(d) - ny;
      const Vec yh = y / ny;
      J.setZero();
      for (int al = 0; al < ns; ++al) J.col(al) = S.apply(al, a);
      q.head(ns) = J.leftCols(ns).transpose() * yh;
      q.tail(n()) = a;
      grad += q / g;
      const Mat proj = Mat::Identity(n(), n()) - yh * yh.transpose();
      hess += q * q.transpose() / (g * g);
      hess.topLeftCorner(ns, ns) +=
          J.leftCols(ns).transpose() * proj * J.leftCols(ns) / (ny * g);
    }
  }
};

// Largest ball inside the body: max r  s.t.  <a_i, d> + r |a_i| <= b_i.
std::pair<Vec, double> chebyshev_center(const HPolytope& body) {
  const int n = body.dim();
  const int m = body.size();
  Mat A(m, n + 1);
  A.leftCols(n) = body.normals();
  A.col(n) = body.normals().rowwise().norm();
  Vec c = Vec::Zero(n + 1);
  c[n] = 1.0;
  const LpResult r = lp_maximize(c, A, body.offsets());
  if (r.status == LpStatus::Infeasible) throw Error(ErrorCode::Empty, "john_ellipsoid: body is empty");
  if (r.status == LpStatus::Unbounded) throw Error(ErrorCode::Unbounded, "john_ellipsoid: body is unbounded");
  return {r.x.head(n), r.value};
}

// {y : <a_i, E y + d> <= b_i}, and the map x -> E^{-1} (x - d).
std::pair<HPolytope, AffineMap> reposition(const HPolytope& body, const Ellipsoid& e) {
  const Mat normals = body.normals() * e.factor;
  const Vec offsets = body.offsets() - body.normals() * e.center;
  AffineMap map;
  map.linear = e.factor.inverse();
  map.shift = -map.linear * e.center;
  return {HPolytope(normals, offsets), map};
}

}  // namespace

Ellipsoid john_ellipsoid(const HPolytope& body, const JohnOptions& opts) {
  const int n = body.dim();
  const int m = body.size();
  if (body.normals().rowwise().norm().minCoeff() <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "john_ellipsoid: zero normal");
  }

  double extent = 0.0;
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    try {
      extent = std::max(extent, support_h(body, e) - (-support_h(body, -e)));
    } catch (const Error& err) {
      if (err.code() == ErrorCode::Infeasible) throw Error(ErrorCode::Empty, "john_ellipsoid: body is empty");
      throw;
    }
  }
  auto [d0, r0] = chebyshev_center(body);
  if (!(r0 > 1e-12 * std::max(1.0, extent))) {
    throw Error(ErrorCode::Empty, "john_ellipsoid: body has empty interior");
  }

  const SymBasis S(n);
  Vec x(S.size() + n);
  x.head(S.size()) = S.vech(0.5 * r0 * Mat::Identity(n, n));
  x.tail(n) = d0;

  Barrier bar{body.normals(), body.offsets(), S, 1.0};
  int newton = 0;
  Vec grad;
  Mat hess;
  while (true) {
    for (;;) {
      if (++newton > opts.max_newton) {
        throw Error(ErrorCode::NoConvergence, "john_ellipsoid: Newton iteration limit reached");
      }
      bar.derivatives(x, grad, hess);
      const Vec step = hess.ldlt().solve(-grad);
      const double decrement = -grad.dot(step);
      if (!std::isfinite(decrement)) {
        throw Error(ErrorCode::NoConvergence, "john_ellipsoid: non-finite Newton step");
      }
      if (decrement <= 1e-14 * std::max(1.0, bar.t)) break;
      const double f0 = bar.value(x);
      double s = 1.0;
      while (s > 1e-20) {
        const double f1 = bar.value(x + s * step);
        if (std::isfinite(f1) && f1 <= f0 - 0.25 * s * decrement) break;
        s *= 0.5;
      }
      if (s <= 1e-20) break;
      x += s * step;
      if (0.5 * decrement * s < 1e-15 * std::max(1.0, std::abs(f0))) break;
    }
    if (m / bar.t <= opts.gap_tol) break;
    bar.t *= 10.0;
  }

  const Mat E = S.matrix(x.head(S.size()));
  const Vec d = x.tail(n);
  for (int i = 0; i < m; ++i) {
    const Vec a = body.normals().row(i).transpose();
    const double slack = body.offsets()[i] - a.dot(d) - (E * a).norm();
    if (slack < -1e-8) {
      throw Error(ErrorCode::NoConvergence,
                  "john_ellipsoid: containment violated at constraint " + std::to_string(i));
    }
  }
  return Ellipsoid::from_factor(E, d);
}

std::pair<HPolytope, AffineMap> to_john_position(const HPolytope& body) {
  return reposition(body, john_ellipsoid(body));
}

DiscreteSphericalMeasure contact_decomposition(const HPolytope& body) {
  const int n = body.dim();
  std::vector<Vec> cand;
  for (int i = 0; i < body.size(); ++i) {
    const Vec a = body.normals().row(i).transpose();
    const double na = a.norm();
    if (!(na > 0.0)) continue;
    if (std::abs(body.offsets()[i] / na - 1.0) > kTangencyTol) continue;
    const Vec u = a / na;
    const bool dup = std::any_of(cand.begin(), cand.end(),
                                 [&](const Vec& v) { return (v - u).norm() <= kMergeTol; });
    if (!dup) cand.push_back(u);
  }
  if (cand.empty()) {
    throw Error(ErrorCode::DecompositionFailed, "contact_decomposition: no facet touches the unit ball");
  }

  const int m = static_cast<int>(cand.size());
  Mat A(n * n + n, m);
  Vec rhs = Vec::Zero(n * n + n);
  for (int j = 0; j < m; ++j) {
    const Mat uu = cand[j] * cand[j].transpose();
    A.col(j).head(n * n) = Eigen::Map<const Vec>(uu.data(), n * n);
    A.col(j).tail(n) = cand[j];
  }
  const Mat I = Mat::Identity(n, n);
  rhs.head(n * n) = Eigen::Map<const Vec>(I.data(), n * n);

  const NnlsResult sol = nnls(A, rhs);
  if (!(sol.residual_norm <= kDecompositionTol)) {
    throw Error(ErrorCode::DecompositionFailed,
                "contact_decomposition: residual " + std::to_string(sol.residual_norm) +
                    " exceeds 1e-6 (body not in John position?)");
  }
  std::vector<Atom> atoms;
  for (int j = 0; j < m; ++j) {
    if (sol.x[j] > 0.0) atoms.push_back({cand[j], sol.x[j]});
  }
  // Directions pairing up as +-u (1e-9) with weights agreeing to the
  // decomposition tolerance are snapped to an exactly even measure.
  std::vector<bool> done(atoms.size(), false);
  std::vector<Atom> sym;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (done[i]) continue;
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (!done[j] && (atoms[i].u + atoms[j].u).norm() <= kContactPairTol &&
          std::abs(atoms[i].c - atoms[j].c) <= kDecompositionTol) {
        const double c = 0.5 * (atoms[i].c + atoms[j].c);
        sym.push_back({atoms[i].u, c});
        sym.push_back({-atoms[i].u, c});
        done[i] = done[j] = true;
        break;
      }
    }
    if (!done[i]) return DiscreteSphericalMeasure(n, std::move(atoms));
  }
  return DiscreteSphericalMeasure(n, std::move(sym), true);
}

DiscreteSphericalMeasure loewner_contacts(const VPolytope& body) {
  return contact_decomposition(polar_v(body));
}

JohnResult john_decomposition(const HPolytope& body) {
  const Ellipsoid e = john_ellipsoid(body);
  auto [positioned, map] = reposition(body, e);
  DiscreteSphericalMeasure contacts = contact_decomposition(positioned);
  return JohnResult{e, std::move(map), std::move(positioned), std::move(contacts)};
}

}  // namespace cgeom
