#pragma once

// Instability of subspaces S of M (x) N over F_q, and the optimal destabilizing filtration pair.
//
// A pair of bases (b_a) of M and (c_b) of N splits a family of filtration pairs, one for each weight
// vector (w, v). For those, deg(S) = max over nonzero Pluecker coordinates K of S (in the basis
// b_a (x) c_b) of the weight sum over K, so mu(M (x) N) - mu(S) = min_K <a_K, (w, v)> with
// a_K = (1/m - rows_a(K)/d, 1/n - cols_b(K)/d). The best ratio against |(w, v)| on this pair of
// bases is the norm of the minimum-norm point of conv{a_K}, which is also the maximizing direction.

#include "filtered.hpp"
#include "parallel.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace kisinhn {

using RVec = std::vector<Rational>;

namespace detail {

inline Rational dot(const RVec& x, const RVec& y) {
  Rational s = 0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// Solves a square rational system; nullopt when singular.
inline std::optional<RVec> solve_rational(std::vector<RVec> a, RVec b) {
  int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (a[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return std::nullopt;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational t = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= t * a[c][k];
      b[r] -= t * b[c];
    }
  }
  for (int i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

// Point of minimal norm in the affine hull of pts[idx], as affine coefficients.
inline RVec affine_min_norm(const std::vector<RVec>& pts, const std::vector<int>& idx) {
  int k = static_cast<int>(idx.size());
  std::vector<RVec> sys(k + 1, RVec(k + 1));
  RVec rhs(k + 1);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) sys[i][j] = dot(pts[idx[i]], pts[idx[j]]);
    sys[i][k] = 1;
    sys[k][i] = 1;
  }
  rhs[k] = 1;
  auto sol = solve_rational(sys, rhs);
  if (!sol) throw Error("min-norm search met an affinely dependent corral");
  sol->pop_back();
  return *sol;
}

inline RVec combine(const std::vector<RVec>& pts, const std::vector<int>& idx, const RVec& coef) {
  RVec x(pts[0].size());
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t c = 0; c < x.size(); ++c) x[c] += coef[i] * pts[idx[i]][c];
  return x;
}

}  // namespace detail

// Minimum-norm point of the convex hull of finitely many rational points (Wolfe), exact.
inline RVec min_norm_point(const std::vector<RVec>& pts) {
  if (pts.empty()) throw Error("min-norm point of an empty set");
  int start = 0;
  for (int i = 1; i < static_cast<int>(pts.size()); ++i)
    if (detail::dot(pts[i], pts[i]) < detail::dot(pts[start], pts[start])) start = i;
  std::vector<int> corral{start};
  RVec lam{1};
  RVec x = pts[start];
  for (int major = 0; major < 10000; ++major) {
    Rational xx = detail::dot(x, x);
    int j = 0;
    Rational best = detail::dot(x, pts[0]);
    for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
      Rational v = detail::dot(x, pts[i]);
      if (v < best) best = v, j = i;
    }
    if (xx <= best) return x;
    if (std::find(corral.begin(), corral.end(), j) != corral.end()) return x;
    corral.push_back(j);
    lam.push_back(0);
    for (;;) {
      RVec mu = detail::affine_min_norm(pts, corral);
      bool interior = std::all_of(mu.begin(), mu.end(), [](const Rational& t) { return t > 0; });
      if (interior) {
        lam = mu;
        x = detail::combine(pts, corral, lam);
        break;
      }
      std::optional<Rational> theta;
      for (size_t i = 0; i < mu.size(); ++i)
        if (mu[i] <= 0) {
          Rational t = lam[i] / (lam[i] - mu[i]);
          if (!theta || t < *theta) theta = t;
        }
      for (size_t i = 0; i < mu.size(); ++i) lam[i] = *theta * mu[i] + (1 - *theta) * lam[i];
      std::vector<int> keep_idx;
      RVec keep_lam;
      for (size_t i = 0; i < lam.size(); ++i)
        if (lam[i] > 0) keep_idx.push_back(corral[i]), keep_lam.push_back(lam[i]);
      corral = keep_idx;
      lam = keep_lam;
      x = detail::combine(pts, corral, lam);
    }
  }
  throw Error("min-norm search did not converge");
}

// Primitive integral multiple of a nonzero rational vector.
inline RVec primitive_integral(const RVec& x) {
  BigInt l = 1, g = 0;
  for (auto& t : x) l = boost::multiprecision::lcm(l, den(t));
  RVec out;
  for (auto& t : x) {
    BigInt v = num(t * l);
    g = boost::multiprecision::gcd(g, v < 0 ? BigInt(-v) : v);
    out.emplace_back(v);
  }
  if (g > 1)
    for (auto& t : out) t /= g;
  return out;
}

// ---- Tori ----

struct TorusPair {
  FqMatrix bm, bn;  // rows: bases of M and N
};

// Bases of F_q^k up to ordering and scaling of the vectors.
inline std::vector<FqMatrix> unordered_bases(Field f, int k) {
  auto pts = projective_points(f, k);
  std::vector<FqMatrix> out;
  std::vector<int> pick;
  auto rec = [&](auto&& self, int start, FqMatrix cur) -> void {
    if (cur.rows == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < static_cast<int>(pts.size()); ++i) {
      FqMatrix row(f, 1, k);
      for (int c = 0; c < k; ++c) row(0, c) = pts[i][c];
      FqMatrix next = cur.stacked(row);
      if (next.rank() == next.rows) self(self, i + 1, next);
    }
  };
  rec(rec, 0, FqMatrix(f, 0, k));
  return out;
}

struct KempfOptions {
  int jobs = 1;
  long budget = 200'000'000;  // tori times Pluecker subsets
};

namespace detail {

inline long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Points a_K (scaled by m n d to be integral), deduplicated and sorted.
inline std::vector<RVec> weight_polytope(const FqMatrix& S, int m, int n, const TorusPair& t) {
  int d = S.rows, mn = m * n;
  FqMatrix X = S * kron_rows(t.bm, t.bn).inverse();
  std::set<std::vector<int>> seen;
  std::vector<int> cols;
  auto rec = [&](auto&& self, int start, FqMatrix cur) -> void {
    if (static_cast<int>(cols.size()) == d) {
      std::vector<int> key(m + n, 0);
      for (int k : cols) ++key[k / n], ++key[m + k % n];
      seen.insert(key);
      return;
    }
    for (int k = start; k <= mn - (d - static_cast<int>(cols.size())); ++k) {
      FqMatrix col(S.ctx, 1, d);
      for (int r = 0; r < d; ++r) col(0, r) = X(r, k);
      FqMatrix next = cur.stacked(col);
      if (next.rank() != next.rows) continue;  // independent columns only
      cols.push_back(k);
      self(self, k + 1, next);
      cols.pop_back();
    }
  };
  rec(rec, 0, FqMatrix(S.ctx, 0, d));
  std::vector<RVec> pts;
  for (auto& key : seen) {
    RVec a;
    for (int i = 0; i < m; ++i) a.emplace_back(n * d - m * n * key[i]);
    for (int j = 0; j < n; ++j) a.emplace_back(m * d - m * n * key[m + j]);
    pts.push_back(a);
  }
  return pts;
}

struct TorusOptimum {
  RVec point;  // scaled min-norm point
  Rational value2;
};

inline TorusOptimum torus_optimum(const FqMatrix& S, int m, int n, const TorusPair& t) {
  auto pts = weight_polytope(S, m, n, t);
  RVec p = min_norm_point(pts);
  Rational scale = m * n * S.rows;
  return {p, detail::dot(p, p) / (scale * scale)};
}

struct Setup {
  FqMatrix S;
  std::vector<TorusPair> tori;
};

inline Setup setup(const FqMatrix& S, int m, int n, const KempfOptions& o) {
  if (S.cols != m * n) throw DimensionMismatch("subspace does not live in M (x) N");
  Setup s;
  s.S = row_space(S);
  auto bm = unordered_bases(S.ctx, m), bn = unordered_bases(S.ctx, n);
  long work = static_cast<long>(bm.size()) * static_cast<long>(bn.size()) * binomial(m * n, s.S.rows);
  if (work > o.budget) throw ScaleTooLarge("Kempf search needs " + std::to_string(work) + " Pluecker evaluations");
  for (auto& x : bm)
    for (auto& y : bn) s.tori.push_back({x, y});
  return s;
}

}  // namespace detail

inline bool is_semistable_subspace(const FqMatrix& S, int m, int n, const KempfOptions& o = {}) {
  auto s = detail::setup(S, m, n, o);
  int d = s.S.rows;
  if (d == 0 || d == m * n) return true;
  auto v = parallel_map<int>(o.jobs, static_cast<int>(s.tori.size()), [&](int i) {
    return detail::torus_optimum(s.S, m, n, s.tori[i]).value2 > 0 ? 1 : 0;
  });
  return std::count(v.begin(), v.end(), 1) == 0;
}

struct KempfResult {
  bool stable = false;
  FiltrationPair pair;  // primitive integral weights
  Rational value2;      // f(S, alpha)^2 of the maximizer
  int witnesses = 0;    // base pairs attaining the maximum
};

inline FiltrationPair pair_from_weights(const TorusPair& t, const RVec& w, int m) {
  RVec prim = primitive_integral(w);
  return {FilteredSpace(t.bm, RVec(prim.begin(), prim.begin() + m)), FilteredSpace(t.bn, RVec(prim.begin() + m, prim.end()))};
}

inline KempfResult kempf_filtration(const FqMatrix& S, int m, int n, const KempfOptions& o = {}) {
  auto s = detail::setup(S, m, n, o);
  KempfResult out;
  int d = s.S.rows;
  if (d == 0 || d == m * n) {
    out.stable = true;
    return out;
  }
  auto opt = parallel_map<detail::TorusOptimum>(o.jobs, static_cast<int>(s.tori.size()),
                                                [&](int i) { return detail::torus_optimum(s.S, m, n, s.tori[i]); });
  Rational best = 0;
  for (auto& t : opt) best = std::max(best, t.value2);
  if (best == 0) {
    out.stable = true;
    return out;
  }
  out.value2 = best;
  std::vector<FiltrationPair> found;
  for (size_t i = 0; i < opt.size(); ++i) {
    if (opt[i].value2 != best) continue;
    ++out.witnesses;
    auto fp = pair_from_weights(s.tori[i], opt[i].point, m);
    if (std::none_of(found.begin(), found.end(), [&](const FiltrationPair& x) { return x.same(fp); })) found.push_back(fp);
  }
  if (found.size() > 1) throw AmbiguousMaximizer("two inequivalent filtrations attain the maximal instability");
  out.pair = found[0];
  return out;
}

inline KempfResult unstable_kempf(const FqMatrix& S, int m, int n, const KempfOptions& o = {}) {
  auto r = kempf_filtration(S, m, n, o);
  if (r.stable) throw NotUnstable("subspace is semistable");
  return r;
}

// gr_alpha(S) placed inside M (x) N through the splitting given by the adapted bases of alpha.
inline FqMatrix kempf_semisimplify(const FqMatrix& S, const FiltrationPair& a) {
  FilteredSpace t = a.tensor();
  FqMatrix T = t.basis(), Tinv = T.inverse();
  FqMatrix acc(S.ctx, 0, S.cols);
  for (auto& l : t.indices()) {
    FqMatrix piece = subspace_intersection(S, t.part(l));
    if (piece.rows == 0) continue;
    FqMatrix y = piece * Tinv;
    for (int r = 0; r < y.rows; ++r)
      for (int c = 0; c < y.cols; ++c)
        if (t.weights()[c] != l) y(r, c) = 0;
    acc = acc.stacked(y * T);
  }
  return row_space(acc);
}

inline Rational mu_total(const FiltrationPair& a) { return a.M.total() / a.M.dim() + a.N.total() / a.N.dim(); }

}  // namespace kisinhn
