#pragma once

#include "kisin.hpp"
#include "parallel.hpp"
#include "polygon.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kisinhn {

struct EnumerationOptions {
  int seed_precision = 0;    // 0: default floor(h/(p-1)) + 3
  int target_precision = 0;  // 0: 4 * seed precision (clipped to what B supports)
  bool cross_check = false;  // rerun with seed precision + 2 and compare
  int jobs = 1;
  long budget = 4'000'000;  // seed-tree nodes
  int max_iters = 64;
};

// Phi-stable saturated sublattice, in the coordinates of the lattice it was found in.
struct PhiStableSubspace {
  LatticeBasis basis;
  int verified_prec = 0;
};

struct EnumerationReport {
  std::vector<PhiStableSubspace> subspaces;
  int seed_precision = 0;
  int target_precision = 0;
  int contraction = 0;  // h: largest elementary divisor of the integralized Frobenius
  long nodes = 0;
  int seeds = 0;
  int divergent = 0;
};

namespace detail {

inline SeriesMatrix with_new_prec(const SeriesMatrix& N, int prec) {
  return N.map([prec](const LaurentSeries& s) {
    return LaurentSeries::from_coeffs(s.ctx(), s.is_zero() ? 0 : s.val(), s.coeffs(), prec);
  });
}

inline std::string basis_key(const LatticeBasis& b) {
  std::string k;
  for (int r : b.pivot_rows) k += std::to_string(r) + ",";
  return k + "|" + b.basis.to_string();
}

// Canonical saturation of B phi(N), kept to precision T.
inline LatticeBasis psi_step(const SeriesMatrix& Bi, const SeriesMatrix& N, int T, int h) {
  SeriesMatrix v = (Bi * N.frobenius()).with_prec(T + h + 2);
  LatticeBasis s = saturate(v);
  s.basis = s.basis.with_prec(T);
  return s;
}

// Level-by-level growth of saturated rank-d summands N mod u^k with B phi(N) in N mod u^k.
inline std::vector<SeriesMatrix> grow_seeds(const SeriesMatrix& Bi, int d, int levels, long budget, long& nodes) {
  Field f = Bi.ctx();
  int n = Bi.rows(), q = f->q();
  FqMatrix B0 = Bi.reduction();
  struct Node {
    SeriesMatrix N;
    std::vector<int> piv;
  };
  std::vector<Node> cur;
  for (const FqMatrix& R : all_subspaces(f, n, d)) {
    FqMatrix N0 = R.transpose();
    if (R.stacked((B0 * N0).transpose()).rank() != d) continue;
    std::vector<int> piv;
    for (int i = 0; i < d; ++i)
      for (int c = 0; c < n; ++c)
        if (R(i, c)) {
          piv.push_back(c);
          break;
        }
    cur.push_back({SeriesMatrix::from_fq(N0, 1), piv});
  }
  nodes += static_cast<long>(cur.size());
  for (int k = 1; k < levels; ++k) {
    std::vector<Node> next;
    for (const Node& node : cur) {
      SeriesMatrix Nx = with_new_prec(node.N, k + 1);
      SeriesMatrix v = Bi * Nx.frobenius();
      if (v.prec() < k + 1) throw InsufficientPrecision("Frobenius matrix too imprecise for seed level " + std::to_string(k + 1));
      SeriesMatrix vp = v.select_rows(node.piv);
      SeriesMatrix R = v - Nx * vp;
      FqMatrix W0t = vp.reduction().transpose();
      std::vector<int> free_rows;
      for (int i = 0; i < n; ++i)
        if (std::find(node.piv.begin(), node.piv.end(), i) == node.piv.end()) free_rows.push_back(i);
      // Solve W0^T x_i = r_i for each free row.
      FqMatrix ker = W0t.nullspace();
      std::vector<std::vector<Fq>> particular;
      bool ok = true;
      for (int i : free_rows) {
        FqMatrix aug(f, d, d + 1);
        for (int a = 0; a < d; ++a) {
          for (int b = 0; b < d; ++b) aug(a, b) = W0t(a, b);
          const auto& s = R(i, a);
          if (!s.is_zero() && s.val() < k) throw Error("seed tree lost its invariant");
          aug(a, d) = s.coeff(k);
        }
        auto pc = aug.rref();
        if (!pc.empty() && pc.back() == d) {
          ok = false;
          break;
        }
        std::vector<Fq> x(d, 0);
        for (size_t r = 0; r < pc.size(); ++r) x[pc[r]] = aug(static_cast<int>(r), d);
        particular.push_back(x);
      }
      if (!ok) continue;
      int kdim = ker.cols, slots = kdim * static_cast<int>(free_rows.size());
      long count = 1;
      for (int t = 0; t < slots; ++t) count *= q;
      nodes += count;
      if (nodes > budget) throw BudgetExceeded("seed tree exceeded " + std::to_string(budget) + " nodes");
      for (long code = 0; code < count; ++code) {
        SeriesMatrix child = Nx;
        long c = code;
        for (size_t fi = 0; fi < free_rows.size(); ++fi) {
          std::vector<Fq> x = particular[fi];
          for (int t = 0; t < kdim; ++t) {
            Fq lam = static_cast<Fq>(c % q);
            c /= q;
            if (!lam) continue;
            for (int a = 0; a < d; ++a) x[a] = f->add(x[a], f->mul(lam, ker(a, t)));
          }
          for (int a = 0; a < d; ++a)
            if (x[a]) child.at(free_rows[fi], a) = child(free_rows[fi], a) + LaurentSeries::monomial(f, x[a], k, k + 1);
        }
        next.push_back({child, node.piv});
      }
    }
    cur = std::move(next);
  }
  std::vector<SeriesMatrix> out;
  for (auto& nd : cur) out.push_back(nd.N);
  return out;
}

}  // namespace detail

// Largest elementary divisor of B scaled by a power of u to min valuation 0.
inline int contraction_constant(const SeriesMatrix& B) {
  SeriesMatrix Bi = B.shifted(-B.min_val());
  return elementary_divisors(Bi).back();
}

// All d-dimensional phi-stable subspaces of the generic fiber of the lattice with
// Frobenius B, as canonical saturated bases in lattice coordinates.
inline EnumerationReport enumerate_stable(const SeriesMatrix& B, int d, const EnumerationOptions& opts = {}) {
  int n = B.rows();
  Field f = B.ctx();
  int p = f->p();
  if (d < 0 || d > n) throw DimensionMismatch("subspace dimension out of range");
  EnumerationReport rep;
  SeriesMatrix Bi = B.shifted(-B.min_val());
  int h = n ? elementary_divisors(Bi).back() : 0;
  rep.contraction = h;
  int N0 = opts.seed_precision ? opts.seed_precision : h / (p - 1) + 3;
  if (N0 * (p - 1) <= h)
    throw SeedPrecisionTooSmall("seed precision " + std::to_string(N0) + " must exceed " + std::to_string(h) + "/(p-1)");
  int T = std::max(4 * N0, opts.target_precision);
  if (!Bi.is_exact()) T = std::min(T, Bi.prec() - h);
  if (T <= N0)
    throw InsufficientPrecision("Frobenius known mod u^" + std::to_string(Bi.prec()) + " cannot certify subspaces beyond the seed precision");
  rep.seed_precision = N0;
  rep.target_precision = T;
  if (d == 0 || d == n) {
    PhiStableSubspace s;
    s.basis = canonical_basis(d ? SeriesMatrix::identity(f, n, T) : SeriesMatrix(f, n, 0, T));
    s.verified_prec = T;
    rep.subspaces.push_back(s);
    return rep;
  }
  auto seeds = detail::grow_seeds(Bi, d, N0, opts.budget, rep.nodes);
  rep.seeds = static_cast<int>(seeds.size());
  auto results = parallel_map<std::optional<LatticeBasis>>(opts.jobs, rep.seeds, [&](int i) -> std::optional<LatticeBasis> {
    SeriesMatrix N = seeds[i];
    try {
      for (int it = 0; it < opts.max_iters; ++it) {
        LatticeBasis s = detail::psi_step(Bi, N, T, h);
        if (N.prec() >= T && s.basis.prec() >= T && s.basis.agrees(N)) return s;
        N = s.basis;
      }
    } catch (const InsufficientPrecision&) {
    }
    return std::nullopt;
  });
  std::map<std::string, LatticeBasis> found;
  for (auto& r : results) {
    if (!r) {
      ++rep.divergent;
      continue;
    }
    found.emplace(detail::basis_key(*r), *r);
  }
  for (auto& [k, b] : found) rep.subspaces.push_back({b, T});
  if (opts.cross_check) {
    EnumerationOptions o2 = opts;
    o2.seed_precision = N0 + 2;
    o2.cross_check = false;
    o2.target_precision = T;
    auto again = enumerate_stable(B, d, o2);
    bool same = again.subspaces.size() == rep.subspaces.size();
    for (size_t i = 0; same && i < again.subspaces.size(); ++i)
      same = again.subspaces[i].basis.pivot_rows == rep.subspaces[i].basis.pivot_rows &&
             again.subspaces[i].basis.basis.agrees(rep.subspaces[i].basis.basis);
    if (!same) throw PropertyFailure("cross-check with a finer seed precision changed the subspace set");
  }
  return rep;
}

// Stable subspaces of the module itself (coordinates of the standard lattice).
inline EnumerationReport enumerate_phi_stable_subspaces(const EtalePhiModule& m, int d, const EnumerationOptions& opts = {}) {
  return enumerate_stable(m.A, d, opts);
}

// Subspace in the ambient coordinates of the module: g N.
inline SeriesMatrix ambient_basis(const KisinLattice& l, const LatticeBasis& N) {
  return canonical_basis(l.basis() * N.basis).basis;
}

struct CloudPoint {
  int rank = 0;
  Rational deg;
  LatticeBasis witness;  // saturated, lattice coordinates
};

inline Rational sub_degree(const KisinLattice& l, const LatticeBasis& N) {
  if (N.rank() == 0) return 0;
  return Rational(val_det(restricted_frobenius(l.frobenius(), N)), l.e());
}

// Every strict subobject S cap M with its normalized (rank, degree).
inline std::vector<CloudPoint> subobject_cloud(const KisinLattice& l, const EnumerationOptions& opts = {}) {
  std::vector<CloudPoint> out;
  int n = l.rank();
  for (int d = 0; d <= n; ++d) {
    auto rep = enumerate_stable(l.frobenius(), d, opts);
    for (auto& s : rep.subspaces) {
      Rational deg = d == n ? l.degree() : sub_degree(l, s.basis);
      out.push_back({d, deg, s.basis});
    }
  }
  return out;
}

inline Polygon cloud_hull(const std::vector<CloudPoint>& cloud) {
  std::vector<Point> pts;
  for (auto& c : cloud) pts.emplace_back(c.rank, c.deg);
  return Polygon::lower_hull(pts);
}

// Normalized polygon: from (0,0) to (n, deg).
inline Polygon hn_polygon_normalized(const KisinLattice& l, const EnumerationOptions& opts = {}) {
  return cloud_hull(subobject_cloud(l, opts));
}

// Polygon counting rank as length over the residue field: axes scaled by r = [F_q : F_p].
inline Polygon hn_polygon(const KisinLattice& l, const EnumerationOptions& opts = {}) {
  int r = l.ctx()->r();
  return hn_polygon_normalized(l, opts).scaled(r, r);
}

struct HNFiltration {
  Polygon polygon;                  // normalized
  std::vector<LatticeBasis> steps;  // nonzero steps, last is the whole lattice
  std::vector<Rational> slopes;     // slopes of the graded pieces
};

inline HNFiltration hn_filtration_from_cloud(const KisinLattice& l, const std::vector<CloudPoint>& cloud) {
  HNFiltration out;
  out.polygon = cloud_hull(cloud);
  out.slopes = out.polygon.slopes();
  const auto& vs = out.polygon.vertices();
  for (size_t i = 1; i < vs.size(); ++i) {
    std::vector<const CloudPoint*> wit;
    for (auto& c : cloud)
      if (Rational(c.rank) == vs[i].first && c.deg == vs[i].second) wit.push_back(&c);
    if (wit.size() != 1)
      throw AmbiguousWitness(std::to_string(wit.size()) + " subobjects realize the hull vertex (" + to_string(vs[i].first) +
                             "," + to_string(vs[i].second) + ")");
    out.steps.push_back(wit[0]->witness);
  }
  for (size_t i = 1; i < out.steps.size(); ++i)
    if (!out.steps[i].contains_all(out.steps[i - 1].basis))
      throw FiltrationWitnessNotNested("HN witnesses " + std::to_string(i - 1) + " and " + std::to_string(i) + " are not nested");
  (void)l;
  return out;
}

inline HNFiltration hn_filtration(const KisinLattice& l, const EnumerationOptions& opts = {}) {
  return hn_filtration_from_cloud(l, subobject_cloud(l, opts));
}

// Graded pieces of the filtration as Kisin lattices.
inline std::vector<KisinLattice> hn_gradeds(const KisinLattice& l, const HNFiltration& h) {
  std::vector<KisinLattice> out;
  LatticeBasis prev = canonical_basis(SeriesMatrix(l.ctx(), l.rank(), 0));
  for (auto& s : h.steps) {
    out.push_back(subquotient(l, prev, s));
    prev = s;
  }
  return out;
}

inline bool is_semistable(const Polygon& P) { return P.segments() <= 1; }
inline bool is_semistable(const KisinLattice& l, const EnumerationOptions& opts = {}) {
  return is_semistable(hn_polygon_normalized(l, opts));
}

// Length of the initial slope-0 segment of the normalized polygon.
inline int etale_rank(const KisinLattice& l, const Polygon& P) {
  if (!l.effective()) throw NotEffective("etale rank needs an effective lattice");
  auto s = P.slopes();
  if (s.empty() || s[0] != 0) return 0;
  return static_cast<int>(num(P.vertices()[1].first));
}
inline int etale_rank(const KisinLattice& l, const EnumerationOptions& opts = {}) {
  if (!l.effective()) throw NotEffective("etale rank needs an effective lattice");
  return etale_rank(l, hn_polygon_normalized(l, opts));
}

}  // namespace kisinhn
