#pragma once

// Finite point sets of GL_n Kisin varieties: lattices of bounded Hodge type inside a fixed
// etale phi-module, their HN strata, and the contact-set invariants of the strata.
//
// Hodge types are increasing integer vectors nu = (a_1 <= ... <= a_n), P_nu the partial-sum polygon.
// The contact set J(P) = {d in 1..n-1 : g P(d) = P_nu(d)} is stored. Pairing a dominant weight with
// the top d entries of a cocharacter corresponds to contact at n - d; since both polygons have the
// same total, the family of all contact sets is the same under either indexing.

#include "parallel.hpp"
#include "subobjects.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace kisinhn {

using HodgeType = std::vector<int>;

inline void require_hodge_type(const HodgeType& nu) {
  if (nu.empty()) throw Error("empty Hodge type");
  if (!std::is_sorted(nu.begin(), nu.end())) throw Error("Hodge type must be weakly increasing");
}

// nu' <= nu: partial sums of nu' dominate those of nu, equal totals.
inline bool hodge_dominance(const HodgeType& nu1, const HodgeType& nu) {
  if (nu1.size() != nu.size()) throw LengthMismatch("Hodge types of different lengths");
  long s1 = 0, s = 0;
  for (size_t i = 0; i < nu.size(); ++i) {
    s1 += nu1[i], s += nu[i];
    if (s1 < s) return false;
  }
  return s1 == s;
}

// lambda' precedes lambda: lambda' - lambda is a nonnegative combination of e_i - e_{i+1}
// after sorting both increasingly.
inline bool prec_order(std::vector<Rational> l1, std::vector<Rational> l) {
  if (l1.size() != l.size()) throw LengthMismatch("cocharacters of different lengths");
  std::sort(l1.begin(), l1.end());
  std::sort(l.begin(), l.end());
  Rational partial = 0;
  for (size_t i = 0; i < l.size(); ++i) {
    partial += l1[i] - l[i];
    if (partial < 0) return false;
  }
  return partial == 0;
}

// d in J iff g P(d) = P_nu(d); NotDominating unless g P lies above P_nu with the same endpoint.
inline std::set<int> component_invariant(const Polygon& P, const HodgeType& nu, int g = 1) {
  Polygon hodge = hodge_polygon(nu);
  Polygon gp = P.scaled(1, g);
  if (gp.endpoint() != hodge.endpoint() || !gp.lies_above(hodge))
    throw NotDominating("polygon " + gp.to_string() + " does not dominate " + hodge.to_string());
  std::set<int> J;
  for (int d = 1; d < static_cast<int>(nu.size()); ++d)
    if (gp(d) == hodge(d)) J.insert(d);
  return J;
}

inline std::string format_set(const std::set<int>& J) {
  std::string s = "{";
  for (int d : J) s += (s.size() > 1 ? "," : "") + std::to_string(d);
  return s + "}";
}

// ---- Candidate polygons ----

struct CandidatePolygon {
  Polygon polygon;
  std::set<int> J;
};

// Convex polygons with integer vertices from (0,0) to (n, sum nu), above P_nu, slopes in [a_1, a_n].
inline std::vector<CandidatePolygon> enumerate_candidate_polygons(const HodgeType& nu) {
  require_hodge_type(nu);
  int n = static_cast<int>(nu.size());
  long total = std::accumulate(nu.begin(), nu.end(), 0L);
  std::vector<long> hodge(n + 1, 0);
  for (int i = 0; i < n; ++i) hodge[i + 1] = hodge[i] + nu[i];
  std::vector<CandidatePolygon> out;
  std::vector<Point> verts{{0, 0}};
  auto rec = [&](auto&& self, int x, long y, std::optional<Rational> last) -> void {
    for (int x2 = x + 1; x2 <= n; ++x2) {
      // y2 ranges between P_nu(x2) and the chord to the endpoint.
      long hi = x2 == n ? total : static_cast<long>(floor_div(Rational(total * x2, n)));
      long lo = x2 == n ? total : hodge[x2];
      for (long y2 = lo; y2 <= hi; ++y2) {
        Rational s(y2 - y, x2 - x);
        if (last && s <= *last) continue;
        if (s < nu.front() || s > nu.back()) continue;
        bool above = true;
        for (int t = x + 1; t < x2 && above; ++t) above = Rational(y) + s * (t - x) >= hodge[t];
        if (!above) continue;
        verts.emplace_back(x2, y2);
        if (x2 == n) {
          auto P = Polygon::from_vertices(verts);
          out.push_back({P, component_invariant(P, nu)});
        } else {
          self(self, x2, y2, s);
        }
        verts.pop_back();
      }
    }
  };
  rec(rec, 0, 0, std::nullopt);
  std::sort(out.begin(), out.end(), [](const CandidatePolygon& a, const CandidatePolygon& b) { return a.polygon < b.polygon; });
  return out;
}

// Distinct contact sets in a fixed order; index = color class.
inline std::vector<std::set<int>> color_classes(const std::vector<CandidatePolygon>& cands) {
  std::set<std::set<int>> s;
  for (auto& c : cands) s.insert(c.J);
  return {s.begin(), s.end()};
}

// ---- Point enumeration ----

struct VarietyOptions {
  int window = -1;  // -1: default window
  int extension = 1;
  int jobs = 1;
  long budget = 2'000'000;
  EnumerationOptions enumeration;
};

struct VarietyEnumeration {
  EtalePhiModule module;
  HodgeType nu;
  int window = 0;
  int extension = 1;
  std::vector<KisinLattice> points;
  std::vector<Polygon> polygons;             // normalized HN polygon per point
  std::map<Polygon, std::vector<int>> strata;
  std::vector<std::set<int>> J;              // contact set per point
  std::string completeness;                  // "certified", "window-limited" or "infeasible"
  std::string reason;                        // why the set is empty, if it is forced to be
  long scanned = 0;
};

// Largest minus smallest elementary divisor of the Frobenius of the standard lattice.
inline int frobenius_spread(const EtalePhiModule& m) {
  auto d = elementary_divisors(m.A);
  return d.back() - d.front();
}

inline int default_window(const EtalePhiModule& m, const HodgeType& nu) {
  return std::max(std::abs(nu.front()), std::abs(nu.back())) + frobenius_spread(m) + 1;
}

// Required val det g, or nullopt when (sum nu - val det A)/(p - 1) is not an integer.
inline std::optional<int> determinant_constraint(const EtalePhiModule& m, const HodgeType& nu) {
  long total = std::accumulate(nu.begin(), nu.end(), 0L);
  long diff = total - val_det(m.A);
  if (diff % (m.p() - 1) != 0) return std::nullopt;
  return static_cast<int>(diff / (m.p() - 1));
}

namespace detail {

// Upper triangular Hermite forms g with diagonal u^{k_i}, |k_i| <= W, sum k_i = D, and entries
// (i < j) reduced mod u^{k_i} with exponents >= -W.
inline std::vector<SeriesMatrix> window_hermite_forms(Field f, int n, int W, int D, long budget) {
  std::vector<SeriesMatrix> out;
  std::vector<int> k(n);
  auto diag = [&](auto&& self, int i, int left) -> void {
    if (i == n - 1) {
      if (left < -W || left > W) return;
      k[i] = left;
      // Off-diagonal coefficient slots.
      std::vector<std::pair<std::pair<int, int>, int>> slots;  // ((row, col), exponent)
      for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c)
          for (int t = -W; t < k[r]; ++t) slots.push_back({{r, c}, t});
      long count = 1;
      for (size_t s = 0; s < slots.size(); ++s) {
        count *= f->q();
        if (count + static_cast<long>(out.size()) > budget) throw BudgetExceeded("window enumeration exceeds budget");
      }
      for (long code = 0; code < count; ++code) {
        long x = code;
        SeriesMatrix g(f, n, n);
        std::map<std::pair<int, int>, std::vector<Fq>> entries;
        for (auto& [rc, t] : slots) {
          auto& v = entries[rc];
          if (v.empty()) v.assign(k[rc.first] + W, 0);
          v[t + W] = static_cast<Fq>(x % f->q());
          x /= f->q();
        }
        for (int r = 0; r < n; ++r) g.set(r, r, LaurentSeries::monomial(f, 1, k[r]));
        for (auto& [rc, v] : entries) g.set(rc.first, rc.second, LaurentSeries::from_coeffs(f, -W, v, LaurentSeries::kExact));
        out.push_back(g);
      }
      return;
    }
    for (int v = -W; v <= W; ++v) {
      k[i] = v;
      self(self, i + 1, left - v);
    }
  };
  diag(diag, 0, D);
  return out;
}

inline bool touches_boundary(const SeriesMatrix& g, int W) {
  if (g.min_val() <= -W) return true;
  LatticeBasis L = canonical_basis(g);
  return !L.contains_all(SeriesMatrix::identity(g.ctx(), g.rows()).shifted(W - 1));
}

}  // namespace detail

inline VarietyEnumeration enumerate_points(const EtalePhiModule& module, const HodgeType& nu, const VarietyOptions& o = {}) {
  require_hodge_type(nu);
  if (static_cast<int>(nu.size()) != module.n()) throw LengthMismatch("Hodge type length differs from the rank");
  VarietyEnumeration out;
  out.module = o.extension > 1 ? base_change_unramified(module, o.extension) : module;
  out.nu = nu;
  out.extension = o.extension;
  out.window = o.window >= 0 ? o.window : default_window(module, nu);
  auto D = determinant_constraint(out.module, nu);
  if (!D) {
    out.completeness = "infeasible";
    out.reason = "DetConstraintInfeasible: (sum nu - val det A)/(p-1) is not an integer";
    return out;
  }
  int W = out.window, n = module.n();
  Field f = out.module.ctx();
  auto forms = detail::window_hermite_forms(f, n, W, *D, o.budget);
  out.scanned = static_cast<long>(forms.size());
  SeriesMatrix inner = SeriesMatrix::identity(f, n).shifted(W);
  auto keep = parallel_map<int>(o.jobs, static_cast<int>(forms.size()), [&](int i) {
    if (!canonical_basis(forms[i]).contains_all(inner)) return 0;
    KisinLattice l(out.module, forms[i]);
    return hodge_dominance(l.hodge_divisors(), nu) ? 1 : 0;
  });
  bool boundary = false;
  for (size_t i = 0; i < forms.size(); ++i) {
    if (!keep[i]) continue;
    out.points.emplace_back(out.module, forms[i]);
    boundary |= detail::touches_boundary(forms[i], W);
  }
  out.completeness = boundary ? "window-limited" : "certified";
  out.polygons = parallel_map<Polygon>(o.jobs, static_cast<int>(out.points.size()),
                                       [&](int i) { return hn_polygon_normalized(out.points[i], o.enumeration); });
  for (size_t i = 0; i < out.points.size(); ++i) {
    out.strata[out.polygons[i]].push_back(static_cast<int>(i));
    out.J.push_back(component_invariant(out.polygons[i], nu, out.module.e));
  }
  return out;
}

// Every point: g HN lies above P_nu, same endpoint, slopes within [a_1, a_n]; the last is a hard check.
inline bool hn_over_hodge_check(const VarietyEnumeration& v) {
  Polygon hodge = hodge_polygon(v.nu);
  for (auto& P : v.polygons) {
    Polygon gp = P.scaled(1, v.module.e);
    if (gp.endpoint() != hodge.endpoint() || !gp.lies_above(hodge)) return false;
    for (auto& s : gp.slopes())
      if (s < v.nu.front() || s > v.nu.back())
        throw PropertyFailure("realized HN slope " + to_string(s) + " outside [a_1, a_n]");
  }
  return true;
}

// Every realized polygon (scaled by g) is one of the candidates.
inline bool realized_within_candidates(const VarietyEnumeration& v) {
  auto cands = enumerate_candidate_polygons(v.nu);
  for (auto& [P, idx] : v.strata) {
    Polygon gp = P.scaled(1, v.module.e);
    if (std::none_of(cands.begin(), cands.end(), [&](const CandidatePolygon& c) { return c.polygon == gp; })) return false;
  }
  return true;
}

// d is a contact point iff the d-th exterior power, with Frobenius divided by u^{a_1 + ... + a_d},
// has positive etale rank.
inline std::set<int> wedge_contact_set(const KisinLattice& l, const HodgeType& nu, const EnumerationOptions& opts = {}) {
  std::set<int> J;
  int partial = 0;
  for (int d = 1; d < l.rank(); ++d) {
    partial += nu[d - 1];
    auto w = exterior_power(l, d);
    auto tw = KisinLattice::from_frobenius(w.frobenius().shifted(-partial), l.e());
    if (etale_rank(tw, opts) > 0) J.insert(d);
  }
  return J;
}

// Points whose polygon lies above P0, for every candidate P0; nesting must follow the order of the P0.
struct SemicontinuityReport {
  std::vector<std::pair<Polygon, std::vector<int>>> sets;
  bool nested = true;
};

inline SemicontinuityReport semicontinuity_sets(const VarietyEnumeration& v) {
  SemicontinuityReport r;
  for (auto& c : enumerate_candidate_polygons(v.nu)) {
    std::vector<int> idx;
    for (size_t i = 0; i < v.polygons.size(); ++i)
      if (v.polygons[i].scaled(1, v.module.e).lies_above(c.polygon)) idx.push_back(static_cast<int>(i));
    r.sets.emplace_back(c.polygon, idx);
  }
  for (auto& [P1, s1] : r.sets)
    for (auto& [P0, s0] : r.sets)
      if (P1.lies_above(P0) && !std::includes(s0.begin(), s0.end(), s1.begin(), s1.end())) r.nested = false;
  return r;
}

// |X(F_{q^m})| for m = 1..max_ext.
inline std::vector<long> point_counts(const EtalePhiModule& m, const HodgeType& nu, int max_ext, VarietyOptions o = {}) {
  std::vector<long> out;
  for (int k = 1; k <= max_ext; ++k) {
    o.extension = k;
    out.push_back(static_cast<long>(enumerate_points(m, nu, o).points.size()));
  }
  return out;
}

}  // namespace kisinhn
