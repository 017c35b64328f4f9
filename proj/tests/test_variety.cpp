#include <gtest/gtest.h>

#include "kisinhn/variety.hpp"
#include "oracles.hpp"

#include <bitset>
#include <deque>

using namespace kisinhn;

namespace {

// Lattices between u^W L0 and u^-W L0 for n = 2 over F_2, as u-stable subspaces of
// (u^-W F_2[[u]] / u^W F_2[[u]])^2 = F_2^{4W}; bit c*2W + (t+W) is the coefficient of u^t in component c.
std::vector<SeriesMatrix> lattices_by_submodules(int W) {
  int dim = 4 * W, size = 1 << dim;
  auto times_u = [&](int v) {
    int out = 0;
    for (int c = 0; c < 2; ++c)
      for (int t = 0; t + 1 < 2 * W; ++t)
        if (v >> (c * 2 * W + t) & 1) out |= 1 << (c * 2 * W + t + 1);
    return out;
  };
  using Set = std::vector<bool>;
  auto close = [&](Set s, int v) {
    std::deque<int> todo{v};
    while (!todo.empty()) {
      int x = todo.front();
      todo.pop_front();
      if (s[x]) continue;
      std::vector<int> members;
      for (int y = 0; y < size; ++y)
        if (s[y]) members.push_back(y);
      for (int y : members) s[x ^ y] = true;
      todo.push_back(times_u(x));
    }
    return s;
  };
  Set zero(size, false);
  zero[0] = true;
  std::set<Set> seen{zero};
  std::deque<Set> queue{zero};
  while (!queue.empty()) {
    Set s = queue.front();
    queue.pop_front();
    for (int v = 1; v < size; ++v)
      if (!s[v]) {
        Set t = close(s, v);
        if (seen.insert(t).second) queue.push_back(t);
      }
  }
  Field f = field(2);
  std::vector<SeriesMatrix> out;
  for (auto& s : seen) {
    std::vector<LaurentSeries> cols0, cols1;
    for (int v = 1; v < size; ++v) {
      if (!s[v]) continue;
      for (int c = 0; c < 2; ++c) {
        std::vector<Fq> cs(2 * W);
        for (int t = 0; t < 2 * W; ++t) cs[t] = static_cast<Fq>(v >> (c * 2 * W + t) & 1);
        (c ? cols1 : cols0).push_back(LaurentSeries::from_coeffs(f, -W, cs));
      }
    }
    cols0.push_back(LaurentSeries::monomial(f, 1, W));
    cols1.push_back(LaurentSeries::zero(f));
    cols0.push_back(LaurentSeries::zero(f));
    cols1.push_back(LaurentSeries::monomial(f, 1, W));
    int k = static_cast<int>(cols0.size());
    SeriesMatrix gens(f, 2, k);
    for (int j = 0; j < k; ++j) gens.set(0, j, cols0[j]), gens.set(1, j, cols1[j]);
    out.push_back(canonical_basis(gens, ZeroPolicy::kTreatAsZero).basis);
  }
  return out;
}

std::vector<Polygon> polygons_of(const std::vector<CandidatePolygon>& c) {
  std::vector<Polygon> out;
  for (auto& x : c) out.push_back(x.polygon);
  return out;
}

}  // namespace

TEST(Orders, Examples) {
  EXPECT_TRUE(hodge_dominance({0, 1}, {0, 1}));
  EXPECT_TRUE(hodge_dominance({0, 0, 0}, {-1, 0, 1}));
  EXPECT_FALSE(hodge_dominance({-1, 0, 1}, {0, 0, 0}));
  EXPECT_FALSE(hodge_dominance({0, 2}, {0, 1}));
  EXPECT_TRUE(prec_order({0, 0, 0}, {-1, 0, 1}));
  EXPECT_FALSE(prec_order({-1, 0, 1}, {0, 0, 0}));
  EXPECT_TRUE(prec_order({Rational(1, 2), Rational(1, 2)}, {0, 1}));
  EXPECT_THROW(hodge_dominance({0}, {0, 1}), LengthMismatch);
  EXPECT_THROW(prec_order({0}, {0, 1}), LengthMismatch);
}

TEST(Orders, BruhatImpliesPrec) {
  Rng rng(61);
  int hits = 0;
  for (int t = 0; t < 3000; ++t) {
    int n = static_cast<int>(uniform(rng, 1, 4));
    HodgeType a, b;
    for (int i = 0; i < n; ++i) a.push_back(static_cast<int>(uniform(rng, -2, 2))), b.push_back(static_cast<int>(uniform(rng, -2, 2)));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (!hodge_dominance(a, b)) continue;
    ++hits;
    EXPECT_TRUE(prec_order(std::vector<Rational>(a.begin(), a.end()), std::vector<Rational>(b.begin(), b.end())));
    EXPECT_TRUE(hodge_polygon(a).lies_above(hodge_polygon(b)));
  }
  EXPECT_GT(hits, 50);
}

TEST(ComponentInvariant, Examples) {
  HodgeType nu{0, 0, 1};
  EXPECT_EQ(component_invariant(hodge_polygon(nu), nu), (std::set<int>{1, 2}));
  EXPECT_EQ(component_invariant(Polygon::from_vertices({{0, 0}, {3, 1}}), nu), std::set<int>{});
  EXPECT_EQ(component_invariant(Polygon::from_vertices({{0, 0}, {1, 0}, {3, 1}}), nu), (std::set<int>{1}));
  EXPECT_THROW(component_invariant(Polygon::from_vertices({{0, 0}, {1, -1}, {3, 1}}), nu), NotDominating);
  EXPECT_THROW(component_invariant(Polygon::from_vertices({{0, 0}, {3, 2}}), nu), NotDominating);
  // g scales the polygon.
  EXPECT_EQ(component_invariant(Polygon::from_vertices({{0, 0}, {2, 0}, {3, Rational(1, 2)}}), nu, 2), (std::set<int>{1, 2}));
}

TEST(Candidates, ThreeStandardCases) {
  auto a = enumerate_candidate_polygons({0, 0, 1});
  ASSERT_EQ(a.size(), 3u);
  std::set<std::vector<Rational>> slopes;
  for (auto& c : a) slopes.insert(c.polygon.unit_slopes());
  EXPECT_EQ(slopes, (std::set<std::vector<Rational>>{{Rational(1, 3), Rational(1, 3), Rational(1, 3)},
                                                     {0, Rational(1, 2), Rational(1, 2)},
                                                     {0, 0, 1}}));
  EXPECT_EQ(color_classes(a), (std::vector<std::set<int>>{{}, {1}, {1, 2}}));
  auto b = enumerate_candidate_polygons({-1, 0, 1});
  ASSERT_EQ(b.size(), 4u);
  slopes.clear();
  for (auto& c : b) slopes.insert(c.polygon.unit_slopes());
  EXPECT_EQ(slopes, (std::set<std::vector<Rational>>{{0, 0, 0},
                                                     {Rational(-1, 2), Rational(-1, 2), 1},
                                                     {-1, Rational(1, 2), Rational(1, 2)},
                                                     {-1, 0, 1}}));
  auto c = enumerate_candidate_polygons({0, 0});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].J, (std::set<int>{1}));
  EXPECT_EQ(polygons_of(enumerate_candidate_polygons({-1, 0, 0, 1})), oracle::candidates_by_subsets({-1, 0, 0, 1}));
}

TEST(Candidates, MatchSubsetOracle) {
  Rng rng(62);
  for (int t = 0; t < 60; ++t) {
    int n = static_cast<int>(uniform(rng, 1, 5));
    HodgeType nu;
    for (int i = 0; i < n; ++i) nu.push_back(static_cast<int>(uniform(rng, -2, 2)));
    std::sort(nu.begin(), nu.end());
    auto cands = enumerate_candidate_polygons(nu);
    EXPECT_EQ(polygons_of(cands), oracle::candidates_by_subsets(nu));
    bool has_hodge = false;
    for (auto& c : cands) has_hodge |= c.polygon == hodge_polygon(nu);
    EXPECT_TRUE(has_hodge);
  }
}

TEST(Variety, IdentityRankTwo) {
  Field f = field(2);
  EtalePhiModule m(SeriesMatrix::identity(f, 2), 1);
  auto v = enumerate_points(m, {0, 1});
  EXPECT_EQ(v.window, 2);
  ASSERT_EQ(v.points.size(), 3u);
  EXPECT_EQ(v.completeness, "certified");
  for (auto& pt : v.points) {
    EXPECT_EQ(val_det(pt.basis()), 1);
    EXPECT_EQ(pt.hodge_divisors(), (std::vector<int>{0, 1}));
  }
  EXPECT_TRUE(hn_over_hodge_check(v));
  ASSERT_EQ(v.strata.size(), 1u);
  EXPECT_EQ(v.strata.begin()->first.slopes(), (std::vector<Rational>{0, 1}));
  for (size_t i = 0; i < v.points.size(); ++i) {
    EXPECT_EQ(v.J[i], (std::set<int>{1}));
    EXPECT_EQ(wedge_contact_set(v.points[i], v.nu), v.J[i]);
  }
  EXPECT_TRUE(realized_within_candidates(v));
  EXPECT_TRUE(semicontinuity_sets(v).nested);
}

TEST(Variety, MatchesSubmoduleOracle) {
  Field f = field(2);
  EtalePhiModule m(SeriesMatrix::identity(f, 2), 1);
  auto lattices = lattices_by_submodules(2);
  std::set<std::string> expected;
  for (auto& g : lattices) {
    auto B = inverse(g) * g.frobenius();
    auto d = oracle::divisors_2x2(B);
    if (d[0] >= 0 && d[0] + d[1] == 1) expected.insert(detail::basis_key(canonical_basis(g)));
  }
  EXPECT_EQ(expected.size(), 3u);
  std::set<std::string> got;
  for (auto& pt : enumerate_points(m, {0, 1}).points) got.insert(detail::basis_key(lattice_canonical(pt)));
  EXPECT_EQ(got, expected);
}

TEST(Variety, InfeasibleAndEtale) {
  EtalePhiModule m3(SeriesMatrix::identity(field(3), 2), 1);
  auto v = enumerate_points(m3, {0, 1});
  EXPECT_TRUE(v.points.empty());
  EXPECT_EQ(v.completeness, "infeasible");
  EXPECT_NE(v.reason.find("DetConstraintInfeasible"), std::string::npos);
  for (int q : {2, 3}) {
    EtalePhiModule m(SeriesMatrix::identity(field_of_order(q), 2), 1);
    auto e = enumerate_points(m, {0, 0});
    ASSERT_EQ(e.points.size(), 1u);
    EXPECT_TRUE(canonical_basis(e.points[0].basis()).same(canonical_basis(SeriesMatrix::identity(field_of_order(q), 2))));
  }
  EXPECT_THROW(enumerate_points(m3, {0, 0, 1}), LengthMismatch);
}

TEST(Variety, RankThreeStrataAndWedges) {
  Field f = field(2);
  EtalePhiModule m(SeriesMatrix::identity(f, 3), 1);
  auto v = enumerate_points(m, {0, 0, 1});
  EXPECT_EQ(v.points.size(), 7u);
  EXPECT_TRUE(hn_over_hodge_check(v));
  EXPECT_TRUE(realized_within_candidates(v));
  EXPECT_TRUE(semicontinuity_sets(v).nested);
  for (size_t i = 0; i < v.points.size(); ++i) EXPECT_EQ(wedge_contact_set(v.points[i], v.nu), v.J[i]);

  // A non-split module: several strata.
  EtalePhiModule s(oracle::poly_matrix(f, 2, 2, {{0}, {0, 1}, {1}, {0}}), 1);
  auto w = enumerate_points(s, {0, 1});
  EXPECT_TRUE(hn_over_hodge_check(w));
  EXPECT_TRUE(realized_within_candidates(w));
  for (size_t i = 0; i < w.points.size(); ++i) EXPECT_EQ(wedge_contact_set(w.points[i], w.nu), w.J[i]);
}

TEST(Variety, ExtensionCounts) {
  EtalePhiModule m(SeriesMatrix::identity(field(2), 2), 1);
  // Colength-one sublattices of the standard lattice over F_{2^k}: 2^k + 1.
  EXPECT_EQ(point_counts(m, {0, 1}, 2), (std::vector<long>{3, 5}));
}
