#include <gtest/gtest.h>

#include "kisinhn/hom.hpp"
#include "kisinhn/subobjects.hpp"
#include "oracles.hpp"

using namespace kisinhn;

namespace {
SeriesMatrix swap_u(Field f) { return oracle::poly_matrix(f, 2, 2, {{0}, {0, 1}, {1}, {0}}); }

std::vector<Point> cloud_points(const std::vector<CloudPoint>& c) {
  std::vector<Point> out;
  for (auto& x : c) out.emplace_back(x.rank, x.deg);
  std::sort(out.begin(), out.end());
  return out;
}

// Lines found by enumeration must coincide with the brute-force oracle.
void expect_lines_match_oracle(const SeriesMatrix& B) {
  auto rep = enumerate_stable(B, 1);
  auto lines = oracle::stable_lines_2x2(B, rep.seed_precision, rep.target_precision);
  ASSERT_EQ(rep.subspaces.size(), lines.size()) << B.to_string();
  for (auto& s : rep.subspaces) {
    bool hit = false;
    for (auto& [x, y] : lines) hit |= s.basis.basis(0, 0).agrees(x) && s.basis.basis(1, 0).agrees(y);
    EXPECT_TRUE(hit) << s.basis.basis.to_string();
  }
}
}  // namespace

TEST(Enumerate, DiagonalLines) {
  // Over F_2 the line through u e1 + e2 is stable as well: A phi(u e1 + e2) = u (u e1 + e2).
  auto rep2 = enumerate_stable(SeriesMatrix::monomial_diagonal(field(2), {0, 1}), 1);
  EXPECT_EQ(rep2.subspaces.size(), 3u);
  auto rep3 = enumerate_stable(SeriesMatrix::monomial_diagonal(field(3), {0, 1}), 1);
  EXPECT_EQ(rep3.subspaces.size(), 2u);
  expect_lines_match_oracle(SeriesMatrix::monomial_diagonal(field(2), {0, 1}));
  expect_lines_match_oracle(SeriesMatrix::monomial_diagonal(field(3), {0, 1}));
}

TEST(Enumerate, NoStableLineForSwap) {
  EXPECT_TRUE(enumerate_stable(swap_u(field(2)), 1).subspaces.empty());
  expect_lines_match_oracle(swap_u(field(2)));
}

TEST(Enumerate, IdentityGivesConstantSubspaces) {
  struct Case {
    int q, n, d;
    size_t count;
  };
  for (auto c : {Case{2, 3, 1, 7}, Case{2, 3, 2, 7}, Case{2, 4, 2, 35}, Case{3, 2, 1, 4}, Case{4, 3, 1, 21}}) {
    Field f = field_of_order(c.q);
    auto rep = enumerate_stable(SeriesMatrix::identity(f, c.n), c.d);
    EXPECT_EQ(rep.subspaces.size(), c.count);
    for (auto& s : rep.subspaces) EXPECT_EQ(s.basis.basis.min_val(), 0);
  }
}

TEST(Enumerate, RandomTwoByTwoMatchesOracle) {
  Rng rng(31);
  for (int t = 0; t < 25; ++t) {
    Field f = field_of_order(t % 2 ? 3 : 2);
    std::vector<int> divs{static_cast<int>(uniform(rng, 0, 1)), static_cast<int>(uniform(rng, 1, 3))};
    auto B = random_with_divisors(rng, f, divs, 2, LaurentSeries::kExact);
    expect_lines_match_oracle(B);
  }
}

TEST(Enumerate, SeedPrecisionAndCrossCheck) {
  Field f = field(2);
  EnumerationOptions o;
  o.seed_precision = 1;
  EXPECT_THROW(enumerate_stable(SeriesMatrix::monomial_diagonal(f, {0, 3}), 1, o), SeedPrecisionTooSmall);
  EnumerationOptions x;
  x.cross_check = true;
  EXPECT_EQ(enumerate_stable(SeriesMatrix::monomial_diagonal(f, {0, 1, 2}), 1, x).subspaces.size(),
            enumerate_stable(SeriesMatrix::monomial_diagonal(f, {0, 1, 2}), 1).subspaces.size());
}

TEST(Enumerate, ParallelMatchesSerial) {
  Rng rng(32);
  auto B = random_with_divisors(rng, field(2), {0, 0, 1}, 2, LaurentSeries::kExact);
  EnumerationOptions par;
  par.jobs = 4;
  for (int d = 1; d <= 2; ++d) {
    auto a = enumerate_stable(B, d), b = enumerate_stable(B, d, par);
    ASSERT_EQ(a.subspaces.size(), b.subspaces.size());
    for (size_t i = 0; i < a.subspaces.size(); ++i) EXPECT_TRUE(a.subspaces[i].basis.same(b.subspaces[i].basis));
  }
}

TEST(Cloud, Examples) {
  Field f = field(2);
  auto et = KisinLattice::from_frobenius(SeriesMatrix::identity(f, 2), 1);
  auto c = cloud_points(subobject_cloud(et));
  EXPECT_EQ(std::count(c.begin(), c.end(), Point(1, 0)), 3);
  EXPECT_EQ(c.front(), Point(0, 0));
  EXPECT_EQ(c.back(), Point(2, 0));

  auto d = KisinLattice::from_frobenius(SeriesMatrix::monomial_diagonal(f, {0, 1}), 1);
  auto cd = cloud_points(subobject_cloud(d));
  cd.erase(std::unique(cd.begin(), cd.end()), cd.end());
  EXPECT_EQ(cd, (std::vector<Point>{{0, 0}, {1, 0}, {1, 1}, {2, 1}}));

  auto s = KisinLattice::from_frobenius(swap_u(f), 1);
  EXPECT_EQ(cloud_points(subobject_cloud(s)), (std::vector<Point>{{0, 0}, {2, 1}}));
}

TEST(Polygon, HullExamples) {
  Field f = field(2);
  auto d = KisinLattice::from_frobenius(SeriesMatrix::monomial_diagonal(f, {0, 1}), 1);
  auto P = hn_polygon_normalized(d);
  EXPECT_EQ(P.vertices(), (std::vector<Point>{{0, 0}, {1, 0}, {2, 1}}));
  EXPECT_EQ(etale_rank(d), 1);
  auto s = KisinLattice::from_frobenius(swap_u(f), 1);
  auto Ps = hn_polygon_normalized(s);
  EXPECT_EQ(Ps.vertices(), (std::vector<Point>{{0, 0}, {2, 1}}));
  EXPECT_TRUE(is_semistable(s));
  EXPECT_EQ(etale_rank(s), 0);
  auto et = KisinLattice::from_frobenius(SeriesMatrix::identity(field(3), 3), 1);
  EXPECT_EQ(hn_polygon_normalized(et).slopes(), (std::vector<Rational>{0}));
  EXPECT_EQ(etale_rank(et), 3);
  // Raw polygon counts length over F_p.
  auto d4 = KisinLattice::from_frobenius(SeriesMatrix::monomial_diagonal(field(2, 2), {0, 1}), 1);
  EXPECT_EQ(hn_polygon(d4).endpoint(), Point(4, 2));
  EXPECT_THROW(etale_rank(twist_line(f, -1, 1)), NotEffective);
}

TEST(HN, FiltrationExamples) {
  Field f = field(2);
  auto d = KisinLattice::from_frobenius(SeriesMatrix::monomial_diagonal(f, {0, 1}), 1);
  auto h = hn_filtration(d);
  ASSERT_EQ(h.steps.size(), 2u);
  EXPECT_EQ(h.steps[0].pivot_rows, (std::vector<int>{0}));
  EXPECT_TRUE(h.steps[0].basis(1, 0).is_zero());
  EXPECT_EQ(h.slopes, (std::vector<Rational>{0, 1}));
  auto gr = hn_gradeds(d, h);
  EXPECT_EQ(gr[0].degree(), 0);
  EXPECT_EQ(gr[1].degree(), 1);
  auto s = KisinLattice::from_frobenius(swap_u(f), 1);
  EXPECT_EQ(hn_filtration(s).steps.size(), 1u);
}

// Random lattices: hull properties, gradeds, additivity, functoriality.
TEST(HN, RandomLatticeProperties) {
  Rng rng(33);
  for (int t = 0; t < 20; ++t) {
    Field f = field_of_order(t % 3 == 2 ? 3 : 2);
    int n = t % 2 ? 3 : 2;
    std::vector<int> divs;
    for (int i = 0; i < n; ++i) divs.push_back(static_cast<int>(uniform(rng, 0, 2)));
    std::sort(divs.begin(), divs.end());
    auto l = random_lattice(rng, f, 1 + t % 2, divs, 1, LaurentSeries::kExact);
    auto cloud = subobject_cloud(l);
    auto h = hn_filtration_from_cloud(l, cloud);
    for (auto& c : cloud) EXPECT_GE(c.deg, h.polygon(c.rank));
    EXPECT_EQ(h.polygon.endpoint(), Point(n, l.degree()));
    for (auto& g : hn_gradeds(l, h)) EXPECT_TRUE(is_semistable(g));
    for (auto& c : cloud) {
      if (c.rank == 0 || c.rank == n) continue;
      auto sub = sub_lattice(l, c.witness);
      auto quo = quotient_lattice(l, c.witness);
      EXPECT_EQ(sub.degree() + quo.degree(), l.degree());
      EXPECT_EQ(sub.degree(), c.deg);
    }
    for (auto& F : endomorphisms(l).basis)
      for (auto& s : h.steps) EXPECT_TRUE(s.contains_all(F * s.basis));
  }
}

TEST(Hom, Examples) {
  for (int q : {2, 3, 4}) {
    Field f = field_of_order(q);
    EXPECT_EQ(hom_space(twist_line(f, 0, 1), twist_line(f, 1, 1)).dim(), 0);
    for (int s = -1; s <= 2; ++s) {
      auto end = endomorphisms(twist_line(f, s, 1 + (q % 2)));
      ASSERT_EQ(end.dim(), 1);
      EXPECT_TRUE(end.basis[0].agrees(SeriesMatrix::identity(f, 1)));
    }
  }
  // Maps of positive slope difference in the other direction exist: u^k.
  Field f = field(2);
  auto h = hom_space(twist_line(f, 1, 1), twist_line(f, 0, 1));
  EXPECT_GE(h.dim(), 1);
  for (auto& F : h.basis) {
    auto B1 = twist_line(f, 1, 1).frobenius(), B2 = twist_line(f, 0, 1).frobenius();
    EXPECT_TRUE((F * B1).agrees(B2 * F.frobenius()));
  }
}

TEST(Hom, IdentityAndEquation) {
  Rng rng(34);
  for (int t = 0; t < 10; ++t) {
    Field f = field_of_order(t % 2 ? 3 : 2);
    auto a = random_lattice(rng, f, 1, {0, 1}, 1, LaurentSeries::kExact);
    auto b = random_lattice(rng, f, 1, {0, 2}, 1, LaurentSeries::kExact);
    auto end = endomorphisms(a);
    EXPECT_GE(end.dim(), 1);
    FqMatrix coords(f, 0, 4);
    for (auto& F : hom_space(a, b).basis) EXPECT_TRUE((F * a.frobenius()).agrees(b.frobenius() * F.frobenius()));
  }
}

TEST(BaseChange, NormalizedPolygonInvariant) {
  Rng rng(35);
  for (int t = 0; t < 6; ++t) {
    Field f = field(2);
    auto l = random_lattice(rng, f, 1, {0, 1}, 1, LaurentSeries::kExact);
    auto P = hn_polygon_normalized(l);
    for (int m : {2, 3}) EXPECT_EQ(hn_polygon_normalized(base_change_unramified(l, m)), P);
  }
}
