#include <gtest/gtest.h>

#include "kisinhn/isotonic.hpp"
#include "kisinhn/kempf.hpp"
#include "oracles.hpp"

using namespace kisinhn;

namespace {

FqMatrix rows_of(Field f, int cols, const std::vector<std::vector<int>>& rs) {
  FqMatrix m(f, static_cast<int>(rs.size()), cols);
  for (size_t i = 0; i < rs.size(); ++i)
    for (int c = 0; c < cols; ++c) m(static_cast<int>(i), c) = static_cast<Fq>(rs[i][c]);
  return m;
}

std::vector<FqMatrix> all_subspaces_any_dim(Field f, int n) {
  std::vector<FqMatrix> out;
  for (int d = 0; d <= n; ++d)
    for (auto& s : all_subspaces(f, n, d)) out.push_back(s);
  return out;
}

FqMatrix random_subspace(Rng& rng, Field f, int d, int n) {
  FqMatrix m(f, d, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = random_fq(rng, f);
  return row_space(m);
}

// Grid maximum of <c, x> / |x| over nonzero nondecreasing integer x in [-W, W]^k, as signed square.
Rational grid_cone_max(const RVec& c, int W, std::vector<std::vector<int>>* arg = nullptr) {
  std::vector<std::vector<int>> xs;
  std::vector<int> tmp;
  oracle::monotone_weights(static_cast<int>(c.size()), W, tmp, xs);
  std::optional<Rational> best;
  for (auto& x : xs) {
    Rational dotv = 0, nn = 0;
    for (size_t i = 0; i < c.size(); ++i) dotv += c[i] * x[i], nn += x[i] * x[i];
    if (nn == 0) continue;
    Rational v = sign(dotv) * dotv * dotv / nn;
    if (!best || v > *best) {
      best = v;
      if (arg) arg->assign(1, x);
    } else if (arg && v == *best) {
      arg->push_back(x);
    }
  }
  return *best;
}

}  // namespace

TEST(MinNorm, SmallPolytopes) {
  EXPECT_EQ(min_norm_point({{1, 0}, {0, 1}}), (RVec{Rational(1, 2), Rational(1, 2)}));
  EXPECT_EQ(min_norm_point({{1, 1}, {-1, 1}, {0, 3}}), (RVec{0, 1}));
  EXPECT_EQ(min_norm_point({{1, 0}, {-1, 1}, {-1, -1}}), (RVec{0, 0}));
  EXPECT_EQ(min_norm_point({{2, 2, 0}}), (RVec{2, 2, 0}));
}

TEST(MinNorm, OptimalityCertificate) {
  Rng rng(51);
  for (int t = 0; t < 200; ++t) {
    int dim = static_cast<int>(uniform(rng, 1, 4)), k = static_cast<int>(uniform(rng, 1, 7));
    std::vector<RVec> pts(k, RVec(dim));
    for (auto& p : pts)
      for (auto& x : p) x = Rational(uniform(rng, -5, 5), uniform(rng, 1, 3));
    RVec x = min_norm_point(pts);
    Rational xx = 0;
    for (auto& c : x) xx += c * c;
    for (auto& p : pts) {
      Rational d = 0;
      for (int i = 0; i < dim; ++i) d += x[i] * p[i];
      EXPECT_GE(d, xx);
    }
  }
}

TEST(Isotonic, MatchesGridOnMonotoneCones) {
  Rng rng(52);
  for (int t = 0; t < 150; ++t) {
    int k = static_cast<int>(uniform(rng, 1, 3));
    RVec c(k);
    for (auto& x : c) x = Rational(uniform(rng, -5, 5));
    auto cm = monotone_cone_maximum(c);
    for (size_t i = 1; i < cm.maximizer.size(); ++i) EXPECT_LE(cm.maximizer[i - 1], cm.maximizer[i]);
    std::vector<std::vector<int>> arg;
    Rational g = grid_cone_max(c, 6, &arg);
    bool zero = std::all_of(cm.maximizer.begin(), cm.maximizer.end(), [](const Rational& x) { return x == 0; });
    if (zero) {
      EXPECT_LE(g, 0);
      continue;
    }
    EXPECT_LE(g, cm.value2);
    RVec prim = primitive_integral(cm.maximizer);
    bool fits = std::all_of(prim.begin(), prim.end(), [](const Rational& x) { return abs(x) <= 6; });
    if (!fits) continue;
    EXPECT_EQ(g, cm.value2);
    for (auto& x : arg) {
      RVec xr(x.begin(), x.end());
      EXPECT_EQ(primitive_integral(xr), prim);
    }
  }
}

TEST(Kempf, LineExample) {
  Field f = field(2);
  FqMatrix line = rows_of(f, 4, {{1, 0, 0, 0}});
  EXPECT_FALSE(is_semistable_subspace(line, 2, 2));
  auto r = kempf_filtration(line, 2, 2);
  ASSERT_FALSE(r.stable);
  EXPECT_EQ(r.value2, 1);
  EXPECT_EQ(r.pair.M.weights(), (RVec{-1, 1}));
  EXPECT_EQ(r.pair.N.weights(), (RVec{-1, 1}));
  EXPECT_EQ(r.pair.M.part(-1), rows_of(f, 2, {{1, 0}}));
  EXPECT_EQ(deg_filtered(line, r.pair), -2);
  EXPECT_TRUE(row_space(kempf_semisimplify(line, r.pair)) == row_space(line));
}

TEST(Kempf, StableExamples) {
  Field f = field(2);
  EXPECT_TRUE(is_semistable_subspace(FqMatrix::identity(f, 4), 2, 2));
  EXPECT_TRUE(kempf_filtration(FqMatrix::identity(f, 4), 2, 2).stable);
  FqMatrix diag = rows_of(f, 4, {{1, 0, 0, 1}});
  EXPECT_TRUE(is_semistable_subspace(diag, 2, 2));
  EXPECT_THROW(unstable_kempf(diag, 2, 2), NotUnstable);
  FiltrationPair zero_mean{FilteredSpace(FqMatrix::identity(f, 2), {-1, 1}), FilteredSpace(FqMatrix::identity(f, 2), {0, 0})};
  EXPECT_EQ(deg_filtered(FqMatrix::identity(f, 4), zero_mean), 0);
  EXPECT_TRUE(oracle::grid_kempf(diag, 2, 2).semistable);
}

// Exhaustive over F_2^2 (x) F_2^2 against the grid oracle.
TEST(Kempf, AgreesWithGridOracle) {
  Field f = field(2);
  int unstable = 0;
  for (auto& S : all_subspaces_any_dim(f, 4)) {
    auto g = oracle::grid_kempf(S, 2, 2);
    bool ss = is_semistable_subspace(S, 2, 2);
    ASSERT_EQ(ss, g.semistable) << S.rows;
    if (ss) continue;
    ++unstable;
    auto r = kempf_filtration(S, 2, 2);
    EXPECT_EQ(r.value2, g.value2);
    ASSERT_EQ(g.argmax.size(), 1u);
    EXPECT_TRUE(r.pair.same(g.argmax[0]));
    EXPECT_EQ(r.pair.M.total(), 0);
    EXPECT_EQ(r.pair.N.total(), 0);
    EXPECT_EQ(f_value2(S, r.pair), r.value2);
  }
  EXPECT_GT(unstable, 0);
}

TEST(Kempf, ScalingInvariance) {
  Rng rng(53);
  Field f = field(3);
  for (int t = 0; t < 40; ++t) {
    FqMatrix b = random_subspace(rng, f, 2, 2);
    if (b.rows < 2) continue;
    FilteredSpace M(b, {Rational(uniform(rng, -3, 3)), Rational(uniform(rng, -3, 3))});
    FilteredSpace N(FqMatrix::identity(f, 3), {Rational(uniform(rng, -3, 3)), 0, Rational(uniform(rng, -3, 3), 2)});
    FiltrationPair a{M, N};
    if (a.trivial()) continue;
    auto S = random_subspace(rng, f, static_cast<int>(uniform(rng, 1, 5)), 6);
    if (S.rows == 0) continue;
    Rational c(uniform(rng, 1, 7), uniform(rng, 1, 5));
    FiltrationPair ac{M.scaled(c), N.scaled(c)};
    EXPECT_EQ(f_value2(S, ac), f_value2(S, a));
  }
}

// Semisimplification keeps the maximizing filtration, and deg_alpha is additive over the gradeds.
TEST(Kempf, SemisimplificationKeepsCocharacter) {
  Rng rng(54);
  int checked = 0;
  for (int t = 0; t < 60 && checked < 25; ++t) {
    Field f = field_of_order(t % 3 == 0 ? 3 : 2);
    int m = 2, n = t % 2 ? 3 : 2;
    if (f->q() == 3) n = 2;
    auto S = random_subspace(rng, f, static_cast<int>(uniform(rng, 1, m * n - 1)), m * n);
    auto r = kempf_filtration(S, m, n);
    if (r.stable) continue;
    ++checked;
    FqMatrix K = kempf_semisimplify(S, r.pair);
    EXPECT_EQ(K.rows, S.rows);
    EXPECT_EQ(deg_filtered(K, r.pair), deg_filtered(S, r.pair));
    FilteredSpace T = r.pair.tensor();
    Rational graded = 0;
    int total = 0;
    for (auto& l : T.indices()) {
      FqMatrix u(f, 0, m * n);
      for (int k = 0; k < m * n; ++k)
        if (T.weights()[k] == l) {
          FqMatrix row(f, 1, m * n);
          for (int c = 0; c < m * n; ++c) row(0, c) = T.basis()(k, c);
          u = u.stacked(row);
        }
      int dl = intersection_dim(K, u);
      graded += l * dl;
      total += dl;
    }
    EXPECT_EQ(total, K.rows);  // homogeneous
    EXPECT_EQ(graded, deg_filtered(K, r.pair));
    auto r2 = kempf_filtration(K, m, n);
    ASSERT_FALSE(r2.stable);
    EXPECT_TRUE(r2.pair.same(r.pair));
    EXPECT_EQ(r2.value2, r.value2);
  }
  EXPECT_GE(checked, 10);
}

TEST(Kempf, ParallelMatchesSerialAndBudget) {
  Rng rng(55);
  Field f = field(2);
  KempfOptions par;
  par.jobs = 4;
  for (int t = 0; t < 10; ++t) {
    auto S = random_subspace(rng, f, 2, 6);
    auto a = kempf_filtration(S, 2, 3), b = kempf_filtration(S, 2, 3, par);
    EXPECT_EQ(a.stable, b.stable);
    if (!a.stable) {
      EXPECT_TRUE(a.pair.same(b.pair));
    }
  }
  KempfOptions tight;
  tight.budget = 1000;
  EXPECT_THROW(is_semistable_subspace(random_subspace(rng, f, 8, 16), 4, 4, tight), ScaleTooLarge);
}
