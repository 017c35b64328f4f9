#include <gtest/gtest.h>

#include "kisinhn/fq.hpp"
#include "kisinhn/fq_linalg.hpp"

using namespace kisinhn;

TEST(Fq, LeastIrreducibleModulus) {
  // Hand enumeration: low-degree coefficient is the most significant key.
  EXPECT_EQ(field(2, 2)->modulus(), (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(field(3, 2)->modulus(), (std::vector<int>{1, 0, 1}));
  EXPECT_EQ(field(2, 3)->modulus(), (std::vector<int>{1, 0, 1, 1}));
  EXPECT_EQ(field(5, 1)->modulus(), (std::vector<int>{0, 1}));
}

TEST(Fq, FieldAxiomsExhaustive) {
  for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}, {2, 3}, {5, 1}}) {
    Field F = field(p, r);
    for (int a = 0; a < F->q(); ++a) {
      if (a) EXPECT_EQ(F->mul(a, F->inv(a)), 1);
      EXPECT_EQ(F->add(a, F->neg(a)), 0);
      for (int b = 0; b < F->q(); ++b) {
        EXPECT_EQ(F->mul(a, b), F->mul(b, a));
        for (int c = 0; c < F->q(); c += 1 + F->q() / 5)
          EXPECT_EQ(F->mul(a, F->add(b, c)), F->add(F->mul(a, b), F->mul(a, c)));
      }
    }
    // Frobenius is an additive bijection.
    std::vector<bool> hit(F->q(), false);
    for (int a = 0; a < F->q(); ++a) {
      hit[F->pow(a, p)] = true;
      for (int b = 0; b < F->q(); ++b)
        EXPECT_EQ(F->pow(F->add(a, b), p), F->add(F->pow(a, p), F->pow(b, p)));
    }
    for (bool h : hit) EXPECT_TRUE(h);
  }
}

TEST(Fq, OrderAndRejection) {
  EXPECT_EQ(field_of_order(4)->r(), 2);
  EXPECT_EQ(field_of_order(27)->p(), 3);
  EXPECT_THROW(field_of_order(6), Error);
  EXPECT_THROW(field(4, 1), Error);
}

TEST(Fq, EmbeddingIsRingMap) {
  Field s = field(2, 2), b = field(2, 4);
  auto e = embedding(s, b);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      EXPECT_EQ(e[s->mul(x, y)], b->mul(e[x], e[y]));
      EXPECT_EQ(e[s->add(x, y)], b->add(e[x], e[y]));
    }
}

TEST(FqLinalg, GaussianBinomialCounts) {
  EXPECT_EQ(all_subspaces(field(2), 4, 2).size(), 35u);
  EXPECT_EQ(all_subspaces(field(3), 3, 1).size(), 13u);
  EXPECT_EQ(all_subspaces(field(2, 2), 2, 1).size(), 5u);
}

TEST(FqLinalg, IntersectionAndSum) {
  Field F = field(3);
  FqMatrix x(F, 2, 3), y(F, 2, 3);
  x(0, 0) = 1; x(1, 1) = 1;
  y(0, 1) = 1; y(1, 2) = 1;
  EXPECT_EQ(subspace_intersection(x, y).rows, 1);
  EXPECT_EQ(subspace_sum(x, y).rows, 3);
  EXPECT_EQ(intersection_dim(x, y), 1);
  auto inv = FqMatrix::identity(F, 3);
  inv(0, 2) = 2;
  EXPECT_EQ(inv * inv.inverse(), FqMatrix::identity(F, 3));
}
