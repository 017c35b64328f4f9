#pragma once

#include "lattice.hpp"

#include <random>
#include <vector>

namespace kisinhn {

using Rng = std::mt19937_64;

// Uniform integer in [lo, hi]; plain modulo keeps streams identical across standard libraries.
inline long uniform(Rng& rng, long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1)); }

inline Fq random_fq(Rng& rng, Field f) { return static_cast<Fq>(uniform(rng, 0, f->q() - 1)); }
inline Fq random_unit(Rng& rng, Field f) { return static_cast<Fq>(uniform(rng, 1, f->q() - 1)); }

// Polynomial u^lo * (c_0 + ... + c_deg u^deg) with random coefficients, known mod u^prec.
inline LaurentSeries random_series(Rng& rng, Field f, int lo, int deg, int prec) {
  std::vector<Fq> c(deg + 1);
  for (auto& x : c) x = random_fq(rng, f);
  return LaurentSeries::from_coeffs(f, lo, c, prec);
}

inline LaurentSeries random_unit_series(Rng& rng, Field f, int deg, int prec) {
  std::vector<Fq> c(deg + 1);
  for (auto& x : c) x = random_fq(rng, f);
  c[0] = random_unit(rng, f);
  return LaurentSeries::from_coeffs(f, 0, c, prec);
}

// Random element of GL_n(F_q[[u]]): permutation times unit diagonal times unitriangular factors.
inline SeriesMatrix random_unimodular(Rng& rng, Field f, int n, int deg, int prec) {
  SeriesMatrix lower = SeriesMatrix::identity(f, n, prec), upper = SeriesMatrix::identity(f, n, prec);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i > j) lower.set(i, j, random_series(rng, f, 0, deg, prec));
      if (i < j) upper.set(i, j, random_series(rng, f, 0, deg, prec));
      if (i == j) upper.set(i, j, random_unit_series(rng, f, deg, prec));
    }
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[uniform(rng, 0, i)]);
  SeriesMatrix p(f, n, n, prec);
  for (int i = 0; i < n; ++i) p.set(i, perm[i], LaurentSeries::constant(f, 1, prec));
  return p * lower * upper;
}

// Random matrix with prescribed elementary divisors: U diag(u^d) V.
inline SeriesMatrix random_with_divisors(Rng& rng, Field f, const std::vector<int>& divs, int deg, int prec) {
  int n = static_cast<int>(divs.size());
  SeriesMatrix d = SeriesMatrix::monomial_diagonal(f, divs, prec);
  return random_unimodular(rng, f, n, deg, prec) * d * random_unimodular(rng, f, n, deg, prec);
}

}  // namespace kisinhn
