#pragma once

#include "kisin.hpp"

#include <algorithm>
#include <vector>

namespace kisinhn {

struct HomSpace {
  std::vector<SeriesMatrix> basis;  // F_q-basis; each F satisfies F B1 = B2 phi(F)
  int solved_degree = 0;            // K: maps are determined by F mod u^K
  int dim() const { return static_cast<int>(basis.size()); }
};

namespace detail {

// Psi(F) = B2 phi(F) B1^-1 for F = u^s E_ij: u^{ps} (column i of B2)(row j of B1^-1).
inline SeriesMatrix psi_elementary(const SeriesMatrix& B2, const SeriesMatrix& B1inv, int i, int j, int s, int p) {
  int n2 = B2.rows(), n1 = B1inv.rows();
  SeriesMatrix out(B2.ctx(), n2, n1);
  for (int a = 0; a < n2; ++a)
    for (int b = 0; b < n1; ++b) out.set(a, b, (B2(a, i) * B1inv(j, b)).shifted(p * s));
  return out;
}

}  // namespace detail

// Phi-equivariant maps M1 -> M2 of Kisin lattices, in lattice coordinates.
inline HomSpace hom_space(const KisinLattice& m1, const KisinLattice& m2, int lift_prec = 24) {
  require_compatible(m1, m2);
  Field f = m1.ctx();
  int p = f->p(), n1 = m1.rank(), n2 = m2.rank();
  const SeriesMatrix& B1 = m1.frobenius();
  const SeriesMatrix& B2 = m2.frobenius();
  SeriesMatrix B1inv = inverse(B1);
  int a2 = B2.min_val(), h1 = -B1inv.min_val();
  int c = std::max(0, h1 - a2);
  int K = c / (p - 1) + 1;
  int tmin = std::min(0, a2 - h1);
  int rows_per = K - tmin;
  int unknowns = n1 * n2 * K;
  // Equations Psi(F)_t - F_t = 0 for t in [tmin, K).
  FqMatrix M(f, n1 * n2 * rows_per, unknowns);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n1; ++j)
      for (int s = 0; s < K; ++s) {
        int col = (i * n1 + j) * K + s;
        SeriesMatrix img = detail::psi_elementary(B2, B1inv, i, j, s, p);
        for (int a = 0; a < n2; ++a)
          for (int b = 0; b < n1; ++b)
            for (int t = tmin; t < K; ++t) {
              Fq v = img(a, b).coeff(t);
              if (a == i && b == j && t == s) v = f->sub(v, 1);
              M((a * n1 + b) * rows_per + (t - tmin), col) = v;
            }
      }
  FqMatrix ker = M.nullspace();
  HomSpace out;
  out.solved_degree = K;
  int target = std::max(lift_prec, K);
  for (int k = 0; k < ker.cols; ++k) {
    SeriesMatrix F(f, n2, n1, K);
    for (int i = 0; i < n2; ++i)
      for (int j = 0; j < n1; ++j) {
        std::vector<Fq> cs(K);
        for (int s = 0; s < K; ++s) cs[s] = ker((i * n1 + j) * K + s, k);
        F.set(i, j, LaurentSeries::from_coeffs(f, 0, cs, K));
      }
    // Each application of Psi fixes more coefficients; stop when precision stalls.
    for (int it = 0; it < 64 && F.prec() < target; ++it) {
      SeriesMatrix G = B2 * F.frobenius() * B1inv;
      if (G.prec() <= F.prec()) break;
      F = G.with_prec(target);
    }
    out.basis.push_back(F);
  }
  return out;
}

inline HomSpace endomorphisms(const KisinLattice& l, int lift_prec = 24) { return hom_space(l, l, lift_prec); }

}  // namespace kisinhn
