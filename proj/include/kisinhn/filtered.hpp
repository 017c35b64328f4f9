#pragma once

#include "kisin.hpp"
#include "subobjects.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace kisinhn {

// Increasing exhaustive Q-indexed filtration on F_q^dim, stored through an
// adapted basis: V^i is spanned by the basis rows of weight <= i.
class FilteredSpace {
 public:
  FilteredSpace() = default;
  FilteredSpace(FqMatrix basis, std::vector<Rational> weights) : basis_(std::move(basis)), w_(std::move(weights)) {
    if (basis_.rows != basis_.cols || static_cast<int>(w_.size()) != basis_.rows)
      throw DimensionMismatch("filtered space needs a square adapted basis and one weight per row");
    if (basis_.rank() != basis_.rows) throw Error("adapted basis is singular");
  }

  static FilteredSpace trivial(Field f, int dim) { return FilteredSpace(FqMatrix::identity(f, dim), std::vector<Rational>(dim, 0)); }

  // From increasing steps (index, rows spanning V^index); the last step must be everything.
  static FilteredSpace from_steps(Field f, int dim, const std::vector<std::pair<Rational, FqMatrix>>& steps) {
    FqMatrix span(f, 0, dim), basis(f, 0, dim);
    std::vector<Rational> w;
    Rational last;
    for (size_t k = 0; k < steps.size(); ++k) {
      if (k && steps[k].first <= last) throw Error("filtration indices must increase");
      last = steps[k].first;
      for (int r = 0; r < steps[k].second.rows; ++r) {
        FqMatrix row(f, 1, dim);
        for (int c = 0; c < dim; ++c) row(0, c) = steps[k].second(r, c);
        if (subspace_contains(span, row)) continue;
        span = span.stacked(row);
        basis = basis.stacked(row);
        w.push_back(steps[k].first);
      }
      if (!subspace_contains(span, steps[k].second)) throw Error("filtration steps are not nested");
    }
    if (span.rows != dim) throw Error("filtration is not exhaustive");
    return FilteredSpace(basis, w);
  }

  Field ctx() const { return basis_.ctx; }
  int dim() const { return basis_.rows; }
  const FqMatrix& basis() const { return basis_; }
  const std::vector<Rational>& weights() const { return w_; }

  std::vector<Rational> indices() const {
    std::vector<Rational> s = w_;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  }
  // V^i (strict: V^{<i}) as rows.
  FqMatrix part(const Rational& i, bool strict = false) const {
    FqMatrix out(ctx(), 0, dim());
    for (int r = 0; r < dim(); ++r)
      if (strict ? w_[r] < i : w_[r] <= i) {
        FqMatrix row(ctx(), 1, dim());
        for (int c = 0; c < dim(); ++c) row(0, c) = basis_(r, c);
        out = out.stacked(row);
      }
    return out;
  }
  std::vector<std::pair<Rational, FqMatrix>> steps() const {
    std::vector<std::pair<Rational, FqMatrix>> out;
    for (auto& i : indices()) out.emplace_back(i, row_space(part(i)));
    return out;
  }
  bool same_filtration(const FilteredSpace& o) const { return steps() == o.steps(); }

  Rational norm2() const {
    Rational s = 0;
    for (auto& x : w_) s += x * x;
    return s;
  }
  Rational total() const {
    Rational s = 0;
    for (auto& x : w_) s += x;
    return s;
  }
  FilteredSpace scaled(const Rational& c) const {
    auto w = w_;
    for (auto& x : w) x *= c;
    return FilteredSpace(basis_, w);
  }
  FilteredSpace shifted(const Rational& c) const {
    auto w = w_;
    for (auto& x : w) x += c;
    return FilteredSpace(basis_, w);
  }

  std::string to_string() const {
    std::string s;
    for (auto& [i, rows] : steps()) {
      s += "  " + kisinhn::to_string(i) + ":";
      for (int r = 0; r < rows.rows; ++r) {
        s += " (";
        for (int c = 0; c < rows.cols; ++c) s += (c ? "," : "") + ctx()->format(rows(r, c));
        s += ")";
      }
      s += "\n";
    }
    return s;
  }

 private:
  FqMatrix basis_;
  std::vector<Rational> w_;
};

// deg of the subspace spanned by the rows of S with the induced filtration S cap V^i.
inline Rational deg_filtered(const FqMatrix& S, const FilteredSpace& V) {
  if (S.cols != V.dim()) throw DimensionMismatch("subspace and filtered space have different dimensions");
  Rational deg = 0;
  int prev = 0;
  for (auto& i : V.indices()) {
    int d = intersection_dim(S, V.part(i));
    deg += i * (d - prev);
    prev = d;
  }
  return deg;
}

inline Rational mu_filtered(const FqMatrix& S, const FilteredSpace& V) {
  int d = S.rank();
  if (d == 0) throw Error("slope of the zero subspace");
  return deg_filtered(S, V) / d;
}

// Row vector kron: (m (x) n)[a * dim n + b] = m_a n_b.
inline FqMatrix kron_rows(const FqMatrix& x, const FqMatrix& y) {
  const FqContext& F = *x.ctx;
  FqMatrix out(x.ctx, x.rows * y.rows, x.cols * y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < y.rows; ++k)
      for (int a = 0; a < x.cols; ++a)
        for (int b = 0; b < y.cols; ++b) out(i * y.rows + k, a * y.cols + b) = F.mul(x(i, a), y(k, b));
  return out;
}

// A pair of filtrations on (M, N) and the tensor filtration on M (x) N.
struct FiltrationPair {
  FilteredSpace M, N;

  Rational norm2() const { return M.norm2() + N.norm2(); }
  bool trivial() const { return norm2() == 0; }
  FilteredSpace tensor() const {
    std::vector<Rational> w;
    for (auto& a : M.weights())
      for (auto& b : N.weights()) w.push_back(a + b);
    return FilteredSpace(kron_rows(M.basis(), N.basis()), w);
  }
  bool same(const FiltrationPair& o) const { return M.same_filtration(o.M) && N.same_filtration(o.N); }
};

inline Rational deg_filtered(const FqMatrix& S, const FiltrationPair& a) { return deg_filtered(S, a.tensor()); }

// Signed square of f(S, alpha) = (mu(M (x) N) - mu(S)) / |alpha|.
inline Rational f_value2(const FqMatrix& S, const FiltrationPair& a) {
  if (a.trivial()) throw Error("f is undefined for the trivial filtration");
  Rational mu_total = a.M.total() / a.M.dim() + a.N.total() / a.N.dim();
  Rational num = mu_total - mu_filtered(S, a.tensor());
  return sign(num) * num * num / a.norm2();
}

// ---- Filtrations from pairs of lattices ----

// Sum of the relative-position exponents of L with respect to M.
inline int lattice_filtration_degree(const SeriesMatrix& M, const SeriesMatrix& L) {
  auto d = lattice_relative_position(M, L);
  return std::accumulate(d.begin(), d.end(), 0);
}

// Fil^i = image of M cap u^{-i} L in M/uM, in the coordinates of the basis M.
inline FilteredSpace induced_filtration(const SeriesMatrix& M, const SeriesMatrix& L) {
  SmithResult s = smith_normal_form(inverse(M) * L);
  SeriesMatrix x = inverse(s.u_left);  // columns: adapted basis of M in M-coordinates
  FqMatrix red = x.reduction().transpose();
  std::vector<Rational> w;
  for (int d : s.divisors) w.push_back(d);
  return FilteredSpace(red, w);
}

struct AltDegreeCheck {
  Rational lhs, rhs;
  Rational middle;  // exact lattice-level identity value, equals lhs
  bool holds = false;
  bool equality = false;
};

// Compares deg(S cap M) with (1/e)(deg_{L0}(S0) + (p-1) deg_M(S0)), S0 = image of S cap M0 in M0/uM0
// and L0 the lattice spanned by A phi(M0). S is given in ambient coordinates of the module.
inline AltDegreeCheck alt_degree_bound_check(const KisinLattice& l, const SeriesMatrix& S, const SeriesMatrix& M0) {
  const SeriesMatrix& A = l.parent().A;
  int p = l.p(), e = l.e();
  AltDegreeCheck out;
  // S cap M in lattice coordinates, and its degree.
  LatticeBasis sm = saturate(inverse(l.basis()) * S);
  out.lhs = sub_degree(l, sm);
  SeriesMatrix M0inv = inverse(M0);
  LatticeBasis s0 = saturate(M0inv * S);  // S cap M0 in M0-coordinates
  FqMatrix sbar = s0.basis.reduction().transpose();
  FilteredSpace fil_l0 = induced_filtration(SeriesMatrix::identity(A.ctx(), A.rows()), M0inv * A * M0.frobenius());
  FilteredSpace fil_m = induced_filtration(SeriesMatrix::identity(A.ctx(), A.rows()), M0inv * l.basis());
  out.rhs = (deg_filtered(sbar, fil_l0) + (p - 1) * deg_filtered(sbar, fil_m)) / e;
  // Lattice-level identity: relative positions inside S, in coordinates of X = S cap M0.
  SeriesMatrix L0 = A * M0.frobenius();
  SeriesMatrix X = M0 * s0.basis;
  SeriesMatrix YL = L0 * saturate(inverse(L0) * S).basis;
  SeriesMatrix YM = l.basis() * sm.basis;
  auto piv = canonical_basis(X).pivot_rows;
  SeriesMatrix Xinv = inverse(X.select_rows(piv));
  int d_l0 = val_det(Xinv * YL.select_rows(piv));
  int d_m = val_det(Xinv * YM.select_rows(piv));
  out.middle = Rational(d_l0 + (p - 1) * d_m, e);
  out.holds = out.lhs >= out.rhs;
  out.equality = out.lhs == out.rhs;
  return out;
}

// Inequality for a chain of stable saturated sublattices N_1 < ... < N_k = everything
// (lattice coordinates) and a stable saturated S: deg(S cap P) >= deg(S^new cap P^new).
struct GradedComparison {
  Rational original, graded;
  bool holds = false;
};

inline GradedComparison lattice_ss_check(const KisinLattice& l, const std::vector<LatticeBasis>& chain, const LatticeBasis& S) {
  GradedComparison out;
  out.original = sub_degree(l, S);
  Field f = l.ctx();
  const SeriesMatrix& B = l.frobenius();
  LatticeBasis prev = canonical_basis(SeriesMatrix(f, l.rank(), 0));
  out.graded = 0;
  for (const auto& big : chain) {
    int db = big.rank(), ds = prev.rank();
    SeriesMatrix Cq = subquotient_frobenius(B, prev, big);
    // Basis P of big-coordinates adapted to prev, as in subquotient_frobenius.
    SeriesMatrix P(f, db, db);
    if (ds) {
      LatticeBasis Y = canonical_basis(prev.basis.select_rows(big.pivot_rows));
      for (int i = 0; i < db; ++i)
        for (int j = 0; j < ds; ++j) P.set(i, j, Y.basis(i, j));
      int c = ds;
      for (int i = 0; i < db; ++i)
        if (std::find(Y.pivot_rows.begin(), Y.pivot_rows.end(), i) == Y.pivot_rows.end()) P.set(i, c++, LaurentSeries::one(f));
    } else {
      P = SeriesMatrix::identity(f, db);
    }
    LatticeBasis si = lattice_intersect_basis(S.basis, big.basis);
    if (si.rank() > 0) {
      SeriesMatrix img = (inverse(P) * si.basis.select_rows(big.pivot_rows)).block(ds, 0, db - ds, si.rank());
      LatticeBasis span = canonical_basis(img, ZeroPolicy::kTreatAsZero);
      if (span.rank() > 0) {
        LatticeBasis sat = saturate(span.basis);
        out.graded += Rational(val_det(restricted_frobenius(Cq, sat)), l.e());
      }
    }
    prev = big;
  }
  out.holds = out.original >= out.graded;
  return out;
}

}  // namespace kisinhn
