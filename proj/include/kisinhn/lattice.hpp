#pragma once

#include "series_matrix.hpp"

#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace kisinhn {

// How pivoting routines treat entries that are zero at the stored precision.
enum class ZeroPolicy { kRaise, kTreatAsZero };

struct SmithResult {
  SeriesMatrix u_left;
  std::vector<int> divisors;
  SeriesMatrix v_right;
};

// u_left * m * v_right = diag(u^d_1, ..., u^d_n), d ascending.
inline SmithResult smith_normal_form(const SeriesMatrix& m, ZeroPolicy policy = ZeroPolicy::kRaise) {
  if (m.rows() != m.cols()) throw NonSquare("Smith normal form needs a square matrix");
  int n = m.rows();
  SeriesMatrix w = m, U = SeriesMatrix::identity(m.ctx(), n), V = SeriesMatrix::identity(m.ctx(), n);
  std::vector<int> divs;
  for (int t = 0; t < n; ++t) {
    int bi = -1, bj = -1;
    for (int i = t; i < n; ++i)
      for (int j = t; j < n; ++j) {
        const auto& x = w(i, j);
        if (x.is_zero()) continue;
        if (bi < 0 || x.val() < w(bi, bj).val()) bi = i, bj = j;
      }
    if (bi < 0) {
      if (policy == ZeroPolicy::kRaise)
        throw InsufficientPrecision("Smith pivot " + std::to_string(t) + " is zero at precision " +
                                    std::to_string(w.prec()));
      break;
    }
    w.swap_rows(t, bi);
    U.swap_rows(t, bi);
    w.swap_cols(t, bj);
    V.swap_cols(t, bj);
    int v = w(t, t).val();
    LaurentSeries unit_inv = pivot_inverse(w(t, t)).shifted(v);
    w.row_scale(t, unit_inv);
    U.row_scale(t, unit_inv);
    for (int i = t + 1; i < n; ++i) {
      if (w(i, t).is_zero()) continue;
      LaurentSeries f = w(i, t).shifted(-v);
      w.row_axpy(i, t, f);
      U.row_axpy(i, t, f);
    }
    for (int j = t + 1; j < n; ++j) {
      if (w(t, j).is_zero()) continue;
      LaurentSeries f = w(t, j).shifted(-v);
      w.col_axpy(j, t, f);
      V.col_axpy(j, t, f);
    }
    divs.push_back(v);
  }
  U.normalize();
  V.normalize();
  return {U, divs, V};
}

inline std::vector<int> elementary_divisors(const SeriesMatrix& m) { return smith_normal_form(m).divisors; }

inline int val_det(const SeriesMatrix& m) {
  auto d = elementary_divisors(m);
  return std::accumulate(d.begin(), d.end(), 0);
}

// Canonical basis of the F_q[[u]]-span of some columns. Pivots are chosen
// intrinsically: the minimal valuation over the module, at the first row where
// it occurs; later columns vanish on earlier pivot rows; entries of a column on
// the pivot rows of later-chosen columns are reduced modulo their pivot power.
// Columns are stored sorted by pivot row.
struct LatticeBasis {
  SeriesMatrix basis;
  std::vector<int> pivot_rows;
  std::vector<int> pivot_exps;
  std::vector<int> order;  // stored column indices in pivot selection order

  int rank() const { return static_cast<int>(pivot_rows.size()); }
  int ambient() const { return basis.rows(); }
  bool saturated() const {
    for (int d : pivot_exps)
      if (d != 0) return false;
    return true;
  }
  bool same(const LatticeBasis& o) const {
    return pivot_rows == o.pivot_rows && pivot_exps == o.pivot_exps && basis.agrees(o.basis);
  }
  // Sum of pivot exponents: colength-type invariant for full lattices.
  int total_exp() const { return std::accumulate(pivot_exps.begin(), pivot_exps.end(), 0); }

  // Coordinates of v (n x 1) in this basis, or empty if v is not in the lattice.
  std::optional<SeriesMatrix> coordinates(const SeriesMatrix& v) const;
  bool contains(const SeriesMatrix& v) const { return coordinates(v).has_value(); }
  bool contains_all(const SeriesMatrix& vs) const {
    for (int j = 0; j < vs.cols(); ++j)
      if (!contains(vs.columns({j}))) return false;
    return true;
  }
};

// Part of s with exponents >= 0.
inline LaurentSeries nonnegative_part(const LaurentSeries& s) {
  if (s.is_zero() || s.val() >= 0) return s;
  std::vector<Fq> c;
  for (int k = 0; k < s.end(); ++k) c.push_back(s.coeff(k));
  return LaurentSeries::from_coeffs(s.ctx(), 0, c, s.prec());
}

namespace detail {

struct EchelonState {
  SeriesMatrix w;
  SeriesMatrix v;  // accumulated column operations (optional use)
  std::vector<int> piv_row, piv_exp, piv_col;
  std::vector<int> rest;  // columns left without pivot
};

// Column elimination with global minimal-valuation pivots.
inline EchelonState echelon(const SeriesMatrix& a, bool track) {
  EchelonState st;
  st.w = a;
  int k = a.cols(), n = a.rows();
  if (track) st.v = SeriesMatrix::identity(a.ctx(), k);
  std::vector<bool> active(k, true);
  for (int step = 0; step < k; ++step) {
    int br = -1, bc = -1, bv = 0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < k; ++c) {
        if (!active[c]) continue;
        const auto& x = st.w(r, c);
        if (x.is_zero()) continue;
        if (br < 0 || x.val() < bv) br = r, bc = c, bv = x.val();
      }
    if (br < 0) break;
    LaurentSeries unit_inv = pivot_inverse(st.w(br, bc)).shifted(bv);
    st.w.col_scale(bc, unit_inv);
    if (track) st.v.col_scale(bc, unit_inv);
    for (int c = 0; c < k; ++c) {
      if (!active[c] || c == bc || st.w(br, c).is_zero()) continue;
      LaurentSeries f = st.w(br, c).shifted(-bv);
      st.w.col_axpy(c, bc, f);
      if (track) st.v.col_axpy(c, bc, f);
    }
    active[bc] = false;
    st.piv_row.push_back(br);
    st.piv_exp.push_back(bv);
    st.piv_col.push_back(bc);
  }
  for (int c = 0; c < k; ++c)
    if (active[c]) st.rest.push_back(c);
  return st;
}

}  // namespace detail

inline LatticeBasis canonical_basis(const SeriesMatrix& a, ZeroPolicy policy = ZeroPolicy::kRaise) {
  auto st = detail::echelon(a, false);
  if (!st.rest.empty() && policy == ZeroPolicy::kRaise)
    throw InsufficientPrecision("columns are dependent at precision " + std::to_string(a.prec()));
  int k = static_cast<int>(st.piv_col.size());
  SeriesMatrix& w = st.w;
  // Reduce each column on the pivot rows of later-chosen columns.
  for (int t = 0; t < k; ++t)
    for (int s = t + 1; s < k; ++s) {
      const auto& x = w(st.piv_row[s], st.piv_col[t]);
      if (x.is_zero()) continue;
      LaurentSeries qpart = nonnegative_part(x.shifted(-st.piv_exp[s]));
      if (!qpart.is_zero()) w.col_axpy(st.piv_col[t], st.piv_col[s], qpart);
    }
  // Pivot entries are exactly u^d.
  for (int t = 0; t < k; ++t)
    w.set(st.piv_row[t], st.piv_col[t], LaurentSeries::monomial(a.ctx(), 1, st.piv_exp[t], w.prec()));
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int x, int y) { return st.piv_row[x] < st.piv_row[y]; });
  LatticeBasis out;
  std::vector<int> cols;
  for (int t : idx) {
    cols.push_back(st.piv_col[t]);
    out.pivot_rows.push_back(st.piv_row[t]);
    out.pivot_exps.push_back(st.piv_exp[t]);
  }
  out.basis = w.columns(cols);
  out.basis.normalize();
  out.order.resize(k);
  for (int t = 0; t < k; ++t)
    out.order[t] = static_cast<int>(std::find(idx.begin(), idx.end(), t) - idx.begin());
  return out;
}

inline std::optional<SeriesMatrix> LatticeBasis::coordinates(const SeriesMatrix& v) const {
  SeriesMatrix rest = v;
  int k = rank();
  SeriesMatrix coords(basis.ctx(), k, 1);
  for (int t : order) {
    const auto& x = rest(pivot_rows[t], 0);
    if (!x.is_zero() && x.val() < pivot_exps[t]) return std::nullopt;
    LaurentSeries c = x.shifted(-pivot_exps[t]);
    coords.set(t, 0, c);
    if (c.is_zero()) continue;
    for (int i = 0; i < rest.rows(); ++i) rest.at(i, 0) = rest(i, 0) - c * basis(i, t);
  }
  if (!rest.is_zero()) return std::nullopt;
  coords.normalize();
  return coords;
}

// Basis (columns) of {x in F_q[[u]]^k : a x = 0}; zero-at-precision columns count as zero.
inline SeriesMatrix integral_kernel(const SeriesMatrix& a) {
  auto st = detail::echelon(a, true);
  return st.v.columns(st.rest);
}

inline LatticeBasis lattice_intersect_basis(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("lattices live in different ambient spaces");
  Field ctx = a.ctx();
  if (a.cols() == 0 || b.cols() == 0) {
    LatticeBasis empty;
    empty.basis = SeriesMatrix(ctx, a.rows(), 0);
    return empty;
  }
  SeriesMatrix neg_b = b.map([](const LaurentSeries& s) { return -s; });
  SeriesMatrix k = integral_kernel(a.hconcat(neg_b));
  if (k.cols() == 0) {
    LatticeBasis empty;
    empty.basis = SeriesMatrix(ctx, a.rows(), 0);
    return empty;
  }
  SeriesMatrix coeffs = k.block(0, 0, a.cols(), k.cols());
  return canonical_basis(a * coeffs);
}

inline SeriesMatrix lattice_intersect(int ambient_dim, const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.rows() != ambient_dim) throw DimensionMismatch("ambient dimension mismatch");
  return lattice_intersect_basis(a, b).basis;
}

// Saturation of the span of the columns inside F_q[[u]]^n, in canonical form.
inline LatticeBasis saturate(const SeriesMatrix& a) {
  if (a.cols() == 0) return canonical_basis(a);
  int mv = a.min_val();
  if (mv >= LaurentSeries::kExact) throw InsufficientPrecision("cannot saturate a matrix that is zero at precision");
  SeriesMatrix w = a.shifted(-mv);
  int k = w.cols();
  for (int guard = 0;; ++guard) {
    if (guard > 64 * (k + 1)) throw InsufficientPrecision("saturation did not terminate at the stored precision");
    FqMatrix red = w.reduction();
    FqMatrix ker = red.nullspace();
    if (ker.cols == 0) break;
    int j = -1;
    for (int i = 0; i < k; ++i)
      if (ker(i, 0)) j = i;
    SeriesMatrix combo(w.ctx(), w.rows(), 1);
    for (int r = 0; r < w.rows(); ++r) {
      LaurentSeries acc = LaurentSeries::zero(w.ctx());
      for (int i = 0; i < k; ++i)
        if (ker(i, 0)) acc = acc + w(r, i).scaled(ker(i, 0));
      combo.set(r, 0, acc.shifted(-1));
    }
    for (int r = 0; r < w.rows(); ++r) w.set(r, j, combo(r, 0));
    w.normalize();
  }
  return canonical_basis(w);
}

inline std::vector<int> lattice_relative_position(const SeriesMatrix& a, const SeriesMatrix& b) {
  return elementary_divisors(inverse(a) * b);
}

}  // namespace kisinhn
