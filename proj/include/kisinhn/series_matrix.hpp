#pragma once

#include "errors.hpp"
#include "fq_linalg.hpp"
#include "laurent.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

namespace kisinhn {

// Relative precision used when an exact non-monomial pivot must be inverted.
inline constexpr int kExactInverseCap = 64;

// Matrix of Laurent series over one field. Entries are normalized to the
// common absolute precision unless every entry is exact.
class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  SeriesMatrix(Field ctx, int rows, int cols, int prec = LaurentSeries::kExact)
      : ctx_(ctx), rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols, LaurentSeries::zero(ctx, prec)) {}
  SeriesMatrix(Field ctx, int rows, int cols, std::vector<LaurentSeries> entries)
      : ctx_(ctx), rows_(rows), cols_(cols), e_(std::move(entries)) {
    if (static_cast<int>(e_.size()) != rows * cols) throw DimensionMismatch("entry count does not match shape");
    normalize();
  }

  static SeriesMatrix identity(Field ctx, int n, int prec = LaurentSeries::kExact) {
    SeriesMatrix m(ctx, n, n, prec);
    for (int i = 0; i < n; ++i) m.e_[i * n + i] = LaurentSeries::constant(ctx, 1, prec);
    return m;
  }
  static SeriesMatrix diagonal(Field ctx, const std::vector<LaurentSeries>& d) {
    int n = static_cast<int>(d.size());
    std::vector<LaurentSeries> e(n * n, LaurentSeries::zero(ctx));
    for (int i = 0; i < n; ++i) e[i * n + i] = d[i];
    return SeriesMatrix(ctx, n, n, std::move(e));
  }
  // Diagonal of monomials u^k.
  static SeriesMatrix monomial_diagonal(Field ctx, const std::vector<int>& ks, int prec = LaurentSeries::kExact) {
    std::vector<LaurentSeries> d;
    for (int k : ks) d.push_back(LaurentSeries::monomial(ctx, 1, k, prec));
    return diagonal(ctx, d);
  }
  static SeriesMatrix from_fq(const FqMatrix& m, int prec = LaurentSeries::kExact) {
    SeriesMatrix r(m.ctx, m.rows, m.cols, prec);
    for (int i = 0; i < m.rows; ++i)
      for (int j = 0; j < m.cols; ++j) r.e_[i * m.cols + j] = LaurentSeries::constant(m.ctx, m(i, j), prec);
    return r;
  }

  Field ctx() const { return ctx_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const LaurentSeries& operator()(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }
  const std::vector<LaurentSeries>& entries() const { return e_; }
  friend bool operator==(const SeriesMatrix& a, const SeriesMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }

  void set(int i, int j, LaurentSeries s) {
    e_[static_cast<size_t>(i) * cols_ + j] = std::move(s);
  }

  int prec() const {
    int p = LaurentSeries::kExact;
    for (auto& s : e_) p = std::min(p, s.prec());
    return p;
  }
  bool is_exact() const { return prec() >= LaurentSeries::kExact; }

  // Minimal valuation over entries that are nonzero at precision (kExact if none).
  int min_val() const {
    int v = LaurentSeries::kExact;
    for (auto& s : e_)
      if (!s.is_zero()) v = std::min(v, s.val());
    return v;
  }
  bool is_zero() const {
    for (auto& s : e_)
      if (!s.is_zero()) return false;
    return true;
  }
  bool is_integral() const { return min_val() >= 0; }

  SeriesMatrix with_prec(int prec) const {
    SeriesMatrix r = *this;
    for (auto& s : r.e_) s = s.truncated(prec);
    return r;
  }

  SeriesMatrix map(const std::function<LaurentSeries(const LaurentSeries&)>& f, Field target = nullptr) const {
    SeriesMatrix r(target ? target : ctx_, rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = f(e_[k]);
    r.normalize();
    return r;
  }

  SeriesMatrix frobenius() const {
    return map([](const LaurentSeries& s) { return s.frobenius(); });
  }
  SeriesMatrix substituted(int m) const {
    return map([m](const LaurentSeries& s) { return s.substituted(m); });
  }
  SeriesMatrix shifted(int k) const {
    return map([k](const LaurentSeries& s) { return s.shifted(k); });
  }
  SeriesMatrix scaled(const LaurentSeries& c) const {
    return map([&c](const LaurentSeries& s) { return s * c; });
  }

  SeriesMatrix transpose() const {
    SeriesMatrix t(ctx_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t.e_[j * rows_ + i] = (*this)(i, j);
    return t;
  }

  SeriesMatrix block(int r0, int c0, int nr, int nc) const {
    SeriesMatrix b(ctx_, nr, nc);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) b.e_[i * nc + j] = (*this)(r0 + i, c0 + j);
    return b;
  }
  SeriesMatrix columns(const std::vector<int>& cs) const {
    SeriesMatrix b(ctx_, rows_, static_cast<int>(cs.size()));
    for (int i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cs.size(); ++j) b.e_[i * cs.size() + j] = (*this)(i, cs[j]);
    return b;
  }
  SeriesMatrix select_rows(const std::vector<int>& rs) const {
    SeriesMatrix b(ctx_, static_cast<int>(rs.size()), cols_);
    for (size_t i = 0; i < rs.size(); ++i)
      for (int j = 0; j < cols_; ++j) b.e_[i * cols_ + j] = (*this)(rs[i], j);
    return b;
  }
  SeriesMatrix hconcat(const SeriesMatrix& o) const {
    if (rows_ != o.rows_) throw DimensionMismatch("horizontal concatenation shape mismatch");
    SeriesMatrix r(ctx_, rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) r.e_[i * r.cols_ + j] = (*this)(i, j);
      for (int j = 0; j < o.cols_; ++j) r.e_[i * r.cols_ + cols_ + j] = o(i, j);
    }
    r.normalize();
    return r;
  }

  friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("series matrix product shape mismatch");
    SeriesMatrix r(a.ctx_, a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j) {
        LaurentSeries acc = LaurentSeries::zero(a.ctx_);
        for (int k = 0; k < a.cols_; ++k) acc = acc + a(i, k) * b(k, j);
        r.e_[i * b.cols_ + j] = acc;
      }
    r.normalize();
    return r;
  }
  friend SeriesMatrix operator+(const SeriesMatrix& a, const SeriesMatrix& b) { return a.zip(b, false); }
  friend SeriesMatrix operator-(const SeriesMatrix& a, const SeriesMatrix& b) { return a.zip(b, true); }

  // Kronecker product; row index i*b.rows + k, column j*b.cols + l.
  friend SeriesMatrix kron(const SeriesMatrix& a, const SeriesMatrix& b) {
    SeriesMatrix r(a.ctx_, a.rows_ * b.rows_, a.cols_ * b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j)
        for (int k = 0; k < b.rows_; ++k)
          for (int l = 0; l < b.cols_; ++l)
            r.e_[(i * b.rows_ + k) * r.cols_ + j * b.cols_ + l] = a(i, j) * b(k, l);
    r.normalize();
    return r;
  }

  // Entrywise agreement at the common precision.
  bool agrees(const SeriesMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (size_t k = 0; k < e_.size(); ++k)
      if (!e_[k].agrees(o.e_[k])) return false;
    return true;
  }

  // Reduction modulo u of an integral matrix.
  FqMatrix reduction() const {
    FqMatrix m(ctx_, rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) {
        const auto& s = (*this)(i, j);
        if (!s.is_zero() && s.val() < 0) throw Error("reduction of a non-integral matrix");
        if (s.prec() <= 0) throw InsufficientPrecision("reduction needs precision >= 1");
        m(i, j) = s.coeff(0);
      }
    return m;
  }

  SeriesMatrix mapped(Field target, const std::vector<Fq>& emb) const {
    return map([&](const LaurentSeries& s) { return s.mapped(target, emb); }, target);
  }

  std::string to_string() const {
    std::string s = "[";
    for (int i = 0; i < rows_; ++i) {
      s += i ? ", [" : "[";
      for (int j = 0; j < cols_; ++j) s += (j ? ", " : "") + (*this)(i, j).to_string();
      s += "]";
    }
    return s + "]";
  }

  // Mutable row/column operations used by elimination routines.
  LaurentSeries& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
  void swap_rows(int a, int b) {
    for (int j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
  }
  void swap_cols(int a, int b) {
    for (int i = 0; i < rows_; ++i) std::swap(at(i, a), at(i, b));
  }
  // row_t -= f * row_s
  void row_axpy(int t, int s, const LaurentSeries& f) {
    for (int j = 0; j < cols_; ++j) at(t, j) = at(t, j) - f * at(s, j);
  }
  // col_t -= f * col_s
  void col_axpy(int t, int s, const LaurentSeries& f) {
    for (int i = 0; i < rows_; ++i) at(i, t) = at(i, t) - f * at(i, s);
  }
  void row_scale(int t, const LaurentSeries& f) {
    for (int j = 0; j < cols_; ++j) at(t, j) = at(t, j) * f;
  }
  void col_scale(int t, const LaurentSeries& f) {
    for (int i = 0; i < rows_; ++i) at(i, t) = at(i, t) * f;
  }

  void normalize() {
    int p = prec();
    if (p >= LaurentSeries::kExact) return;
    for (auto& s : e_) s = s.truncated(p);
  }

 private:
  SeriesMatrix zip(const SeriesMatrix& b, bool sub) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw DimensionMismatch("series matrix sum shape mismatch");
    SeriesMatrix r(ctx_, rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = sub ? e_[k] - b.e_[k] : e_[k] + b.e_[k];
    r.normalize();
    return r;
  }

  Field ctx_ = nullptr;
  int rows_ = 0, cols_ = 0;
  std::vector<LaurentSeries> e_;
};

// Unit part inverse of a pivot: returns x^{-1}, capping exact non-monomials.
inline LaurentSeries pivot_inverse(const LaurentSeries& x) {
  return x.inverse(kExactInverseCap);
}

// Inverse over F_q((u)) by Gauss-Jordan with minimal-valuation pivots.
inline SeriesMatrix inverse(const SeriesMatrix& m) {
  if (m.rows() != m.cols()) throw NonSquare("inverse of a non-square series matrix");
  int n = m.rows();
  SeriesMatrix a = m, inv = SeriesMatrix::identity(m.ctx(), n);
  for (int c = 0; c < n; ++c) {
    int best = -1;
    for (int r = c; r < n; ++r)
      if (!a(r, c).is_zero() && (best < 0 || a(r, c).val() < a(best, c).val())) best = r;
    if (best < 0) throw InsufficientPrecision("matrix is singular at the stored precision");
    a.swap_rows(c, best);
    inv.swap_rows(c, best);
    LaurentSeries pinv = pivot_inverse(a(c, c));
    a.row_scale(c, pinv);
    inv.row_scale(c, pinv);
    for (int r = 0; r < n; ++r) {
      if (r == c || a(r, c).is_zero()) continue;
      LaurentSeries f = a(r, c);
      a.row_axpy(r, c, f);
      inv.row_axpy(r, c, f);
    }
  }
  inv.normalize();
  return inv;
}

// Determinant by cofactor expansion (small sizes only).
inline LaurentSeries determinant(const SeriesMatrix& m) {
  if (m.rows() != m.cols()) throw NonSquare("determinant of a non-square matrix");
  int n = m.rows();
  if (n == 0) return LaurentSeries::one(m.ctx());
  if (n == 1) return m(0, 0);
  LaurentSeries acc = LaurentSeries::zero(m.ctx());
  for (int j = 0; j < n; ++j) {
    if (m(0, j).is_zero() && m(0, j).is_exact()) continue;
    std::vector<int> rs, cs;
    for (int i = 1; i < n; ++i) rs.push_back(i);
    for (int k = 0; k < n; ++k)
      if (k != j) cs.push_back(k);
    LaurentSeries t = m(0, j) * determinant(m.select_rows(rs).columns(cs));
    acc = (j % 2) ? acc - t : acc + t;
  }
  return acc;
}

// Matrix of d x d minors, rows and columns indexed by d-subsets in lexicographic order.
inline std::vector<std::vector<int>> subsets(int n, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == d) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

inline SeriesMatrix compound(const SeriesMatrix& m, int d) {
  auto rs = subsets(m.rows(), d), cs = subsets(m.cols(), d);
  std::vector<LaurentSeries> e;
  for (auto& r : rs)
    for (auto& c : cs) e.push_back(determinant(m.select_rows(r).columns(c)));
  return SeriesMatrix(m.ctx(), static_cast<int>(rs.size()), static_cast<int>(cs.size()), std::move(e));
}

}  // namespace kisinhn
