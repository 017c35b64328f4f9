#pragma once

#include "errors.hpp"
#include "fq.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace kisinhn {

// Dense matrix over F_q, row-major.
struct FqMatrix {
  Field ctx = nullptr;
  int rows = 0, cols = 0;
  std::vector<Fq> a;

  FqMatrix() = default;
  FqMatrix(Field f, int r, int c) : ctx(f), rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

  static FqMatrix identity(Field f, int n) {
    FqMatrix m(f, n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  Fq& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  Fq operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  std::vector<Fq> row(int i) const { return {a.begin() + i * cols, a.begin() + (i + 1) * cols}; }

  friend bool operator==(const FqMatrix& x, const FqMatrix& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
  friend bool operator<(const FqMatrix& x, const FqMatrix& y) {
    if (x.rows != y.rows) return x.rows < y.rows;
    if (x.cols != y.cols) return x.cols < y.cols;
    return x.a < y.a;
  }

  friend FqMatrix operator*(const FqMatrix& x, const FqMatrix& y) {
    if (x.cols != y.rows) throw DimensionMismatch("matrix product shape mismatch");
    const FqContext& F = *x.ctx;
    FqMatrix r(x.ctx, x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int k = 0; k < x.cols; ++k) {
        Fq c = x(i, k);
        if (!c) continue;
        for (int j = 0; j < y.cols; ++j) r(i, j) = F.add(r(i, j), F.mul(c, y(k, j)));
      }
    return r;
  }

  FqMatrix transpose() const {
    FqMatrix t(ctx, cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // Stack rows of other below this one.
  FqMatrix stacked(const FqMatrix& o) const {
    if (rows == 0) return o;
    if (o.rows == 0) return *this;
    if (cols != o.cols) throw DimensionMismatch("row stacking shape mismatch");
    FqMatrix r = *this;
    r.rows += o.rows;
    r.a.insert(r.a.end(), o.a.begin(), o.a.end());
    return r;
  }

  // In-place reduced row echelon form; returns pivot columns.
  std::vector<int> rref() {
    const FqContext& F = *ctx;
    std::vector<int> piv;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
      int s = r;
      while (s < rows && (*this)(s, c) == 0) ++s;
      if (s == rows) continue;
      if (s != r)
        for (int j = 0; j < cols; ++j) std::swap((*this)(s, j), (*this)(r, j));
      Fq inv = F.inv((*this)(r, c));
      for (int j = 0; j < cols; ++j) (*this)(r, j) = F.mul((*this)(r, j), inv);
      for (int i = 0; i < rows; ++i) {
        if (i == r) continue;
        Fq f = (*this)(i, c);
        if (!f) continue;
        for (int j = 0; j < cols; ++j) (*this)(i, j) = F.sub((*this)(i, j), F.mul(f, (*this)(r, j)));
      }
      piv.push_back(c);
      ++r;
    }
    return piv;
  }

  int rank() const {
    FqMatrix t = *this;
    return static_cast<int>(t.rref().size());
  }

  // Basis of {x : M x = 0}, as columns of the returned matrix.
  FqMatrix nullspace() const {
    FqMatrix t = *this;
    auto piv = t.rref();
    std::vector<int> is_piv(cols, -1);
    for (size_t k = 0; k < piv.size(); ++k) is_piv[piv[k]] = static_cast<int>(k);
    std::vector<int> free;
    for (int c = 0; c < cols; ++c)
      if (is_piv[c] < 0) free.push_back(c);
    FqMatrix n(ctx, cols, static_cast<int>(free.size()));
    const FqContext& F = *ctx;
    for (size_t k = 0; k < free.size(); ++k) {
      n(free[k], static_cast<int>(k)) = 1;
      for (size_t pr = 0; pr < piv.size(); ++pr)
        n(piv[pr], static_cast<int>(k)) = F.neg(t(static_cast<int>(pr), free[k]));
    }
    return n;
  }

  FqMatrix inverse() const {
    if (rows != cols) throw NonSquare("inverse of a non-square matrix");
    FqMatrix aug(ctx, rows, 2 * cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        aug(i, j) = (*this)(i, j);
        aug(i, cols + j) = i == j;
      }
    auto piv = aug.rref();
    if (static_cast<int>(piv.size()) < rows || piv.back() >= cols) throw Error("singular matrix over F_q");
    FqMatrix r(ctx, rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) r(i, j) = aug(i, cols + j);
    return r;
  }
};

// Subspaces of F_q^n are stored as row spaces in reduced row echelon form.
inline FqMatrix row_space(FqMatrix m) {
  int r = static_cast<int>(m.rref().size());
  FqMatrix out(m.ctx, r, m.cols);
  std::copy(m.a.begin(), m.a.begin() + static_cast<size_t>(r) * m.cols, out.a.begin());
  return out;
}

inline FqMatrix subspace_sum(const FqMatrix& x, const FqMatrix& y) { return row_space(x.stacked(y)); }

inline FqMatrix subspace_intersection(const FqMatrix& x, const FqMatrix& y) {
  if (x.rows == 0 || y.rows == 0) return FqMatrix(x.ctx, 0, x.cols);
  // Solve a x - b y = 0 via the kernel of [x; -y]^T.
  FqMatrix neg_y = y;
  for (auto& v : neg_y.a) v = y.ctx->neg(v);
  FqMatrix k = x.stacked(neg_y).transpose().nullspace();
  FqMatrix coef(x.ctx, k.cols, x.rows);
  for (int c = 0; c < k.cols; ++c)
    for (int i = 0; i < x.rows; ++i) coef(c, i) = k(i, c);
  return row_space(coef * x);
}

inline int intersection_dim(const FqMatrix& x, const FqMatrix& y) {
  return x.rank() + y.rank() - x.stacked(y).rank();
}

inline bool subspace_contains(const FqMatrix& big, const FqMatrix& small) {
  return big.stacked(small).rank() == big.rank();
}

// All subspaces of F_q^n of dimension d, as RREF row spaces, in a fixed order.
inline std::vector<FqMatrix> all_subspaces(Field f, int n, int d) {
  std::vector<FqMatrix> out;
  if (d == 0) {
    out.emplace_back(f, 0, n);
    return out;
  }
  // Choose pivot columns, then free entries to the right of each pivot.
  std::vector<int> piv(d);
  auto rec_pivots = [&](auto&& self, int k, int start) -> void {
    if (k == d) {
      std::vector<std::pair<int, int>> free;
      for (int i = 0; i < d; ++i)
        for (int c = piv[i] + 1; c < n; ++c)
          if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.emplace_back(i, c);
      long total = 1;
      for (size_t t = 0; t < free.size(); ++t) total *= f->q();
      for (long code = 0; code < total; ++code) {
        FqMatrix m(f, d, n);
        for (int i = 0; i < d; ++i) m(i, piv[i]) = 1;
        long c = code;
        for (auto [i, col] : free) {
          m(i, col) = static_cast<Fq>(c % f->q());
          c /= f->q();
        }
        out.push_back(m);
      }
      return;
    }
    for (int c = start; c < n; ++c) {
      piv[k] = c;
      self(self, k + 1, c + 1);
    }
  };
  rec_pivots(rec_pivots, 0, 0);
  return out;
}

// Projective points of F_q^n: vectors whose first nonzero entry is 1.
inline std::vector<std::vector<Fq>> projective_points(Field f, int n) {
  std::vector<std::vector<Fq>> out;
  for (auto& m : all_subspaces(f, n, 1)) out.push_back(m.row(0));
  return out;
}

}  // namespace kisinhn
