#pragma once

#include "errors.hpp"
#include "fq.hpp"

#include <algorithm>
#include <climits>
#include <string>
#include <vector>

namespace kisinhn {

// Truncated Laurent series over F_q known modulo u^prec. Coefficients are
// stored from u^val upward with trailing zeros trimmed; missing coefficients
// below prec are zero. The zero series has val == prec. prec == kExact marks
// a series that is known exactly (a Laurent polynomial built in code).
class LaurentSeries {
 public:
  static constexpr int kExact = 1 << 29;

  LaurentSeries() = default;

  static LaurentSeries zero(Field ctx, int prec = kExact) {
    LaurentSeries s;
    s.ctx_ = ctx;
    s.prec_ = clamp(prec);
    s.val_ = s.prec_;
    return s;
  }
  static LaurentSeries constant(Field ctx, Fq c, int prec = kExact) {
    return monomial(ctx, c, 0, prec);
  }
  static LaurentSeries one(Field ctx) { return constant(ctx, 1); }
  static LaurentSeries monomial(Field ctx, Fq c, int k, int prec = kExact) {
    return from_coeffs(ctx, k, {c}, prec);
  }
  // Coefficients of u^val0, u^(val0+1), ...; entries at or beyond prec are dropped.
  static LaurentSeries from_coeffs(Field ctx, int val0, std::vector<Fq> coeffs, int prec = kExact) {
    LaurentSeries s;
    s.ctx_ = ctx;
    s.prec_ = clamp(prec);
    s.val_ = val0;
    s.c_ = std::move(coeffs);
    s.normalize();
    return s;
  }

  Field ctx() const { return ctx_; }
  int prec() const { return prec_; }
  bool is_exact() const { return prec_ >= kExact; }
  bool is_zero() const { return c_.empty(); }
  // Valuation; for a zero-at-precision series this equals prec.
  int val() const { return val_; }
  // Index one past the last stored nonzero coefficient.
  int end() const { return val_ + static_cast<int>(c_.size()); }
  Fq coeff(int k) const {
    if (k >= prec_) throw InsufficientPrecision("coefficient of u^" + std::to_string(k) + " is beyond precision");
    if (k < val_ || k >= end()) return 0;
    return c_[k - val_];
  }
  Fq leading() const { return c_.empty() ? 0 : c_[0]; }
  bool is_monomial() const { return c_.size() == 1; }

  int certified_val() const {
    if (is_zero()) throw InsufficientPrecision("series is zero at precision " + std::to_string(prec_));
    return val_;
  }

  LaurentSeries truncated(int prec) const {
    if (prec >= prec_) return *this;
    return from_coeffs(ctx_, val_, c_, prec);
  }

  LaurentSeries operator-() const {
    LaurentSeries r = *this;
    for (auto& x : r.c_) x = ctx_->neg(x);
    return r;
  }

  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return a.combine(b, false); }
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a.combine(b, true); }

  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    int prec = clamp(std::min(sat_add(a.prec_, b.val_), sat_add(b.prec_, a.val_)));
    if (a.is_zero() || b.is_zero()) return zero(a.ctx_, prec);
    int v = a.val_ + b.val_;
    int len = std::min(static_cast<long>(a.c_.size() + b.c_.size() - 1), static_cast<long>(prec) - v);
    std::vector<Fq> out(std::max(len, 0), 0);
    const FqContext& F = *a.ctx_;
    for (int i = 0; i < static_cast<int>(a.c_.size()) && i < len; ++i) {
      if (a.c_[i] == 0) continue;
      int jmax = std::min(static_cast<int>(b.c_.size()), len - i);
      for (int j = 0; j < jmax; ++j) out[i + j] = F.add(out[i + j], F.mul(a.c_[i], b.c_[j]));
    }
    return from_coeffs(a.ctx_, v, std::move(out), prec);
  }

  LaurentSeries scaled(Fq c) const {
    if (c == 0) return zero(ctx_, prec_);
    LaurentSeries r = *this;
    for (auto& x : r.c_) x = ctx_->mul(x, c);
    return r;
  }

  // Multiplication by u^k.
  LaurentSeries shifted(int k) const {
    LaurentSeries r = *this;
    r.val_ += k;
    if (!is_exact()) r.prec_ += k;
    if (r.is_zero()) r.val_ = r.prec_;
    return r;
  }

  // Substitution u -> u^m (m >= 1); used for phi (m = p) and tame base change.
  LaurentSeries substituted(int m) const {
    LaurentSeries r;
    r.ctx_ = ctx_;
    r.prec_ = is_exact() ? kExact : prec_ * m;
    if (is_zero()) {
      r.val_ = r.prec_;
      return r;
    }
    r.val_ = val_ * m;
    r.c_.assign((c_.size() - 1) * m + 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i * m] = c_[i];
    return r;
  }

  LaurentSeries frobenius() const { return substituted(ctx_->p()); }

  // Coefficient-wise map into another field.
  LaurentSeries mapped(Field target, const std::vector<Fq>& map) const {
    LaurentSeries r = *this;
    r.ctx_ = target;
    for (auto& x : r.c_) x = map[x];
    return r;
  }

  // Multiplicative inverse; rel_cap bounds the relative precision when the input is exact.
  LaurentSeries inverse(int rel_cap = -1) const {
    if (is_zero()) throw InsufficientPrecision("cannot invert a series that is zero at precision");
    if (is_monomial() && is_exact()) return monomial(ctx_, ctx_->inv(c_[0]), -val_);
    int rel = is_exact() ? rel_cap : prec_ - val_;
    if (rel < 0) throw InsufficientPrecision("inverse of an exact non-monomial series needs a precision cap");
    const FqContext& F = *ctx_;
    std::vector<Fq> b(rel, 0);
    Fq b0 = F.inv(c_[0]);
    for (int k = 0; k < rel; ++k) {
      Fq acc = (k == 0) ? 1 : 0;
      for (int i = 1; i <= k && i < static_cast<int>(c_.size()); ++i) acc = F.sub(acc, F.mul(c_[i], b[k - i]));
      b[k] = F.mul(acc, b0);
    }
    return from_coeffs(ctx_, -val_, std::move(b), -val_ + rel);
  }

  // Equality of the known parts (coefficients below the smaller precision).
  bool agrees(const LaurentSeries& o) const {
    int P = std::min(prec_, o.prec_);
    if (is_zero() && o.is_zero()) return true;
    int lo = is_zero() ? o.val_ : o.is_zero() ? val_ : std::min(val_, o.val_);
    int hi = std::min(P, std::max(is_zero() ? lo : end(), o.is_zero() ? lo : o.end()));
    for (int k = lo; k < hi; ++k)
      if (get(k) != o.get(k)) return false;
    return true;
  }
  // Identical representation including precision.
  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
    return a.ctx_ == b.ctx_ && a.prec_ == b.prec_ && a.val_ == b.val_ && a.c_ == b.c_;
  }

  const std::vector<Fq>& coeffs() const { return c_; }

  // Text form as a Laurent polynomial, e.g. "(a+1)*u^-1 + a*u^2"; precision not printed.
  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      int k = val_ + static_cast<int>(i);
      if (!s.empty()) s += " + ";
      std::string c = ctx_->format(c_[i]);
      if (k == 0) {
        s += c;
        continue;
      }
      if (c != "1") s += (ctx_->is_compound(c_[i]) ? "(" + c + ")" : c) + "*";
      s += "u";
      if (k != 1) s += "^" + std::to_string(k);
    }
    return s;
  }

 private:
  static int clamp(long x) { return x >= kExact ? kExact : static_cast<int>(x); }
  static long sat_add(long a, long b) { return (a >= kExact || b >= kExact) ? kExact : a + b; }

  Fq get(int k) const { return (k < val_ || k >= end()) ? 0 : c_[k - val_]; }

  LaurentSeries combine(const LaurentSeries& b, bool subtract) const {
    const LaurentSeries& a = *this;
    int prec = std::min(a.prec_, b.prec_);
    if (a.is_zero() && b.is_zero()) return zero(ctx_, prec);
    int lo = a.is_zero() ? b.val_ : b.is_zero() ? a.val_ : std::min(a.val_, b.val_);
    int hi = std::min(prec, std::max(a.is_zero() ? lo : a.end(), b.is_zero() ? lo : b.end()));
    if (hi <= lo) return zero(ctx_, prec);
    std::vector<Fq> out(hi - lo);
    const FqContext& F = *ctx_;
    for (int k = lo; k < hi; ++k) {
      Fq y = b.get(k);
      out[k - lo] = subtract ? F.sub(a.get(k), y) : F.add(a.get(k), y);
    }
    return from_coeffs(ctx_, lo, std::move(out), prec);
  }

  void normalize() {
    if (!is_exact() && val_ < prec_ && end() > prec_) c_.resize(prec_ - val_);
    if (!is_exact() && val_ >= prec_) c_.clear();
    size_t lead = 0;
    while (lead < c_.size() && c_[lead] == 0) ++lead;
    if (lead == c_.size()) {
      c_.clear();
      val_ = prec_;
      return;
    }
    if (lead) c_.erase(c_.begin(), c_.begin() + lead);
    val_ += static_cast<int>(lead);
    while (c_.back() == 0) c_.pop_back();
  }

  Field ctx_ = nullptr;
  int val_ = kExact;
  int prec_ = kExact;
  std::vector<Fq> c_;
};

inline LaurentSeries frobenius_substitute(const LaurentSeries& s) { return s.frobenius(); }

}  // namespace kisinhn
