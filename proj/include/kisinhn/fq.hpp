#pragma once

#include "errors.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace kisinhn {

// An element of F_q encoded as sum c_i p^i, where c_i is the coefficient of a^i.
using Fq = std::uint16_t;

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

namespace detail {

using Poly = std::vector<int>;  // coefficients low degree first, over F_p

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int inv_mod(int a, int p) {
  int r = 1;
  for (int e = p - 2; e > 0; e >>= 1, a = a * a % p)
    if (e & 1) r = r * a % p;
  return r;
}

inline Poly poly_mod(Poly f, const Poly& g, int p) {
  trim(f);
  int dg = static_cast<int>(g.size()) - 1;
  int lead_inv = inv_mod(g.back(), p);
  while (static_cast<int>(f.size()) - 1 >= dg) {
    int shift = static_cast<int>(f.size()) - 1 - dg;
    int c = f.back() * lead_inv % p;
    for (int i = 0; i <= dg; ++i) f[shift + i] = ((f[shift + i] - c * g[i]) % p + p) % p;
    trim(f);
  }
  return f;
}

// Trial division by every monic polynomial of degree 1..r/2.
inline bool is_irreducible(const Poly& f, int p) {
  int r = static_cast<int>(f.size()) - 1;
  for (int d = 1; 2 * d <= r; ++d) {
    long total = 1;
    for (int i = 0; i < d; ++i) total *= p;
    for (long code = 0; code < total; ++code) {
      Poly g(d + 1, 0);
      long c = code;
      for (int i = 0; i < d; ++i, c /= p) g[i] = static_cast<int>(c % p);
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

// Least monic irreducible of degree r; coefficients compared low degree first.
inline Poly least_irreducible(int p, int r) {
  long total = 1;
  for (int i = 0; i < r; ++i) total *= p;
  // Lexicographic low-degree-first order: c_0 is the most significant key.
  for (long code = 0; code < total; ++code) {
    Poly f(r + 1, 0);
    long c = code;
    for (int i = r - 1; i >= 0; --i, c /= p) f[i] = static_cast<int>(c % p);
    f[r] = 1;
    if (r == 1 || is_irreducible(f, p)) return f;
  }
  throw Error("no irreducible polynomial found");
}

}  // namespace detail

class FqContext {
 public:
  static constexpr int kMaxOrder = 1024;

  FqContext(int p, int r) : p_(p), r_(r) {
    if (!is_prime(p)) throw Error("characteristic " + std::to_string(p) + " is not prime");
    if (r < 1) throw Error("extension degree must be positive");
    long q = 1;
    for (int i = 0; i < r; ++i) {
      q *= p;
      if (q > kMaxOrder) throw ScaleTooLarge("field order exceeds " + std::to_string(kMaxOrder));
    }
    q_ = static_cast<int>(q);
    modulus_ = detail::least_irreducible(p, r);
    build_tables();
  }

  int p() const { return p_; }
  int r() const { return r_; }
  int q() const { return q_; }
  const std::vector<int>& modulus() const { return modulus_; }

  Fq add(Fq a, Fq b) const { return add_[a * q_ + b]; }
  Fq sub(Fq a, Fq b) const { return add_[a * q_ + neg_[b]]; }
  Fq neg(Fq a) const { return neg_[a]; }
  Fq mul(Fq a, Fq b) const { return mul_[a * q_ + b]; }
  Fq inv(Fq a) const {
    if (a == 0) throw Error("division by zero in F_q");
    return inv_[a];
  }
  Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }
  Fq pow(Fq a, long e) const {
    Fq r = 1;
    for (; e > 0; e >>= 1, a = mul(a, a))
      if (e & 1) r = mul(r, a);
    return r;
  }
  Fq from_int(long v) const { return static_cast<Fq>(((v % p_) + p_) % p_); }
  Fq generator() const { return r_ == 1 ? from_int(0) : static_cast<Fq>(p_); }

  // Digits of x as a polynomial in a.
  std::vector<int> digits(Fq x) const {
    std::vector<int> d(r_);
    for (int i = 0; i < r_; ++i, x /= p_) d[i] = x % p_;
    return d;
  }
  Fq from_digits(const std::vector<int>& d) const {
    detail::Poly f(d.begin(), d.end());
    for (auto& c : f) c = ((c % p_) + p_) % p_;
    f = detail::poly_mod(f, modulus_, p_);
    long v = 0;
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) v = v * p_ + f[i];
    return static_cast<Fq>(v);
  }

  // Text form: polynomial in a with nonnegative integer coefficients below p.
  std::string format(Fq x) const {
    if (x == 0) return "0";
    auto d = digits(x);
    std::string s;
    for (int i = r_ - 1; i >= 0; --i) {
      if (d[i] == 0) continue;
      if (!s.empty()) s += "+";
      if (i == 0) {
        s += std::to_string(d[i]);
      } else {
        if (d[i] != 1) s += std::to_string(d[i]) + "*";
        s += "a";
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }
  bool is_compound(Fq x) const {
    auto d = digits(x);
    int nz = 0;
    for (int c : d) nz += c != 0;
    return nz > 1;
  }

 private:
  void build_tables() {
    add_.assign(q_ * q_, 0);
    mul_.assign(q_ * q_, 0);
    neg_.assign(q_, 0);
    inv_.assign(q_, 0);
    std::vector<std::vector<int>> dig(q_);
    for (int x = 0; x < q_; ++x) dig[x] = digits(static_cast<Fq>(x));
    for (int x = 0; x < q_; ++x) {
      std::vector<int> n(r_);
      for (int i = 0; i < r_; ++i) n[i] = (p_ - dig[x][i]) % p_;
      neg_[x] = encode(n);
      for (int y = 0; y < q_; ++y) {
        std::vector<int> s(r_);
        for (int i = 0; i < r_; ++i) s[i] = (dig[x][i] + dig[y][i]) % p_;
        add_[x * q_ + y] = encode(s);
        detail::Poly prod(2 * r_, 0);
        for (int i = 0; i < r_; ++i)
          for (int j = 0; j < r_; ++j) prod[i + j] = (prod[i + j] + dig[x][i] * dig[y][j]) % p_;
        prod = detail::poly_mod(prod, modulus_, p_);
        prod.resize(r_, 0);
        mul_[x * q_ + y] = encode(prod);
      }
    }
    for (int x = 1; x < q_; ++x)
      for (int y = 1; y < q_; ++y)
        if (mul_[x * q_ + y] == 1) inv_[x] = static_cast<Fq>(y);
  }
  Fq encode(const std::vector<int>& d) const {
    long v = 0;
    for (int i = r_ - 1; i >= 0; --i) v = v * p_ + d[i];
    return static_cast<Fq>(v);
  }

  int p_, r_, q_;
  std::vector<int> modulus_;
  std::vector<Fq> add_, mul_, neg_, inv_;
};

using Field = const FqContext*;

// Interned contexts; the returned pointer lives for the whole program.
inline Field field(int p, int r = 1) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<FqContext>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = registry[{p, r}];
  if (!slot) slot = std::make_unique<FqContext>(p, r);
  return slot.get();
}

// Field of order q (q must be a prime power).
inline Field field_of_order(int q) {
  for (int p = 2; p <= q; ++p) {
    if (q % p) continue;
    if (!is_prime(p)) break;
    int r = 0;
    long v = 1;
    while (v < q) v *= p, ++r;
    if (v != q) break;
    return field(p, r);
  }
  throw Error("q = " + std::to_string(q) + " is not a prime power");
}

// Embedding F_q -> F_{q^m}: the generator goes to the least root of its modulus.
inline std::vector<Fq> embedding(Field small, Field big) {
  if (small->p() != big->p() || big->r() % small->r() != 0)
    throw Error("no embedding between the given fields");
  const auto& f = small->modulus();
  Fq root = 0;
  bool found = false;
  for (int x = 0; x < big->q() && !found; ++x) {
    Fq acc = 0;
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
      acc = big->add(big->mul(acc, static_cast<Fq>(x)), big->from_int(f[i]));
    if (acc == 0) root = static_cast<Fq>(x), found = true;
  }
  if (!found) throw Error("modulus has no root in the extension");
  std::vector<Fq> map(small->q());
  for (int x = 0; x < small->q(); ++x) {
    auto d = small->digits(static_cast<Fq>(x));
    Fq acc = 0;
    for (int i = small->r() - 1; i >= 0; --i)
      acc = big->add(big->mul(acc, root), big->from_int(d[i]));
    map[x] = acc;
  }
  return map;
}

}  // namespace kisinhn
