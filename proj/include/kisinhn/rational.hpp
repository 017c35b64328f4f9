#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace kisinhn {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline BigInt num(const Rational& x) { return boost::multiprecision::numerator(x); }
inline BigInt den(const Rational& x) { return boost::multiprecision::denominator(x); }

inline std::string to_string(const Rational& x) {
  if (den(x) == 1) return num(x).str();
  return num(x).str() + "/" + den(x).str();
}

inline BigInt floor_div(const Rational& x) {
  BigInt n = num(x), d = den(x);
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

inline BigInt ceil_div(const Rational& x) { return -floor_div(-x); }

inline bool is_integer(const Rational& x) { return den(x) == 1; }

inline int sign(const Rational& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

}  // namespace kisinhn
