#pragma once

#include "rational.hpp"

#include <vector>

namespace kisinhn {

// Euclidean projection of y onto the cone x_1 <= x_2 <= ... <= x_k (pool adjacent violators).
inline std::vector<Rational> isotonic_projection(const std::vector<Rational>& y) {
  struct Block {
    Rational sum;
    int len;
  };
  std::vector<Block> st;
  for (auto& v : y) {
    st.push_back({v, 1});
    while (st.size() > 1) {
      auto& a = st[st.size() - 2];
      auto& b = st.back();
      // merge while mean(a) > mean(b)
      if (a.sum * b.len <= b.sum * a.len) break;
      a.sum += b.sum;
      a.len += b.len;
      st.pop_back();
    }
  }
  std::vector<Rational> out;
  for (auto& b : st)
    for (int i = 0; i < b.len; ++i) out.push_back(b.sum / b.len);
  return out;
}

// max over nonzero monotone x of <c, x> / |x|, as signed square; the maximizer is the projection of c.
// Returns 0 (and an all-zero maximizer) when no monotone x has a positive pairing.
struct ConeMaximum {
  Rational value2;
  std::vector<Rational> maximizer;
};

inline ConeMaximum monotone_cone_maximum(const std::vector<Rational>& c) {
  ConeMaximum out;
  out.maximizer = isotonic_projection(c);
  for (auto& x : out.maximizer) out.value2 += x * x;
  return out;
}

}  // namespace kisinhn
