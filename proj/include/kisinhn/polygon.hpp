#pragma once

#include "errors.hpp"
#include "rational.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace kisinhn {

using Point = std::pair<Rational, Rational>;

// Convex piecewise-linear function given by its breakpoints; slopes strictly increase.
class Polygon {
 public:
  Polygon() = default;

  // Lower convex hull of a point cloud. Collinear interior points are dropped.
  static Polygon lower_hull(std::vector<Point> pts) {
    if (pts.empty()) throw Error("hull of an empty cloud");
    std::sort(pts.begin(), pts.end());
    std::vector<Point> h;
    for (const auto& q : pts) {
      if (!h.empty() && h.back().first == q.first) continue;  // keep the lowest y per x
      while (h.size() >= 2 && !turns_up(h[h.size() - 2], h.back(), q)) h.pop_back();
      h.push_back(q);
    }
    Polygon P;
    P.v_ = std::move(h);
    return P;
  }

  // Polygon through the given vertices, which must already be convex.
  static Polygon from_vertices(std::vector<Point> pts) {
    Polygon P = lower_hull(pts);
    if (P.v_.size() != dedup_x(pts)) throw Error("vertices do not form a convex polygon");
    return P;
  }

  const std::vector<Point>& vertices() const { return v_; }
  Rational x_begin() const { return v_.front().first; }
  Rational x_end() const { return v_.back().first; }
  Point endpoint() const { return v_.back(); }
  int segments() const { return static_cast<int>(v_.size()) - 1; }

  std::vector<Rational> slopes() const {
    std::vector<Rational> s;
    for (size_t i = 1; i < v_.size(); ++i) s.push_back((v_[i].second - v_[i - 1].second) / (v_[i].first - v_[i - 1].first));
    return s;
  }
  // Horizontal lengths of the segments.
  std::vector<Rational> lengths() const {
    std::vector<Rational> s;
    for (size_t i = 1; i < v_.size(); ++i) s.push_back(v_[i].first - v_[i - 1].first);
    return s;
  }
  // Slope of each unit interval; breakpoints must have integer x.
  std::vector<Rational> unit_slopes() const {
    std::vector<Rational> out;
    auto s = slopes();
    auto l = lengths();
    for (size_t i = 0; i < s.size(); ++i) {
      if (!is_integer(l[i])) throw Error("unit slopes need integer breakpoints");
      for (BigInt k = 0; k < num(l[i]); ++k) out.push_back(s[i]);
    }
    return out;
  }

  Rational operator()(const Rational& x) const {
    if (x < x_begin() || x > x_end()) throw Error("polygon evaluated outside its domain");
    for (size_t i = 1; i < v_.size(); ++i)
      if (x <= v_[i].first) {
        const auto& a = v_[i - 1];
        const auto& b = v_[i];
        return a.second + (b.second - a.second) * (x - a.first) / (b.first - a.first);
      }
    return v_.back().second;
  }

  // this >= other on the common domain; checked at all breakpoints of both.
  bool lies_above(const Polygon& other) const {
    for (const auto& pt : v_)
      if (pt.first >= other.x_begin() && pt.first <= other.x_end() && pt.second < other(pt.first)) return false;
    for (const auto& pt : other.v_)
      if (pt.first >= x_begin() && pt.first <= x_end() && (*this)(pt.first) < pt.second) return false;
    return true;
  }

  Polygon scaled(const Rational& sx, const Rational& sy) const {
    Polygon P = *this;
    for (auto& pt : P.v_) pt = {pt.first * sx, pt.second * sy};
    return P;
  }

  friend bool operator==(const Polygon& a, const Polygon& b) { return a.v_ == b.v_; }
  friend bool operator<(const Polygon& a, const Polygon& b) { return a.v_ < b.v_; }

  std::string to_string() const {
    std::string s;
    for (const auto& pt : v_) s += (s.empty() ? "" : " ") + ("(" + kisinhn::to_string(pt.first) + "," + kisinhn::to_string(pt.second) + ")");
    return s;
  }

 private:
  // True when b lies strictly below the chord from a to c.
  static bool turns_up(const Point& a, const Point& b, const Point& c) {
    return (b.second - a.second) * (c.first - a.first) < (c.second - a.second) * (b.first - a.first);
  }
  static size_t dedup_x(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end());
    size_t n = 0;
    for (size_t i = 0; i < pts.size(); ++i)
      if (i == 0 || pts[i].first != pts[i - 1].first) ++n;
    return n;
  }

  std::vector<Point> v_;
};

// Partial-sum polygon of an increasing integer vector.
inline Polygon hodge_polygon(const std::vector<int>& nu) {
  std::vector<Point> pts{{0, 0}};
  Rational s = 0;
  for (size_t i = 0; i < nu.size(); ++i) {
    s += nu[i];
    pts.emplace_back(static_cast<int>(i + 1), s);
  }
  return Polygon::lower_hull(pts);
}

}  // namespace kisinhn
