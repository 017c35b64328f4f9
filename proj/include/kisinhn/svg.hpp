#pragma once

// SVG plots of polygons over a Hodge polygon.
// Fixed viewBox 0 0 640 480; the plot box is [60, 580] x [40, 400]. One x unit is 520 / n pixels and
// one y unit is 360 / (ymax - ymin) pixels, where the y range covers every drawn vertex.
// The legend sits below the plot, five entries per row.
// Coordinates are computed exactly and rounded to three decimals, so output is byte-stable.

#include "polygon.hpp"
#include "variety.hpp"

#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace kisinhn {

namespace svg {

inline constexpr int kWidth = 640, kHeight = 480;
inline constexpr int kLeft = 60, kRight = 580, kTop = 40, kBottom = 400;

inline const std::vector<std::string>& palette() {
  static const std::vector<std::string> p{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                         "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
  return p;
}

inline std::string fixed3(const Rational& x) {
  BigInt t = floor_div(x * 1000 + Rational(1, 2));
  bool neg = t < 0;
  if (neg) t = -t;
  std::string d = t.str();
  while (d.size() < 4) d = "0" + d;
  std::string s = d.substr(0, d.size() - 3) + "." + d.substr(d.size() - 3);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return neg && s != "0" ? "-" + s : s;
}

inline std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '&') o += "&amp;";
    else if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '"') o += "&quot;";
    else o += c;
  }
  return o;
}

struct Frame {
  Rational xmax, ymin, ymax;
  Rational px(const Rational& x) const { return Rational(kLeft) + x * (kRight - kLeft) / xmax; }
  Rational py(const Rational& y) const { return Rational(kBottom) - (y - ymin) * (kBottom - kTop) / (ymax - ymin); }
};

inline std::string path(const Frame& fr, const Polygon& P) {
  std::string s;
  for (auto& [x, y] : P.vertices()) s += (s.empty() ? "" : " ") + fixed3(fr.px(x)) + "," + fixed3(fr.py(y));
  return s;
}

}  // namespace svg

struct FigureInput {
  std::string title;
  HodgeType nu;
  std::vector<CandidatePolygon> candidates;  // drawn dashed, colored by contact set
  std::vector<Polygon> realized;             // drawn solid, colored by contact set
};

inline std::string render_figure(const FigureInput& in) {
  using namespace svg;
  Polygon hodge = hodge_polygon(in.nu);
  std::vector<std::set<int>> classes = color_classes(in.candidates);
  std::vector<std::set<int>> realized_J;
  for (auto& P : in.realized) {
    realized_J.push_back(component_invariant(P, in.nu));
    if (std::find(classes.begin(), classes.end(), realized_J.back()) == classes.end()) classes.push_back(realized_J.back());
  }
  auto color = [&](const std::set<int>& J) {
    auto k = std::find(classes.begin(), classes.end(), J) - classes.begin();
    return palette()[static_cast<size_t>(k) % palette().size()];
  };

  Frame fr{Rational(static_cast<long>(in.nu.size())), 0, 0};
  auto widen = [&](const Polygon& P) {
    for (auto& [x, y] : P.vertices()) fr.ymin = std::min(fr.ymin, y), fr.ymax = std::max(fr.ymax, y);
  };
  widen(hodge);
  for (auto& c : in.candidates) widen(c.polygon);
  for (auto& P : in.realized) widen(P);
  if (fr.ymax == fr.ymin) fr.ymax += 1;

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\">\n";
  o << "<!-- x: 1 unit = " << fixed3(Rational(kRight - kLeft) / fr.xmax) << "px, y: 1 unit = "
    << fixed3(Rational(kBottom - kTop) / (fr.ymax - fr.ymin)) << "px, y range [" << to_string(fr.ymin) << ", "
    << to_string(fr.ymax) << "] -->\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
    << escape(in.title) << "</text>\n";

  // Axes and integer ticks.
  o << "<g stroke=\"#999\" stroke-width=\"1\">\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\"" << kBottom << "\"/>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kBottom << "\"/>\n";
  o << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">\n";
  for (long x = 0; x <= static_cast<long>(in.nu.size()); ++x)
    o << "<text x=\"" << fixed3(fr.px(x)) << "\" y=\"" << kBottom + 16 << "\" text-anchor=\"middle\">" << x << "</text>\n";
  for (BigInt y = ceil_div(fr.ymin); y <= floor_div(fr.ymax); ++y)
    o << "<text x=\"" << kLeft - 8 << "\" y=\"" << fixed3(fr.py(Rational(y)) + 4) << "\" text-anchor=\"end\">" << y.str()
      << "</text>\n";
  o << "</g>\n";

  for (auto& c : in.candidates)
    o << "<polyline fill=\"none\" stroke=\"" << color(c.J) << "\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\" points=\""
      << path(fr, c.polygon) << "\"/>\n";
  for (size_t i = 0; i < in.realized.size(); ++i)
    o << "<polyline fill=\"none\" stroke=\"" << color(realized_J[i]) << "\" stroke-width=\"3\" points=\""
      << path(fr, in.realized[i]) << "\"/>\n";
  o << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"" << path(fr, hodge) << "\"/>\n";
  for (auto& [x, y] : hodge.vertices())
    o << "<circle cx=\"" << fixed3(fr.px(x)) << "\" cy=\"" << fixed3(fr.py(y)) << "\" r=\"3\" fill=\"black\"/>\n";

  // Legend: one entry per contact set, after the Hodge polygon.
  o << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  auto entry = [&](int k, const std::string& stroke, const std::string& label) {
    int x = kLeft + 104 * (k % 5), y = kBottom + 38 + 18 * (k / 5);
    o << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + 24 << "\" y2=\"" << y << "\" stroke=\"" << stroke
      << "\" stroke-width=\"3\"/><text x=\"" << x + 30 << "\" y=\"" << y + 4 << "\">" << escape(label) << "</text>\n";
  };
  entry(0, "black", "Hodge");
  for (size_t k = 0; k < classes.size(); ++k) entry(static_cast<int>(k) + 1, color(classes[k]), "J = " + format_set(classes[k]));
  o << "</g>\n</svg>\n";
  return o.str();
}

}  // namespace kisinhn
