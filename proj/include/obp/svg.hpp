#pragma once

/**
 * @file svg.hpp
 * @brief Deterministic SVG drawing of a rectangular decomposition.
 *
 * Left panel: the rectangles stacked to the left of J in the order given by
 * sigma, with ticks at the singularities of the y edges. Right panel: R_1..R_n
 * stacked to the right of J with their strands, ticks at the x_i, and an
 * optional shaded orbit. The NS edge is drawn in purple in both panels.
 */

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "obp/admissibility.hpp"
#include "obp/core.hpp"
#include "obp/error.hpp"
#include "obp/geometry.hpp"
#include "obp/spectral.hpp"

namespace obp {

struct SvgOptions {
  std::optional<int> highlight_orbit;
  double max_width = 800.0;        ///< units for the longest rectangle
  double height_per_rect = 100.0;  ///< units per rectangle when sum h = 1
};

/// Edge lengths expressed for the instance as given, whichever side it is.
struct OrientedEdges {
  std::vector<double> x;  ///< x[i-1], i = 1..n-1
  std::vector<double> y;  ///< y[j-1], j = 1..n-1
};

inline OrientedEdges oriented_edges(const Surface& surface, bool conjugated) {
  const int n = surface.n();
  const auto& e = surface.edges();
  OrientedEdges out;
  for (int i = 1; i <= n - 1; ++i) {
    // The conjugate swaps the two sides of J.
    out.x.push_back(conjugated ? e.y_at(i) : e.x_at(i));
    out.y.push_back(conjugated ? e.x_at(i) : e.y_at(i));
  }
  return out;
}

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

}  // namespace detail

inline std::string render_svg(const ObpInstance& inst, const SvgOptions& opt = {}) {
  const Combinatorics comb(inst);
  const auto adm = check_admissible(comb);
  if (!adm.overall) throw Error(ErrorCode::NotRightAdmissible, "instance is not admissible");
  const int n = inst.n();
  if (opt.highlight_orbit && (*opt.highlight_orbit < 1 || *opt.highlight_orbit > n))
    throw Error(ErrorCode::InvalidInstance, "highlighted orbit must be in 1..n");

  const bool conjugated = *adm.side == Side::Left;
  const Surface surface(conjugated ? invert_obp(inst) : inst, Normalization::SumHOne);
  const auto edges = oriented_edges(surface, conjugated);
  const auto pd = perron(build_matrix(comb.dec, comb.blocks), Normalization::SumHOne);
  const auto& sigma = inst.sigma();
  const Permutation inv = sigma.inverse();
  auto l = [&](int i) { return pd.l[i - 1]; };
  auto h = [&](int i) { return pd.h[i - 1]; };

  double max_l = 0.0;
  for (double v : pd.l) max_l = std::max(max_l, v);
  const double sx = opt.max_width / max_l;
  const double sy = opt.height_per_rect * n;
  const double margin = 20.0;
  const double top = 40.0;
  const double j_left = margin + opt.max_width;
  const double j_right = j_left + 2.0 * margin + 20.0;
  const double width = j_right + opt.max_width + margin;
  const double height = top + sy + margin;

  std::vector<double> cum(n + 1, 0.0), left_cum(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) cum[i] = cum[i - 1] + h(i);
  for (int p = 1; p <= n; ++p) left_cum[p] = left_cum[p - 1] + h(inv(p));
  const int ns_rect = *adm.side == Side::Right ? n : inv(n);

  std::string out;
  auto line = [&](double x1, double y1, double x2, double y2, const char* style) {
    out += "<line x1=\"" + detail::num(x1) + "\" y1=\"" + detail::num(y1) + "\" x2=\"" + detail::num(x2) +
           "\" y2=\"" + detail::num(y2) + "\" " + style + "/>\n";
  };
  auto rect = [&](double x, double y, double w, double hh, const char* style) {
    out += "<rect x=\"" + detail::num(x) + "\" y=\"" + detail::num(y) + "\" width=\"" + detail::num(w) +
           "\" height=\"" + detail::num(hh) + "\" " + style + "/>\n";
  };
  auto text = [&](double x, double y, const std::string& s) {
    out += "<text x=\"" + detail::num(x) + "\" y=\"" + detail::num(y) + "\" font-size=\"12\">" + s + "</text>\n";
  };
  auto circle = [&](double x, double y) {
    out += "<circle cx=\"" + detail::num(x) + "\" cy=\"" + detail::num(y) + "\" r=\"3.000\" fill=\"red\"/>\n";
  };

  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::num(width) + "\" height=\"" +
         detail::num(height) + "\" viewBox=\"0 0 " + detail::num(width) + " " + detail::num(height) + "\">\n";
  std::string title = "sigma=(";
  for (int i = 1; i <= n; ++i) title += std::to_string(sigma(i)) + (i < n ? "," : ")");
  title += " k=(";
  for (int i = 1; i <= n; ++i) title += std::to_string(inst.k(i)) + (i < n ? "," : ")");
  title += " side=" + std::string(to_string(*adm.side));
  text(margin, 20.0, title);

  // Left of J.
  out += "<g id=\"left\">\n";
  for (int p = 1; p <= n; ++p) {
    const int r = inv(p);
    const double y = top + left_cum[p - 1] * sy;
    rect(j_left - l(r) * sx, y, l(r) * sx, h(r) * sy, "fill=\"none\" stroke=\"black\"");
    text(j_left - l(r) * sx + 4.0, y + 14.0, "R" + std::to_string(r));
  }
  for (int j = 1; j <= n - 1; ++j) circle(j_left - edges.y[j - 1] * sx, top + left_cum[j] * sy);
  {
    const double y = top + left_cum[sigma(ns_rect)] * sy;
    line(j_left - l(ns_rect) * sx, y, j_left, y, "stroke=\"purple\" stroke-width=\"3\"");
  }
  line(j_left, top, j_left, top + sy, "stroke=\"blue\" stroke-width=\"2\"");
  out += "</g>\n";

  // Right of J.
  out += "<g id=\"right\">\n";
  if (opt.highlight_orbit) {
    const int o = *opt.highlight_orbit;
    for (int s : comb.dec.orbit(o)) {
      const int b = comb.blocks.beta(s);
      double offset = 0.0;
      for (int t = comb.blocks.top(b); t < s; ++t) offset += h(comb.dec.slot(t).orbit) / pd.lambda;
      rect(j_right, top + (cum[b - 1] + offset) * sy, l(b) * sx, h(o) / pd.lambda * sy,
           "fill=\"#999999\" stroke=\"none\"");
    }
  }
  for (int i = 1; i <= n; ++i) {
    const double y = top + cum[i - 1] * sy;
    rect(j_right, y, l(i) * sx, h(i) * sy, "fill=\"none\" stroke=\"black\"");
    double offset = 0.0;
    for (int s = comb.blocks.top(i); s <= comb.blocks.bottom(i); ++s) {
      if (s > comb.blocks.top(i)) line(j_right, y + offset * sy, j_right + l(i) * sx, y + offset * sy,
                                       "stroke=\"#cccccc\" stroke-width=\"0.5\"");
      offset += h(comb.dec.slot(s).orbit) / pd.lambda;
    }
    text(j_right + 4.0, y + 14.0, "R" + std::to_string(i));
  }
  for (int i = 1; i <= n - 1; ++i) circle(j_right + edges.x[i - 1] * sx, top + cum[i] * sy);
  {
    const double y = top + cum[ns_rect] * sy;
    line(j_right, y, j_right + l(ns_rect) * sx, y, "stroke=\"purple\" stroke-width=\"3\"");
  }
  line(j_right, top, j_right, top + sy, "stroke=\"blue\" stroke-width=\"2\"");
  out += "</g>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace obp
