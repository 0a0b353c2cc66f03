#pragma once

#include <sstream>

#include "tropic/polytope.hpp"

namespace tropic {

struct SvgItem {
  Polytope shape;
  std::string label;
  double opacity = 0.35;
};

/// Static SVG of polytopes of ambient dimension <= 2, or of the coordinate pair `axes`.
/// Coordinates are mapped into a fixed 400x400 canvas with y pointing up.
inline std::string plotSvg(const std::vector<SvgItem>& items, std::optional<std::pair<size_t, size_t>> axes = std::nullopt) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n";
  out << "<rect width=\"400\" height=\"400\" fill=\"white\"/>\n";
  if (items.empty()) {
    out << "</svg>\n";
    return out.str();
  }
  auto project = [&](const QVector& v) -> std::pair<double, double> {
    if (axes) return {v.at(axes->first).get_d(), v.at(axes->second).get_d()};
    if (v.size() == 1) return {v[0].get_d(), 0.0};
    return {v[0].get_d(), v[1].get_d()};
  };
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& it : items) {
    if (it.shape.ambientDim() > 2 && !axes) throw ValidationError("plotting needs dimension at most 2 or a projection");
    for (const auto& v : it.shape.vertices()) {
      auto [x, y] = project(v);
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  double span = std::max({x1 - x0, y1 - y0, 1e-9});
  auto px = [&](double x) { return 20 + 360 * (x - x0) / span; };
  auto py = [&](double y) { return 380 - 360 * (y - y0) / span; };
  out.setf(std::ios::fixed);
  out.precision(3);
  for (const auto& it : items) {
    const auto& p = it.shape;
    std::vector<std::pair<double, double>> pts;
    for (const auto& v : p.vertices()) pts.push_back(project(v));
    if (p.dim() == 2 && !axes) {
      // order vertices around the centroid
      double cx = 0, cy = 0;
      for (auto [x, y] : pts) cx += x, cy += y;
      cx /= pts.size();
      cy /= pts.size();
      std::sort(pts.begin(), pts.end(), [&](auto a, auto b) {
        return std::atan2(a.second - cy, a.first - cx) < std::atan2(b.second - cy, b.first - cx);
      });
      out << "<polygon points=\"";
      for (size_t i = 0; i < pts.size(); ++i) out << (i ? " " : "") << px(pts[i].first) << "," << py(pts[i].second);
      out << "\" fill=\"steelblue\" fill-opacity=\"" << it.opacity << "\" stroke=\"black\" stroke-width=\"1\">";
    } else if (pts.size() >= 2) {
      std::sort(pts.begin(), pts.end());
      out << "<line x1=\"" << px(pts.front().first) << "\" y1=\"" << py(pts.front().second) << "\" x2=\""
          << px(pts.back().first) << "\" y2=\"" << py(pts.back().second) << "\" stroke=\"black\" stroke-width=\"2\">";
    } else {
      out << "<circle cx=\"" << px(pts[0].first) << "\" cy=\"" << py(pts[0].second) << "\" r=\"3\" fill=\"black\">";
    }
    if (!it.label.empty()) out << "<title>" << it.label << "</title>";
    out << (p.dim() == 2 && !axes ? "</polygon>\n" : pts.size() >= 2 ? "</line>\n" : "</circle>\n");
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace tropic
