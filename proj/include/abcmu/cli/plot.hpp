// Copyright 2026 The abcmu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "abcmu/diagnostics/ash.hpp"

namespace abcmu::cli {

/// Viridis colour map, linear between 11 stops; t is clamped to [0, 1].
inline std::string viridis(double t) {
  static constexpr std::array<std::array<int, 3>, 11> stops{{{68, 1, 84},
                                                             {72, 36, 117},
                                                             {65, 68, 135},
                                                             {53, 95, 141},
                                                             {42, 120, 142},
                                                             {33, 145, 140},
                                                             {34, 168, 132},
                                                             {68, 191, 112},
                                                             {122, 209, 81},
                                                             {189, 223, 38},
                                                             {253, 231, 37}}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const double pos = t * 10.0;
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(pos), 9);
  const double f = pos - static_cast<double>(i);
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) {
    rgb[c] = static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c])));
  }
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

/// SVG heatmap of an error density. Cells are coloured by density
/// relative to the maximum; the origin (zero error) is marked with a
/// cross when it lies inside the grid.
inline std::string render_heatmap_svg(const diagnostics::AshGrid2D& grid, const std::string& x_name,
                                      const std::string& y_name) {
  constexpr double kLeft = 100, kTop = 30, kPlot = 420, kBar = 16, kWidth = 640, kHeight = 520;
  const double x0 = grid.x_edges.front();
  const double x1 = grid.x_edges.back();
  const double y0 = grid.y_edges.front();
  const double y1 = grid.y_edges.back();
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * kPlot; };
  auto py = [&](double y) { return kTop + kPlot - (y - y0) / (y1 - y0) * kPlot; };
  const double dmax = *std::max_element(grid.density.begin(), grid.density.end());
  char buf[256];
  std::ostringstream svg;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" viewBox=\"0 0 %g %g\" "
                "font-family=\"sans-serif\" font-size=\"12\">\n",
                kWidth, kHeight, kWidth, kHeight);
  svg << buf;
  svg << "<title>error density: " << xml_escape(x_name) << " vs " << xml_escape(y_name) << "</title>\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      const double left = px(grid.x_edges[i]);
      const double right = px(grid.x_edges[i + 1]);
      const double top = py(grid.y_edges[j + 1]);
      const double bottom = py(grid.y_edges[j]);
      std::snprintf(buf, sizeof buf, "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"%s\"/>\n",
                    left, top, right - left, bottom - top,
                    viridis(dmax > 0.0 ? grid.at(i, j) / dmax : 0.0).c_str());
      svg << buf;
    }
  }
  svg << "</g>\n";
  std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n",
                kLeft, kTop, kPlot, kPlot);
  svg << buf;
  for (int t = 0; t <= 4; ++t) {
    const double fx = x0 + (x1 - x0) * t / 4.0;
    const double fy = y0 + (y1 - y0) * t / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.3f\" y1=\"%g\" x2=\"%.3f\" y2=\"%g\" stroke=\"black\"/>"
                  "<text x=\"%.3f\" y=\"%g\" text-anchor=\"middle\">%.3g</text>\n",
                  px(fx), kTop + kPlot, px(fx), kTop + kPlot + 5, px(fx), kTop + kPlot + 19, fx);
    svg << buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%.3f\" x2=\"%g\" y2=\"%.3f\" stroke=\"black\"/>"
                  "<text x=\"%g\" y=\"%.3f\" text-anchor=\"end\">%.3g</text>\n",
                  kLeft - 5, py(fy), kLeft, py(fy), kLeft - 8, py(fy) + 4, fy);
    svg << buf;
  }
  svg << "<text id=\"x-label\" x=\"" << kLeft + kPlot / 2 << "\" y=\"" << kTop + kPlot + 42
      << "\" text-anchor=\"middle\">error " << xml_escape(x_name) << "</text>\n";
  svg << "<text id=\"y-label\" x=\"20\" y=\"" << kTop + kPlot / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << kTop + kPlot / 2 << ")\">error " << xml_escape(y_name) << "</text>\n";
  if (x0 <= 0.0 && 0.0 <= x1 && y0 <= 0.0 && 0.0 <= y1) {
    const double ox = px(0.0);
    const double oy = py(0.0);
    std::snprintf(buf, sizeof buf,
                  "<g id=\"origin\" stroke=\"red\" stroke-width=\"2\"><line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" "
                  "y2=\"%.3f\"/><line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/></g>\n",
                  ox - 7, oy, ox + 7, oy, ox, oy - 7, ox, oy + 7);
    svg << buf;
  } else {
    svg << "<text id=\"origin\" x=\"" << kLeft << "\" y=\"18\" fill=\"red\">origin (0, 0) outside the plotted range</text>\n";
  }
  const double bar_x = kLeft + kPlot + 24;
  for (int s = 0; s < 50; ++s) {
    const double h = kPlot / 50.0;
    std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"%.3f\" width=\"%g\" height=\"%.3f\" fill=\"%s\"/>\n", bar_x,
                  kTop + kPlot - (s + 1) * h, kBar, h + 0.5, viridis((s + 0.5) / 50.0).c_str());
    svg << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\">%.3g</text><text x=\"%g\" y=\"%g\">0</text>\n"
                "<text x=\"%g\" y=\"%g\" font-size=\"10\">density</text>\n",
                bar_x + kBar + 4, kTop + 10, dmax, bar_x + kBar + 4, kTop + kPlot, bar_x, kTop - 8);
  svg << buf;
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace abcmu::cli
