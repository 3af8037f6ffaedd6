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
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "abcmu/errors.hpp"
#include "abcmu/types.hpp"

namespace abcmu::diagnostics {

/// Two-dimensional density estimate of a pair of error components on a
/// regular grid. density is row-major: density[i * ny + j] is the cell
/// [x_edges[i], x_edges[i+1]) x [y_edges[j], y_edges[j+1]).
struct AshGrid2D {
  std::size_t k1 = 0;
  std::size_t k2 = 1;
  std::vector<double> x_edges;
  std::vector<double> y_edges;
  std::vector<double> density;
  std::size_t m_shifts = 1;

  std::size_t nx() const noexcept { return x_edges.size() - 1; }
  std::size_t ny() const noexcept { return y_edges.size() - 1; }
  double at(std::size_t i, std::size_t j) const { return density.at(i * ny() + j); }
  double cell_area() const { return (x_edges[1] - x_edges[0]) * (y_edges[1] - y_edges[0]); }

  double integral() const {
    double sum = 0.0;
    for (double d : density) {
      sum += d;
    }
    return sum * cell_area();
  }

  /// (i, j) of the largest density cell; first in row-major order on ties.
  std::pair<std::size_t, std::size_t> argmax() const {
    const auto it = std::max_element(density.begin(), density.end());
    const auto flat = static_cast<std::size_t>(it - density.begin());
    return {flat / ny(), flat % ny()};
  }
};

namespace detail {

struct Axis {
  double lo;
  double width;  // fine-bin width
  std::size_t bins;
  double data_lo;
  std::size_t pad;       // fine bins below data_lo
  std::size_t inner;     // fine bins spanning the data range
};

// Measured from the data minimum so no sample lands in the padding; the
// maximum goes in the last data bin.
inline std::size_t bin_of(const Axis& axis, double x) {
  const double pos = std::floor((x - axis.data_lo) / axis.width);
  return axis.pad + static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(axis.inner - 1)));
}

inline std::vector<double> edges_of(const Axis& axis) {
  std::vector<double> edges(axis.bins + 1);
  for (std::size_t i = 0; i <= axis.bins; ++i) {
    edges[i] = axis.lo + axis.width * static_cast<double>(i);
  }
  return edges;
}

}  // namespace detail

/// Weighted average shifted histogram of error components (k1, k2).
///
/// The data range on each axis is padded by one coarse bin width h on
/// both sides and split into (n_bins + 2) * m fine bins of width h / m.
/// Averaging the m^2 shifted coarse histograms equals smoothing the fine
/// counts with product triangular weights (1 - |i|/m)(1 - |j|/m).
/// m_shifts = 1 gives the plain histogram on the padded grid.
inline AshGrid2D error_density_ash2d(std::span<const ErrorVector> samples, std::span<const double> weights,
                                     std::size_t k1, std::size_t k2, std::size_t n_bins = 30,
                                     std::size_t m_shifts = 4) {
  if (samples.size() < 2) {
    throw std::invalid_argument("error_density_ash2d: need at least two samples");
  }
  if (n_bins < 4 || m_shifts < 1) {
    throw std::invalid_argument("error_density_ash2d: need n_bins >= 4 and m_shifts >= 1");
  }
  if (!weights.empty() && weights.size() != samples.size()) {
    throw std::invalid_argument("error_density_ash2d: weights and samples differ in length");
  }
  const std::size_t k_count = samples.front().size();
  if (k1 >= k_count || k2 >= k_count) {
    throw std::invalid_argument("error_density_ash2d: summary index out of range");
  }
  auto make_axis = [&](std::size_t k, const char* label) {
    double lo = samples.front()[k];
    double hi = lo;
    for (const auto& e : samples) {
      lo = std::min(lo, e[k]);
      hi = std::max(hi, e[k]);
    }
    if (!(hi > lo)) {
      throw DegenerateData(std::string("error_density_ash2d: no spread along ") + label + " (error component " +
                           std::to_string(k) + ")");
    }
    const double h = (hi - lo) / static_cast<double>(n_bins);
    return detail::Axis{lo - h, h / static_cast<double>(m_shifts), (n_bins + 2) * m_shifts, lo, m_shifts,
                        n_bins * m_shifts};
  };
  const detail::Axis ax = make_axis(k1, "x");
  const detail::Axis ay = make_axis(k2, "y");

  std::vector<double> counts(ax.bins * ay.bins, 0.0);
  double total = 0.0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const double w = weights.empty() ? 1.0 : weights[s];
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("error_density_ash2d: weights must be finite and nonnegative");
    }
    counts[detail::bin_of(ax, samples[s][k1]) * ay.bins + detail::bin_of(ay, samples[s][k2])] += w;
    total += w;
  }
  if (!(total > 0.0)) {
    throw DegenerateData("error_density_ash2d: total weight is zero");
  }

  const auto m = static_cast<std::ptrdiff_t>(m_shifts);
  const double md = static_cast<double>(m_shifts);
  std::vector<double> kernel(static_cast<std::size_t>(2 * m - 1));
  for (std::ptrdiff_t i = -(m - 1); i <= m - 1; ++i) {
    kernel[static_cast<std::size_t>(i + m - 1)] = 1.0 - static_cast<double>(std::abs(i)) / md;
  }
  // Separable smoothing: first along y, then along x.
  const auto nx = static_cast<std::ptrdiff_t>(ax.bins);
  const auto ny = static_cast<std::ptrdiff_t>(ay.bins);
  std::vector<double> along_y(counts.size(), 0.0);
  for (std::ptrdiff_t i = 0; i < nx; ++i) {
    for (std::ptrdiff_t j = 0; j < ny; ++j) {
      double acc = 0.0;
      for (std::ptrdiff_t d = -(m - 1); d <= m - 1; ++d) {
        const std::ptrdiff_t jj = j + d;
        if (jj >= 0 && jj < ny) {
          acc += kernel[static_cast<std::size_t>(d + m - 1)] * counts[static_cast<std::size_t>(i * ny + jj)];
        }
      }
      along_y[static_cast<std::size_t>(i * ny + j)] = acc;
    }
  }
  AshGrid2D grid;
  grid.k1 = k1;
  grid.k2 = k2;
  grid.m_shifts = m_shifts;
  grid.x_edges = detail::edges_of(ax);
  grid.y_edges = detail::edges_of(ay);
  grid.density.assign(counts.size(), 0.0);
  const double norm = total * md * md * ax.width * ay.width;
  for (std::ptrdiff_t i = 0; i < nx; ++i) {
    for (std::ptrdiff_t j = 0; j < ny; ++j) {
      double acc = 0.0;
      for (std::ptrdiff_t d = -(m - 1); d <= m - 1; ++d) {
        const std::ptrdiff_t ii = i + d;
        if (ii >= 0 && ii < nx) {
          acc += kernel[static_cast<std::size_t>(d + m - 1)] * along_y[static_cast<std::size_t>(ii * ny + j)];
        }
      }
      grid.density[static_cast<std::size_t>(i * ny + j)] = acc / norm;
    }
  }
  const double integral = grid.integral();
  if (std::abs(integral - 1.0) > 1e-6) {
    throw std::logic_error("error_density_ash2d: density integrates to " + std::to_string(integral));
  }
  return grid;
}

inline AshGrid2D error_density_ash2d(std::span<const ErrorVector> samples, std::size_t k1, std::size_t k2,
                                     std::size_t n_bins = 30, std::size_t m_shifts = 4) {
  return error_density_ash2d(samples, {}, k1, k2, n_bins, m_shifts);
}

/// Plain-text matrix: line 1 holds the x edges, line 2 the y edges, then
/// one line of ny densities per x bin.
inline void write_ash_grid(std::ostream& out, const AshGrid2D& grid) {
  char buf[32];
  auto write_row = [&](std::span<const double> xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", xs[i]);
      out << (i ? " " : "") << buf;
    }
    out << '\n';
  };
  write_row(grid.x_edges);
  write_row(grid.y_edges);
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    write_row(std::span<const double>(grid.density).subspan(i * grid.ny(), grid.ny()));
  }
}

inline AshGrid2D read_ash_grid(std::istream& in) {
  auto read_row = [&](std::vector<double>& row) {
    std::string line;
    if (!std::getline(in, line)) {
      return false;
    }
    std::istringstream ss(line);
    row.clear();
    for (double x; ss >> x;) {
      row.push_back(x);
    }
    return true;
  };
  AshGrid2D grid;
  if (!read_row(grid.x_edges) || !read_row(grid.y_edges) || grid.x_edges.size() < 2 || grid.y_edges.size() < 2) {
    throw std::runtime_error("read_ash_grid: missing edge header");
  }
  std::vector<double> row;
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    if (!read_row(row) || row.size() != grid.ny()) {
      throw std::runtime_error("read_ash_grid: bad density row " + std::to_string(i));
    }
    grid.density.insert(grid.density.end(), row.begin(), row.end());
  }
  return grid;
}

}  // namespace abcmu::diagnostics
