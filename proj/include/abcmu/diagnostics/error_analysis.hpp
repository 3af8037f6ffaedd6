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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "abcmu/errors.hpp"
#include "abcmu/types.hpp"

namespace abcmu::diagnostics {

/// Componentwise weighted mean sum_i W_i e_ik. Empty weights mean equal
/// weights.
inline std::vector<double> expected_error(std::span<const ErrorVector> samples, std::span<const double> weights = {}) {
  if (samples.empty()) {
    throw std::invalid_argument("expected_error: no samples");
  }
  if (!weights.empty() && weights.size() != samples.size()) {
    throw std::invalid_argument("expected_error: weights and samples differ in length");
  }
  const std::size_t k_count = samples.front().size();
  std::vector<double> out(k_count, 0.0);
  double total = 0.0;
  const double uniform = 1.0 / static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != k_count) {
      throw std::invalid_argument("expected_error: samples have different lengths");
    }
    const double w = weights.empty() ? uniform : weights[i];
    total += w;
    for (std::size_t k = 0; k < k_count; ++k) {
      out[k] += w * samples[i][k];
    }
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("expected_error: weights are not normalised");
  }
  return out;
}

/// Total variation distance between the binned joint histogram of
/// (e_k1, e_k2) and the product of its marginals:
///   TV = 1/2 sum_ij |p_ij - p_i. p_.j|.
/// Each axis is split into n_bins equal-width bins over the sample range;
/// an axis without spread collapses to one bin.
inline double factorization_check(std::span<const ErrorVector> samples, std::size_t k1, std::size_t k2,
                                  std::size_t n_bins = 10) {
  if (samples.size() < 1000) {
    throw std::invalid_argument("factorization_check: need at least 1000 samples");
  }
  if (n_bins < 1) {
    throw std::invalid_argument("factorization_check: need at least one bin");
  }
  const std::size_t k_count = samples.front().size();
  if (k1 >= k_count || k2 >= k_count) {
    throw std::invalid_argument("factorization_check: summary index out of range");
  }
  auto binner = [&](std::size_t k) {
    double lo = samples.front()[k];
    double hi = lo;
    for (const auto& e : samples) {
      lo = std::min(lo, e[k]);
      hi = std::max(hi, e[k]);
    }
    if (!std::isfinite(hi - lo)) {
      throw DegenerateData("factorization_check: range of error component " + std::to_string(k) + " overflows");
    }
    const std::size_t bins = hi > lo ? n_bins : 1;
    return [=](double x) {
      if (bins == 1) {
        return std::size_t{0};
      }
      const double pos = std::floor((x - lo) / (hi - lo) * static_cast<double>(bins));
      return static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
    };
  };
  const auto bx = binner(k1);
  const auto by = binner(k2);
  std::vector<double> joint(n_bins * n_bins, 0.0);
  std::vector<double> px(n_bins, 0.0);
  std::vector<double> py(n_bins, 0.0);
  const double unit = 1.0 / static_cast<double>(samples.size());
  for (const auto& e : samples) {
    const std::size_t i = bx(e[k1]);
    const std::size_t j = by(e[k2]);
    joint[i * n_bins + j] += unit;
    px[i] += unit;
    py[j] += unit;
  }
  double tv = 0.0;
  for (std::size_t i = 0; i < n_bins; ++i) {
    for (std::size_t j = 0; j < n_bins; ++j) {
      tv += std::abs(joint[i * n_bins + j] - px[i] * py[j]);
    }
  }
  return std::clamp(0.5 * tv, 0.0, 1.0);
}

}  // namespace abcmu::diagnostics
