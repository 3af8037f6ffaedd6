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

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "abcmu/errors.hpp"

namespace abcmu::diagnostics {

enum class EssMethod { sokal_autocorrelation, inverse_sum_squared_weights };

constexpr std::string_view to_string(EssMethod m) noexcept {
  return m == EssMethod::sokal_autocorrelation ? "sokal_autocorrelation" : "inverse_sum_squared_weights";
}

struct EssReport {
  EssMethod method;
  double ess;
  std::size_t n_samples;
  std::optional<double> integrated_autocorrelation_time;  // sokal only
  std::optional<std::size_t> window;                      // sokal only
};

/// Effective sample size of a correlated series from the integrated
/// autocorrelation time with Sokal's self-consistent window:
///   tau_int(W) = 1 + 2 sum_{t=1..W} rho(t),  W = min{W : W >= c tau_int(W)},
///   ESS = n / tau_int, clamped to (0, n].
inline EssReport ess_sokal(std::span<const double> series, double window_constant = 6.0) {
  const std::size_t n = series.size();
  if (n < 10) {
    throw std::invalid_argument("ess_sokal: need at least 10 samples");
  }
  double mean = 0.0;
  for (double x : series) {
    mean += x;
  }
  mean /= static_cast<double>(n);
  double gamma0 = 0.0;
  for (double x : series) {
    gamma0 += (x - mean) * (x - mean);
  }
  gamma0 /= static_cast<double>(n);
  if (!(gamma0 > 0.0)) {
    throw DegenerateData("ess_sokal: constant series has no autocorrelation structure");
  }
  double tau = 1.0;
  std::size_t window = 0;
  for (std::size_t t = 1; t < n; ++t) {
    double gamma = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) {
      gamma += (series[i] - mean) * (series[i + t] - mean);
    }
    gamma /= static_cast<double>(n);
    tau += 2.0 * gamma / gamma0;
    window = t;
    if (static_cast<double>(t) >= window_constant * tau) {
      break;
    }
  }
  const double nn = static_cast<double>(n);
  const double ess = tau > 1.0 ? nn / tau : nn;
  return {EssMethod::sokal_autocorrelation, ess, n, tau, window};
}

/// ESS = 1 / sum W_i^2 for normalised importance weights.
inline EssReport ess_weights(std::span<const double> weights) {
  if (weights.empty()) {
    throw std::invalid_argument("ess_weights: no weights");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("ess_weights: weights must be finite and nonnegative");
    }
    sum += w;
    sum_sq += w * w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("ess_weights: weights are not normalised (sum = " + std::to_string(sum) + ")");
  }
  const double n = static_cast<double>(weights.size());
  return {EssMethod::inverse_sum_squared_weights, std::min(1.0 / sum_sq, n), weights.size(), std::nullopt,
          std::nullopt};
}

}  // namespace abcmu::diagnostics
