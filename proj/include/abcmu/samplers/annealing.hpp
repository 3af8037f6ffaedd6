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
#include <vector>

#include "abcmu/model.hpp"
#include "abcmu/parallel.hpp"
#include "abcmu/prior.hpp"
#include "abcmu/samplers/common.hpp"
#include "abcmu/types.hpp"

namespace abcmu {

enum class AnnealingMode { fixed_schedule, geometric, quantile };

struct AnnealingPolicy {
  AnnealingMode mode = AnnealingMode::geometric;
  double factor = 0.5;    // geometric
  double quantile = 0.5;  // quantile
  /// Per-stage multipliers applied to the proposal scale. Empty means the
  /// default rule: multiply by the mean tolerance ratio of the new stage.
  std::vector<double> scale_multipliers;

  void validate() const {
    if (mode == AnnealingMode::geometric && !(factor > 0.0 && factor < 1.0)) {
      throw std::invalid_argument("AnnealingPolicy: geometric factor must lie in (0, 1)");
    }
    if (mode == AnnealingMode::quantile && !(quantile > 0.0 && quantile <= 1.0)) {
      throw std::invalid_argument("AnnealingPolicy: quantile must lie in (0, 1]");
    }
    for (double m : scale_multipliers) {
      if (!(m > 0.0) || !std::isfinite(m)) {
        throw std::invalid_argument("AnnealingPolicy: scale multipliers must be positive");
      }
    }
  }
};

/// Linear-interpolation sample quantile (midpoint of the two middle order
/// statistics for the median of an even-sized sample).
inline double sample_quantile(std::vector<double> xs, double q) {
  if (xs.empty()) {
    throw std::invalid_argument("sample_quantile: empty sample");
  }
  std::sort(xs.begin(), xs.end());
  const double h = (static_cast<double>(xs.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

/// Next tolerance row. Never exceeds `current`, never drops below `floor`.
///   geometric: tau'_k = max(floor_k, factor * tau_k)
///   quantile:  tau'_k = max(floor_k, min(tau_k, 2 * q-quantile of |e_k|))
/// Quantile mode without errors falls back to geometric with factor 0.9.
inline std::vector<double> anneal_next(const AnnealingPolicy& policy, std::span<const double> current,
                                       std::span<const double> floor, std::span<const ErrorVector> recent_errors) {
  if (current.size() != floor.size()) {
    throw std::invalid_argument("anneal_next: current and floor rows differ in length");
  }
  std::vector<double> next(current.begin(), current.end());
  auto geometric = [&](double factor) {
    for (std::size_t k = 0; k < next.size(); ++k) {
      next[k] = std::max(floor[k], factor * current[k]);
    }
  };
  switch (policy.mode) {
    case AnnealingMode::fixed_schedule:
      throw std::invalid_argument("anneal_next: fixed schedules carry their own rows");
    case AnnealingMode::geometric:
      geometric(policy.factor);
      break;
    case AnnealingMode::quantile:
      if (recent_errors.empty()) {
        geometric(0.9);
        break;
      }
      for (std::size_t k = 0; k < next.size(); ++k) {
        std::vector<double> magnitudes;
        magnitudes.reserve(recent_errors.size());
        for (const auto& e : recent_errors) {
          magnitudes.push_back(std::abs(e[k]));
        }
        const double proposal = 2.0 * sample_quantile(std::move(magnitudes), policy.quantile);
        next[k] = std::max(floor[k], std::min(current[k], proposal));
      }
      break;
  }
  for (std::size_t k = 0; k < next.size(); ++k) {
    next[k] = std::min(next[k], current[k]);
  }
  return next;
}

/// Proposal-scale multiplier for moving from `previous` to `next` tolerances
/// at stage index `stage` (1-based stage being entered).
inline double scale_multiplier(const AnnealingPolicy& policy, std::size_t stage, std::span<const double> previous,
                               std::span<const double> next) {
  if (!policy.scale_multipliers.empty()) {
    const std::size_t i = std::min(stage, policy.scale_multipliers.size()) - 1;
    return policy.scale_multipliers[i];
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < next.size(); ++k) {
    sum += next[k] / previous[k];
  }
  return sum / static_cast<double>(next.size());
}

/// Geometric ladder from `initial` down to `final_row`; the last row is
/// exactly `final_row`.
inline ToleranceSchedule make_geometric_schedule(std::span<const double> initial, std::span<const double> final_row,
                                                 double factor) {
  if (!(factor > 0.0 && factor < 1.0)) {
    throw std::invalid_argument("make_geometric_schedule: factor must lie in (0, 1)");
  }
  AnnealingPolicy policy;
  policy.mode = AnnealingMode::geometric;
  policy.factor = factor;
  std::vector<std::vector<double>> rows{std::vector<double>(initial.begin(), initial.end())};
  std::vector<double> floor(final_row.begin(), final_row.end());
  for (std::size_t k = 0; k < floor.size(); ++k) {
    rows.front()[k] = std::max(rows.front()[k], floor[k]);
  }
  while (rows.back() != floor) {
    rows.push_back(anneal_next(policy, rows.back(), floor, {}));
  }
  return ToleranceSchedule(std::move(rows));
}

/// Data-driven first tolerance row: twice the q-quantile of |e_k| over a
/// pilot batch from the prior predictive. With q = 1 every pilot draw lies
/// inside the resulting windows.
template <ErrorModel Problem>
std::vector<double> pilot_initial_row(const Problem& problem, const BoxPrior& prior, std::size_t n_pilot,
                                      const ExecutionOptions& exec, double q = 1.0) {
  std::vector<std::optional<ErrorVector>> draws(n_pilot);
  parallel_for(n_pilot, exec.workers, [&](std::size_t i) {
    Rng rng = Rng::stream(exec.seed, {stream_tag::kPilot, i});
    draws[i] = problem.simulate_errors(prior.sample(rng), rng);
  });
  std::vector<ErrorVector> errors;
  for (auto& d : draws) {
    if (d) {
      errors.push_back(std::move(*d));
    }
  }
  if (errors.empty()) {
    throw std::runtime_error("pilot_initial_row: every pilot simulation was rejected");
  }
  const std::size_t k_count = errors.front().size();
  std::vector<double> row(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    std::vector<double> magnitudes;
    for (const auto& e : errors) {
      magnitudes.push_back(std::abs(e[k]));
    }
    row[k] = std::max(2.0 * sample_quantile(std::move(magnitudes), q), 1e-12);
  }
  return row;
}

}  // namespace abcmu
