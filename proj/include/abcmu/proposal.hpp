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
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "abcmu/rng.hpp"
#include "abcmu/types.hpp"

namespace abcmu {

/// Componentwise Gaussian random walk with per-component standard
/// deviations and a global scale that annealing schemes shrink.
class GaussianRandomWalkProposal {
 public:
  explicit GaussianRandomWalkProposal(std::vector<double> stddevs, double scale = 1.0)
      : stddevs_(std::move(stddevs)), scale_(scale) {
    if (stddevs_.empty()) {
      throw std::invalid_argument("GaussianRandomWalkProposal: no components");
    }
    for (double sd : stddevs_) {
      if (!(sd > 0.0) || !std::isfinite(sd)) {
        throw std::invalid_argument("GaussianRandomWalkProposal: stddevs must be positive and finite");
      }
    }
    if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
      throw std::invalid_argument("GaussianRandomWalkProposal: scale must be positive and finite");
    }
  }

  std::size_t dimension() const noexcept { return stddevs_.size(); }
  const std::vector<double>& stddevs() const noexcept { return stddevs_; }
  double scale() const noexcept { return scale_; }

  GaussianRandomWalkProposal with_scale(double scale) const { return GaussianRandomWalkProposal(stddevs_, scale); }

  ParameterVector sample(const ParameterVector& from, Rng& rng) const {
    check_dimension(from.size());
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> to(from.size());
    for (std::size_t i = 0; i < to.size(); ++i) {
      to[i] = from[i] + scale_ * stddevs_[i] * normal(rng);
    }
    return from.with_values(std::move(to));
  }

  /// Density of moving from `from` to `to`. Symmetric in its arguments:
  /// only squared differences enter.
  double density(std::span<const double> from, std::span<const double> to) const {
    check_dimension(from.size());
    check_dimension(to.size());
    double log_density = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) {
      const double sd = scale_ * stddevs_[i];
      const double z = (to[i] - from[i]) / sd;
      log_density += -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
    }
    return std::exp(log_density);
  }

  double density(const ParameterVector& from, const ParameterVector& to) const {
    return density(from.values(), to.values());
  }

 private:
  void check_dimension(std::size_t n) const {
    if (n != stddevs_.size()) {
      throw std::invalid_argument("GaussianRandomWalkProposal: dimension mismatch");
    }
  }

  std::vector<double> stddevs_;
  double scale_;
};

}  // namespace abcmu
