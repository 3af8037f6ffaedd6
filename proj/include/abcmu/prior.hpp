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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "abcmu/rng.hpp"
#include "abcmu/types.hpp"

namespace abcmu {

struct Interval {
  double lower;
  double upper;
};

/// Product of independent uniform priors on a box.
class BoxPrior {
 public:
  BoxPrior(Names names, std::vector<Interval> bounds)
      : names_(make_names(std::move(names))), bounds_(std::move(bounds)) {
    if (names_->size() != bounds_.size() || bounds_.empty()) {
      throw std::invalid_argument("BoxPrior: names and bounds must be nonempty and of equal length");
    }
    density_ = 1.0;
    for (std::size_t i = 0; i < bounds_.size(); ++i) {
      const auto [lo, hi] = bounds_[i];
      if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw std::invalid_argument("BoxPrior: need finite lower < upper for '" + (*names_)[i] + "'");
      }
      density_ /= (hi - lo);
    }
  }

  std::size_t dimension() const noexcept { return bounds_.size(); }
  const Names& names() const noexcept { return *names_; }
  const SharedNames& shared_names() const noexcept { return names_; }
  const std::vector<Interval>& bounds() const noexcept { return bounds_; }

  ParameterVector sample(Rng& rng) const {
    std::vector<double> values(bounds_.size());
    for (std::size_t i = 0; i < bounds_.size(); ++i) {
      const auto [lo, hi] = bounds_[i];
      values[i] = lo + (hi - lo) * rng.uniform();
    }
    return ParameterVector(std::move(values), names_);
  }

  bool contains(std::span<const double> theta) const {
    if (theta.size() != bounds_.size()) {
      throw std::invalid_argument("BoxPrior: dimension mismatch");
    }
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (theta[i] < bounds_[i].lower || theta[i] > bounds_[i].upper) {
        return false;
      }
    }
    return true;
  }

  double density(std::span<const double> theta) const { return contains(theta) ? density_ : 0.0; }
  double density(const ParameterVector& theta) const { return density(theta.values()); }

 private:
  SharedNames names_;
  std::vector<Interval> bounds_;
  double density_ = 1.0;
};

}  // namespace abcmu
