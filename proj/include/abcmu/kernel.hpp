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

#include "abcmu/types.hpp"

namespace abcmu {

/// One-dimensional indicator kernel, 1/tau on |e| <= tau/2.
class IndicatorKernel {
 public:
  explicit IndicatorKernel(double tolerance) : tolerance_(tolerance) {
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
      throw std::invalid_argument("IndicatorKernel: tolerance must be positive and finite");
    }
  }

  double tolerance() const noexcept { return tolerance_; }

  bool accepts(double e) const {
    if (!std::isfinite(e)) {
      throw std::invalid_argument("IndicatorKernel: non-finite error");
    }
    return std::abs(e) <= 0.5 * tolerance_;
  }

  double operator()(double e) const { return accepts(e) ? 1.0 / tolerance_ : 0.0; }

  /// Kernel value at e = 0, the normalising constant of the acceptance
  /// probability kernel(e) / kernel(0).
  double peak() const noexcept { return 1.0 / tolerance_; }

 private:
  double tolerance_;
};

inline double kernel_eval(double e, double tau) { return IndicatorKernel(tau)(e); }

namespace detail {

inline void check_lengths(std::size_t errors, std::size_t taus) {
  if (errors != taus) {
    throw std::invalid_argument("kernel: error vector has " + std::to_string(errors) + " components but " +
                                std::to_string(taus) + " tolerances were given");
  }
}

}  // namespace detail

/// Product of per-summary kernels.
inline double kernel_product(std::span<const double> errors, std::span<const double> taus) {
  detail::check_lengths(errors.size(), taus.size());
  double product = 1.0;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    product *= kernel_eval(errors[k], taus[k]);
  }
  return product;
}

inline double kernel_product(const ErrorVector& errors, std::span<const double> taus) {
  return kernel_product(errors.values(), taus);
}

/// True iff every |e_k| <= tau_k / 2, i.e. kernel_product > 0. The 0/1
/// acceptance probability of the indicator kernel reduces to this test.
inline bool inside_windows(std::span<const double> errors, std::span<const double> taus) {
  detail::check_lengths(errors.size(), taus.size());
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!IndicatorKernel(taus[k]).accepts(errors[k])) {
      return false;
    }
  }
  return true;
}

inline bool inside_windows(const ErrorVector& errors, std::span<const double> taus) {
  return inside_windows(errors.values(), taus);
}

}  // namespace abcmu
