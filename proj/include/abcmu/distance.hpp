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

#include "abcmu/errors.hpp"
#include "abcmu/types.hpp"

namespace abcmu {

enum class SignedMode { difference, log_ratio };

/// Signed discrepancy between a simulated and an observed scalar summary.
/// log_ratio is log(sim / obs) and needs both inputs positive.
inline double distance_signed(double sim, double obs, SignedMode mode) {
  switch (mode) {
    case SignedMode::difference:
      return sim - obs;
    case SignedMode::log_ratio:
      if (!(sim > 0.0) || !(obs > 0.0)) {
        throw DistanceDomainError("log-ratio distance needs positive inputs, got " + std::to_string(sim) + " and " +
                                  std::to_string(obs));
      }
      return std::log(sim / obs);
  }
  throw std::invalid_argument("distance_signed: unknown mode");
}

/// Log of a ratio that may have both sides negative (e.g. autocorrelations).
/// Requires sim / obs > 0.
inline double log_ratio_same_sign(double sim, double obs) {
  const double ratio = sim / obs;
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw DistanceDomainError("log-ratio distance needs same-sign nonzero inputs, got " + std::to_string(sim) +
                              " and " + std::to_string(obs));
  }
  return std::log(ratio);
}

/// (sim - obs) / max(|obs|, floor).
inline double relative_difference(double sim, double obs, double floor = 1e-9) {
  return (sim - obs) / std::max(std::abs(obs), floor);
}

/// Two-sample Cramer-von Mises statistic
///   T = n m / (n + m)^2 * sum over the n + m pooled points z of (F_a(z) - F_b(z))^2
/// with right-continuous ECDFs. Tied pooled points each contribute once.
inline double distance_cvm(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("distance_cvm: empty sample");
  }
  if (!std::is_sorted(a.begin(), a.end()) || !std::is_sorted(b.begin(), b.end())) {
    throw std::invalid_argument("distance_cvm: samples must be sorted ascending");
  }
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  std::size_t ia = 0;
  std::size_t ib = 0;
  double sum = 0.0;
  while (ia < a.size() || ib < b.size()) {
    double z;
    if (ib == b.size() || (ia < a.size() && a[ia] <= b[ib])) {
      z = a[ia];
    } else {
      z = b[ib];
    }
    std::size_t ties = 0;
    while (ia < a.size() && a[ia] == z) {
      ++ia;
      ++ties;
    }
    while (ib < b.size() && b[ib] == z) {
      ++ib;
      ++ties;
    }
    const double diff = static_cast<double>(ia) / n - static_cast<double>(ib) / m;
    sum += static_cast<double>(ties) * diff * diff;
  }
  return n * m / ((n + m) * (n + m)) * sum;
}

inline double distance_cvm(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  return distance_cvm(a.samples(), b.samples());
}

/// max_k |e_k|, the combined distance equivalent to a product of indicator
/// kernels with equal tolerances.
inline double distance_linf_combine(std::span<const double> errors) {
  if (errors.empty()) {
    throw std::invalid_argument("distance_linf_combine: empty error vector");
  }
  double result = 0.0;
  for (double e : errors) {
    result = std::max(result, std::abs(e));
  }
  return result;
}

inline double distance_linf_combine(const ErrorVector& errors) { return distance_linf_combine(errors.values()); }

}  // namespace abcmu
