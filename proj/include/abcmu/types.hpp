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
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace abcmu {

using Names = std::vector<std::string>;
using SharedNames = std::shared_ptr<const Names>;

inline SharedNames make_names(Names names) {
  return std::make_shared<const Names>(std::move(names));
}

namespace detail {

inline bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace detail

/// A point in parameter space. Component names are shared between all
/// points of one problem, so copying a ParameterVector is cheap.
class ParameterVector {
 public:
  ParameterVector(std::vector<double> values, SharedNames names)
      : values_(std::move(values)), names_(std::move(names)) {
    if (!names_ || values_.empty() || values_.size() != names_->size()) {
      throw std::invalid_argument("ParameterVector: values and names must be nonempty and of equal length");
    }
    if (!detail::all_finite(values_)) {
      throw std::invalid_argument("ParameterVector: non-finite component");
    }
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  const Names& names() const noexcept { return *names_; }
  const SharedNames& shared_names() const noexcept { return names_; }

  /// Same names, new values.
  ParameterVector with_values(std::vector<double> values) const {
    return ParameterVector(std::move(values), names_);
  }

  friend bool operator==(const ParameterVector& a, const ParameterVector& b) {
    return a.values_ == b.values_ && a.names() == b.names();
  }

 private:
  std::vector<double> values_;
  SharedNames names_;
};

/// Sorted, nonempty sample list.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) {
      throw std::invalid_argument("EmpiricalDistribution: empty sample list");
    }
    if (!detail::all_finite(samples_)) {
      throw std::invalid_argument("EmpiricalDistribution: non-finite sample");
    }
    std::sort(samples_.begin(), samples_.end());
  }

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }

  /// Right-continuous ECDF: fraction of samples <= x.
  double cdf(double x) const {
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
  }

  friend bool operator==(const EmpiricalDistribution&, const EmpiricalDistribution&) = default;

 private:
  std::vector<double> samples_;
};

/// Values indexed by an integer pair, e.g. per degree-pair statistics.
using KeyedValues = std::map<std::pair<int, int>, double>;

using Summary = std::variant<double, EmpiricalDistribution, KeyedValues>;
using SummaryVector = std::vector<Summary>;

/// K per-summary errors, all finite.
class ErrorVector {
 public:
  ErrorVector() = default;
  explicit ErrorVector(std::vector<double> errors) : errors_(std::move(errors)) {
    if (!detail::all_finite(errors_)) {
      throw std::invalid_argument("ErrorVector: non-finite component");
    }
  }
  ErrorVector(std::initializer_list<double> errors) : ErrorVector(std::vector<double>(errors)) {}

  std::size_t size() const noexcept { return errors_.size(); }
  bool empty() const noexcept { return errors_.empty(); }
  double operator[](std::size_t k) const { return errors_[k]; }
  std::span<const double> values() const noexcept { return errors_; }

  friend bool operator==(const ErrorVector&, const ErrorVector&) = default;

 private:
  std::vector<double> errors_;
};

/// Per-stage, per-summary tolerances; positive and non-increasing along
/// stages for every summary.
class ToleranceSchedule {
 public:
  explicit ToleranceSchedule(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
    if (rows_.empty() || rows_.front().empty()) {
      throw std::invalid_argument("ToleranceSchedule: needs at least one nonempty row");
    }
    const std::size_t k = rows_.front().size();
    for (std::size_t n = 0; n < rows_.size(); ++n) {
      if (rows_[n].size() != k) {
        throw std::invalid_argument("ToleranceSchedule: row " + std::to_string(n) + " has wrong length");
      }
      for (std::size_t j = 0; j < k; ++j) {
        const double tau = rows_[n][j];
        if (!(tau > 0.0) || !std::isfinite(tau)) {
          throw std::invalid_argument("ToleranceSchedule: tolerances must be positive and finite");
        }
        if (n > 0 && tau > rows_[n - 1][j]) {
          throw std::invalid_argument("ToleranceSchedule: tolerance for summary " + std::to_string(j) +
                                      " increases at stage " + std::to_string(n));
        }
      }
    }
  }

  /// Single-stage schedule.
  static ToleranceSchedule constant(std::vector<double> row) { return ToleranceSchedule({std::move(row)}); }

  std::size_t stages() const noexcept { return rows_.size(); }
  std::size_t summaries() const noexcept { return rows_.front().size(); }
  std::span<const double> row(std::size_t n) const { return rows_.at(n); }
  std::span<const double> final_row() const { return rows_.back(); }
  const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }

 private:
  std::vector<std::vector<double>> rows_;
};

}  // namespace abcmu
