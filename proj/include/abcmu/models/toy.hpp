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
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <variant>
#include <vector>
#include <stdexcept>
#include <utility>

#include "abcmu/distance.hpp"
#include "abcmu/model.hpp"
#include "abcmu/rng.hpp"
#include "abcmu/types.hpp"

namespace abcmu::toy {

enum class ToySummaries { mean, mean_and_sd };

struct ToyGaussSpec {
  std::size_t n_obs = 100;
  double noise_sd = 1.0;
  ToySummaries summaries = ToySummaries::mean;

  void validate() const {
    if (n_obs < 2) {
      throw std::invalid_argument("ToyGaussSpec: n_obs must be at least 2");
    }
    if (!(noise_sd > 0.0) || !std::isfinite(noise_sd)) {
      throw std::invalid_argument("ToyGaussSpec: noise_sd must be positive");
    }
  }
};

/// n_obs iid Normal(theta, sigma^2) draws reduced to their sample mean
/// and, optionally, sample standard deviation.
class ToyGaussModel {
 public:
  explicit ToyGaussModel(ToyGaussSpec spec) : spec_(spec) { spec_.validate(); }

  const ToyGaussSpec& spec() const noexcept { return spec_; }
  Names parameter_names() const { return {"theta"}; }
  Names summary_names() const {
    if (spec_.summaries == ToySummaries::mean) {
      return {"mean"};
    }
    return {"mean", "sd"};
  }

  SummaryVector simulate(const ParameterVector& theta, Rng& rng) const {
    if (theta.size() != 1) {
      throw std::invalid_argument("toy-gauss: theta must be scalar");
    }
    std::normal_distribution<double> noise(theta[0], spec_.noise_sd);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < spec_.n_obs; ++i) {
      const double x = noise(rng);
      sum += x;
      sum_sq += x * x;
    }
    return summarize(sum, sum_sq, spec_.n_obs);
  }

  /// Summaries of a fixed data set.
  SummaryVector summarize(std::span<const double> data) const {
    if (data.size() < 2) {
      throw std::invalid_argument("toy-gauss: need at least two observations");
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double x : data) {
      sum += x;
      sum_sq += x * x;
    }
    return summarize(sum, sum_sq, data.size());
  }

 private:
  SummaryVector summarize(double sum, double sum_sq, std::size_t n) const {
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    if (spec_.summaries == ToySummaries::mean) {
      return {mean};
    }
    const double var = std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0));
    return {mean, std::sqrt(var)};
  }

  ToyGaussSpec spec_;
};

/// Signed difference per summary.
struct ToyDistance {
  ErrorVector operator()(const SummaryVector& sim, const SummaryVector& obs) const {
    if (sim.size() != obs.size()) {
      throw std::invalid_argument("toy distance: summary vectors differ in length");
    }
    std::vector<double> e(sim.size());
    for (std::size_t k = 0; k < sim.size(); ++k) {
      e[k] = distance_signed(std::get<double>(sim[k]), std::get<double>(obs[k]), SignedMode::difference);
    }
    return ErrorVector(std::move(e));
  }
};

using ToyProblem = AbcProblem<ToyGaussModel, ToyDistance>;

inline ToyProblem make_toy_problem(const ToyGaussSpec& spec, SummaryVector observed) {
  ToyGaussModel model(spec);
  if (observed.size() != model.summary_names().size()) {
    throw std::invalid_argument("toy-gauss: observed summaries do not match the configuration");
  }
  return ToyProblem(std::move(model), std::move(observed), ToyDistance{});
}

struct PosteriorMoments {
  double mean;
  double variance;
};

/// Posterior of theta given the sample mean under a uniform prior on
/// [lower, upper]: Normal(xbar, sigma^2 / n) truncated to the box.
/// Bounds may be infinite.
inline PosteriorMoments toy_posterior_oracle(double lower, double upper, const ToyGaussSpec& spec, double xbar) {
  spec.validate();
  if (!(lower < upper)) {
    throw std::invalid_argument("toy_posterior_oracle: need lower < upper");
  }
  const double s = spec.noise_sd / std::sqrt(static_cast<double>(spec.n_obs));
  const double a = (lower - xbar) / s;
  const double b = (upper - xbar) / s;
  if (a > 8.0 || b < -8.0) {
    throw std::underflow_error("toy_posterior_oracle: prior box lies more than 8 posterior scales from the data");
  }
  constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const auto pdf = [](double z) {
    return std::isinf(z) ? 0.0 : std::exp(-0.5 * z * z) * std::numbers::inv_sqrtpi * inv_sqrt2;
  };
  const auto zpdf = [&](double z) { return std::isinf(z) ? 0.0 : z * pdf(z); };
  // Mass of [a, b], computed on the side with the smaller tail.
  const double mass = a > 0.0 ? 0.5 * (std::erfc(a * inv_sqrt2) - std::erfc(b * inv_sqrt2))
                              : 0.5 * (std::erfc(-b * inv_sqrt2) - std::erfc(-a * inv_sqrt2));
  const double ratio = (pdf(a) - pdf(b)) / mass;
  const double mean = xbar + s * ratio;
  const double variance = s * s * (1.0 + (zpdf(a) - zpdf(b)) / mass - ratio * ratio);
  return {mean, variance};
}

}  // namespace abcmu::toy
