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

#include <concepts>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "abcmu/errors.hpp"
#include "abcmu/rng.hpp"
#include "abcmu/types.hpp"

namespace abcmu {

/// A simulator: draws pseudo-data for theta and reduces it to summaries.
/// simulate must be a pure function of (theta, rng state).
template <class M>
concept GenerativeModel = requires(const M& model, const ParameterVector& theta, Rng& rng) {
  { model.parameter_names() } -> std::convertible_to<Names>;
  { model.summary_names() } -> std::convertible_to<Names>;
  { model.simulate(theta, rng) } -> std::same_as<SummaryVector>;
};

/// Maps (simulated, observed) summaries to the K-dimensional error vector.
template <class D>
concept DiscrepancyFunction = requires(const D& distance, const SummaryVector& sim, const SummaryVector& obs) {
  { distance(sim, obs) } -> std::same_as<ErrorVector>;
};

/// What the samplers consume: one call simulates at theta and returns the
/// error vector, or nullopt when the draw must be rejected outright
/// (incomparable output). Either way it counts as one simulation.
template <class P>
concept ErrorModel = requires(const P& problem, const ParameterVector& theta, Rng& rng) {
  { problem.parameter_names() } -> std::convertible_to<Names>;
  { problem.error_names() } -> std::convertible_to<Names>;
  { problem.simulate_errors(theta, rng) } -> std::same_as<std::optional<ErrorVector>>;
};

/// Binds a simulator to observed summaries and a discrepancy function.
template <GenerativeModel Model, DiscrepancyFunction Distance>
class AbcProblem {
 public:
  AbcProblem(Model model, SummaryVector observed, Distance distance)
      : model_(std::move(model)), observed_(std::move(observed)), distance_(std::move(distance)) {}

  Names parameter_names() const { return model_.parameter_names(); }
  Names error_names() const { return model_.summary_names(); }
  const Model& model() const noexcept { return model_; }
  const SummaryVector& observed() const noexcept { return observed_; }

  std::optional<ErrorVector> simulate_errors(const ParameterVector& theta, Rng& rng) const {
    try {
      return distance_(model_.simulate(theta, rng), observed_);
    } catch (const SimulationRejected&) {
      return std::nullopt;
    }
  }

 private:
  Model model_;
  SummaryVector observed_;
  Distance distance_;
};

/// Type-erased ErrorModel, used where the model is chosen at run time.
class AnyErrorModel {
 public:
  template <ErrorModel P>
  explicit AnyErrorModel(P problem) : self_(std::make_shared<Holder<P>>(std::move(problem))) {}

  Names parameter_names() const { return self_->parameter_names(); }
  Names error_names() const { return self_->error_names(); }
  std::optional<ErrorVector> simulate_errors(const ParameterVector& theta, Rng& rng) const {
    return self_->simulate_errors(theta, rng);
  }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual Names parameter_names() const = 0;
    virtual Names error_names() const = 0;
    virtual std::optional<ErrorVector> simulate_errors(const ParameterVector&, Rng&) const = 0;
  };

  template <class P>
  struct Holder final : Concept {
    explicit Holder(P p) : problem(std::move(p)) {}
    Names parameter_names() const override { return problem.parameter_names(); }
    Names error_names() const override { return problem.error_names(); }
    std::optional<ErrorVector> simulate_errors(const ParameterVector& theta, Rng& rng) const override {
      return problem.simulate_errors(theta, rng);
    }
    P problem;
  };

  std::shared_ptr<const Concept> self_;
};

}  // namespace abcmu
