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
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "abcmu/distance.hpp"
#include "abcmu/kernel.hpp"
#include "abcmu/model.hpp"
#include "abcmu/parallel.hpp"
#include "abcmu/prior.hpp"
#include "abcmu/rng.hpp"
#include "abcmu/samplers/collect.hpp"
#include "abcmu/samplers/common.hpp"

namespace abcmu {

struct RejectionRecord {
  std::uint64_t attempt;  // 0-based index of the proposal that produced it
  ParameterVector theta;
  ErrorVector errors;
};

struct RejectionResult {
  std::vector<RejectionRecord> accepted;
  /// Simulations of the equivalent serial run, up to the last accepted
  /// draw (or the cap).
  std::uint64_t simulations = 0;
  /// Simulations actually executed; larger than `simulations` only when
  /// parallel workers evaluated candidates past the stopping point.
  std::uint64_t executed_simulations = 0;
  RunStatus status = RunStatus::complete;

  bool complete() const noexcept { return status == RunStatus::complete; }
};

struct RejectionConfig {
  std::size_t n_accept = 1000;
  std::uint64_t max_simulations = 10'000'000;
};

namespace detail {

/// Shared loop of both rejection samplers. Attempt i draws from its own
/// stream (seed, i), so two samplers with the same seed see the same
/// proposals and simulations and differ only in `accept`.
template <ErrorModel Problem, class AcceptFn>
RejectionResult run_rejection(const Problem& problem, const BoxPrior& prior, const RejectionConfig& config,
                              const ExecutionOptions& exec, AcceptFn&& accept) {
  auto collected = collect_accepted<RejectionRecord>(
      config.n_accept, config.max_simulations, exec, [&](std::uint64_t attempt) {
        Attempt<RejectionRecord> a;
        Rng rng = Rng::stream(exec.seed, {stream_tag::kRejection, attempt});
        ParameterVector theta = prior.sample(rng);
        std::optional<ErrorVector> errors = problem.simulate_errors(theta, rng);
        a.simulated = true;
        if (errors && accept(*errors)) {
          a.accepted = RejectionRecord{attempt, std::move(theta), std::move(*errors)};
        }
        return a;
      });
  RejectionResult result;
  result.simulations = collected.simulations;
  result.executed_simulations = collected.executed_simulations;
  result.status = collected.capped ? RunStatus::budget_exhausted : RunStatus::complete;
  result.accepted.reserve(collected.accepted.size());
  for (auto& [index, record] : collected.accepted) {
    result.accepted.push_back(std::move(record));
  }
  return result;
}

}  // namespace detail

/// Classic rejection ABC with the max-combined distance: accept iff
/// max_k |e_k| <= tau / 2, i.e. with probability kernel(e) / kernel(0).
template <ErrorModel Problem>
RejectionResult rej_abc(const Problem& problem, const BoxPrior& prior, double tau, const RejectionConfig& config,
                        const ExecutionOptions& exec) {
  const IndicatorKernel kernel(tau);
  return detail::run_rejection(problem, prior, config, exec,
                               [&](const ErrorVector& e) { return kernel.accepts(distance_linf_combine(e)); });
}

/// Rejection ABC on the joint (theta, error) space: accept iff every
/// |e_k| <= tau_k / 2.
template <ErrorModel Problem>
RejectionResult rej_abcmu(const Problem& problem, const BoxPrior& prior, std::span<const double> taus,
                          const RejectionConfig& config, const ExecutionOptions& exec) {
  const std::vector<double> row(taus.begin(), taus.end());
  if (row.size() != problem.error_names().size()) {
    throw std::invalid_argument("rej_abcmu: tolerance row length does not match the number of summaries");
  }
  for (double t : row) {
    IndicatorKernel{t};
  }
  return detail::run_rejection(problem, prior, config, exec,
                               [&](const ErrorVector& e) { return inside_windows(e, row); });
}

}  // namespace abcmu
