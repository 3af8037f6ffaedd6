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
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "abcmu/kernel.hpp"
#include "abcmu/model.hpp"
#include "abcmu/parallel.hpp"
#include "abcmu/prior.hpp"
#include "abcmu/proposal.hpp"
#include "abcmu/rng.hpp"
#include "abcmu/samplers/annealing.hpp"
#include "abcmu/samplers/common.hpp"

namespace abcmu {

struct MhConfig {
  ToleranceSchedule schedule;
  GaussianRandomWalkProposal proposal;
  /// Proposal-scale multiplier per stage. Empty: cumulative product of the
  /// mean tolerance ratio between consecutive rows.
  std::vector<double> stage_scales;
  /// Iterations to run once the final tolerance row is reached.
  std::size_t post_burn_in_iterations = 1000;
  /// Iterations allowed before the final row is reached.
  std::size_t max_burn_in_iterations = 1'000'000;
  std::size_t max_init_attempts = 10'000;
};

struct MhChainState {
  ParameterVector theta;
  ErrorVector errors;
  double kernel_value = 0.0;
  std::size_t stage = 0;  // 0-based index into the schedule
  std::uint64_t iteration = 0;
  std::uint64_t accepted_count = 0;
  std::uint64_t sim_count = 0;
};

struct MhRecord {
  std::uint64_t iteration;  // 1-based
  std::uint32_t stage;      // 0-based
  std::vector<double> theta;
  std::vector<double> errors;
  bool accepted;
  std::uint64_t cum_sims;
};

struct ChainTrace {
  std::vector<MhRecord> records;
  /// Iterations completed when the final row was first reached; the
  /// chain's burn-in.
  std::optional<std::uint64_t> burn_in_iterations;
  std::uint64_t burn_in_simulations = 0;
  std::uint64_t simulations = 0;
  std::uint64_t accepted = 0;
  std::size_t init_attempts = 0;
  RunStatus status = RunStatus::complete;

  /// Records after burn-in (all at the final tolerance row).
  std::span<const MhRecord> post_burn_in() const {
    if (!burn_in_iterations) {
      return {};
    }
    const auto offset = static_cast<std::size_t>(*burn_in_iterations);
    return std::span<const MhRecord>(records).subspan(std::min(offset, records.size()));
  }
};

/// Metropolis-Hastings acceptance probability on the joint (theta, error)
/// space:
///   min{1, q(t'->t) pi(t') prod kappa(e'_k) / (q(t->t') pi(t) prod kappa(e_k))}
inline double mh_acceptance_probability(const GaussianRandomWalkProposal& proposal, const BoxPrior& prior,
                                        const ParameterVector& theta, const ErrorVector& errors,
                                        const ParameterVector& candidate, const ErrorVector& candidate_errors,
                                        std::span<const double> taus) {
  const double numerator_kernel = kernel_product(candidate_errors, taus);
  const double numerator_prior = prior.density(candidate);
  if (numerator_kernel == 0.0 || numerator_prior == 0.0) {
    return 0.0;
  }
  const double denominator = proposal.density(theta, candidate) * prior.density(theta) * kernel_product(errors, taus);
  if (!(denominator > 0.0)) {
    throw std::logic_error("mh_acceptance_probability: current state has zero target density");
  }
  const double numerator = proposal.density(candidate, theta) * numerator_prior * numerator_kernel;
  return std::min(1.0, numerator / denominator);
}

/// Absolute proposal scales per stage for a schedule.
inline std::vector<double> resolve_stage_scales(const MhConfig& config) {
  const std::size_t stages = config.schedule.stages();
  if (!config.stage_scales.empty()) {
    if (config.stage_scales.size() != stages) {
      throw std::invalid_argument("MhConfig: stage_scales must have one entry per tolerance row");
    }
    std::vector<double> scales;
    for (double s : config.stage_scales) {
      scales.push_back(config.proposal.scale() * s);
    }
    return scales;
  }
  std::vector<double> scales{config.proposal.scale()};
  const AnnealingPolicy policy{};
  for (std::size_t n = 1; n < stages; ++n) {
    scales.push_back(scales.back() *
                     scale_multiplier(policy, n + 1, config.schedule.row(n - 1), config.schedule.row(n)));
  }
  return scales;
}

namespace detail {

/// draw_start(rng) gives the starting value tried at each initialisation
/// attempt.
template <ErrorModel Problem, class DrawStart>
ChainTrace run_chain(const Problem& problem, const BoxPrior& prior, const MhConfig& config, DrawStart&& draw_start,
                     Rng& rng) {
  if (config.schedule.summaries() != problem.error_names().size()) {
    throw std::invalid_argument("mh_abcmu: tolerance rows do not match the number of summaries");
  }
  if (config.proposal.dimension() != prior.dimension()) {
    throw std::invalid_argument("mh_abcmu: proposal and prior differ in dimension");
  }
  const std::vector<double> scales = resolve_stage_scales(config);
  const std::size_t last_stage = config.schedule.stages() - 1;
  ChainTrace trace;

  std::optional<ErrorVector> init_errors;
  std::optional<ParameterVector> theta0;
  for (; trace.init_attempts < config.max_init_attempts; ++trace.init_attempts) {
    theta0 = draw_start(rng);
    init_errors = problem.simulate_errors(*theta0, rng);
    ++trace.simulations;
    if (init_errors && inside_windows(*init_errors, config.schedule.row(0))) {
      ++trace.init_attempts;
      break;
    }
    init_errors.reset();
  }
  if (!init_errors) {
    trace.status = RunStatus::cannot_initialize;
    return trace;
  }

  MhChainState state{std::move(*theta0), std::move(*init_errors), 0.0, 0, 0, 0, trace.simulations};
  auto advance_stage = [&] {
    while (state.stage < last_stage && inside_windows(state.errors, config.schedule.row(state.stage + 1))) {
      ++state.stage;
    }
    state.kernel_value = kernel_product(state.errors, config.schedule.row(state.stage));
    if (state.stage == last_stage && !trace.burn_in_iterations) {
      trace.burn_in_iterations = state.iteration;
      trace.burn_in_simulations = state.sim_count;
    }
  };
  advance_stage();

  const std::size_t record_hint = config.post_burn_in_iterations + 1024;
  trace.records.reserve(record_hint);
  while (true) {
    if (trace.burn_in_iterations) {
      if (state.iteration - *trace.burn_in_iterations >= config.post_burn_in_iterations) {
        break;
      }
    } else if (state.iteration >= config.max_burn_in_iterations) {
      trace.status = RunStatus::budget_exhausted;
      break;
    }
    const auto taus = config.schedule.row(state.stage);
    const auto proposal = config.proposal.with_scale(scales[state.stage]);
    ParameterVector candidate = proposal.sample(state.theta, rng);
    bool accepted = false;
    if (prior.density(candidate) > 0.0) {
      std::optional<ErrorVector> candidate_errors = problem.simulate_errors(candidate, rng);
      ++state.sim_count;
      if (candidate_errors) {
        const double alpha =
            mh_acceptance_probability(proposal, prior, state.theta, state.errors, candidate, *candidate_errors, taus);
        if (alpha >= 1.0 || (alpha > 0.0 && rng.uniform() < alpha)) {
          state.theta = std::move(candidate);
          state.errors = std::move(*candidate_errors);
          accepted = true;
        }
      }
    }
    ++state.iteration;
    const auto recorded_stage = static_cast<std::uint32_t>(state.stage);
    if (accepted) {
      ++state.accepted_count;
      advance_stage();
    }
    trace.records.push_back({state.iteration, recorded_stage,
                             std::vector<double>(state.theta.values().begin(), state.theta.values().end()),
                             std::vector<double>(state.errors.values().begin(), state.errors.values().end()),
                             accepted, state.sim_count});
  }
  trace.simulations = state.sim_count;
  trace.accepted = state.accepted_count;
  return trace;
}

}  // namespace detail

/// One chain of ABC-MH on the joint space with annealed tolerances. The
/// chain moves to the next tolerance row as soon as its current error
/// vector lies inside that row's windows, so the current state always has
/// positive target density. Initialisation re-simulates at theta0 until
/// the errors fit the first row.
template <ErrorModel Problem>
ChainTrace mh_abcmu(const Problem& problem, const BoxPrior& prior, const MhConfig& config,
                    const ParameterVector& theta0, Rng& rng) {
  if (theta0.size() != prior.dimension()) {
    throw std::invalid_argument("mh_abcmu: initial value and prior differ in dimension");
  }
  return detail::run_chain(problem, prior, config, [&](Rng&) { return theta0; }, rng);
}

struct ConvergenceReport {
  std::vector<std::optional<std::uint64_t>> burn_in_iterations;  // per chain
  /// Sum of per-chain burn-in iterations over chains that reached the
  /// final row.
  std::uint64_t total_burn_in_iterations = 0;
  std::uint64_t total_burn_in_simulations = 0;
  std::vector<RunStatus> chain_status;
  /// Gelman-Rubin potential scale reduction per parameter on post-burn-in
  /// states; empty with fewer than two complete chains.
  std::vector<double> r_hat;
};

struct MultiChainResult {
  std::vector<ChainTrace> chains;
  ConvergenceReport report;
  std::uint64_t total_simulations = 0;
};

/// Potential scale reduction factor for one parameter.
inline double gelman_rubin(const std::vector<std::vector<double>>& chains) {
  const std::size_t m = chains.size();
  std::size_t n = chains.front().size();
  for (const auto& c : chains) {
    n = std::min(n, c.size());
  }
  if (m < 2 || n < 2) {
    throw std::invalid_argument("gelman_rubin: need at least two chains of length two");
  }
  std::vector<double> means(m);
  double within = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double mean = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      mean += chains[j][t];
    }
    mean /= static_cast<double>(n);
    means[j] = mean;
    double var = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      var += (chains[j][t] - mean) * (chains[j][t] - mean);
    }
    within += var / static_cast<double>(n - 1);
  }
  within /= static_cast<double>(m);
  double grand = 0.0;
  for (double mu : means) {
    grand += mu;
  }
  grand /= static_cast<double>(m);
  double between = 0.0;
  for (double mu : means) {
    between += (mu - grand) * (mu - grand);
  }
  between *= static_cast<double>(n) / static_cast<double>(m - 1);
  const double nn = static_cast<double>(n);
  const double pooled = (nn - 1.0) / nn * within + between / nn;
  if (within == 0.0) {
    return pooled == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return std::sqrt(pooled / within);
}

/// Independent chains started from prior draws; each initialisation
/// attempt draws a fresh starting value. Chain c uses stream
/// (seed, chain c) for both its starting values and its moves.
template <ErrorModel Problem>
MultiChainResult mh_multichain(const Problem& problem, const BoxPrior& prior, const MhConfig& config,
                               std::size_t n_chains, const ExecutionOptions& exec) {
  if (n_chains == 0) {
    throw std::invalid_argument("mh_multichain: need at least one chain");
  }
  MultiChainResult result;
  result.chains.resize(n_chains);
  parallel_for(n_chains, exec.workers, [&](std::size_t c) {
    Rng rng = Rng::stream(exec.seed, {stream_tag::kMetropolis, c});
    result.chains[c] = detail::run_chain(problem, prior, config, [&](Rng& r) { return prior.sample(r); }, rng);
  });

  auto& report = result.report;
  std::vector<const ChainTrace*> complete;
  for (const auto& chain : result.chains) {
    report.burn_in_iterations.push_back(chain.burn_in_iterations);
    report.chain_status.push_back(chain.status);
    result.total_simulations += chain.simulations;
    if (chain.burn_in_iterations) {
      report.total_burn_in_iterations += *chain.burn_in_iterations;
      report.total_burn_in_simulations += chain.burn_in_simulations;
    }
    if (chain.status == RunStatus::complete) {
      complete.push_back(&chain);
    }
  }
  if (complete.size() >= 2 && config.post_burn_in_iterations >= 2) {
    for (std::size_t d = 0; d < prior.dimension(); ++d) {
      std::vector<std::vector<double>> series;
      for (const ChainTrace* chain : complete) {
        std::vector<double> s;
        for (const auto& r : chain->post_burn_in()) {
          s.push_back(r.theta[d]);
        }
        series.push_back(std::move(s));
      }
      report.r_hat.push_back(gelman_rubin(series));
    }
  }
  return result;
}

}  // namespace abcmu
