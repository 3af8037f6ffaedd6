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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abcmu/diagnostics/performance.hpp"
#include "abcmu/model.hpp"
#include "abcmu/prior.hpp"
#include "abcmu/samplers/common.hpp"
#include "abcmu/samplers/mh.hpp"
#include "abcmu/samplers/sis.hpp"

namespace abcmu {

struct HybridConfig {
  MhConfig mh;
  std::size_t n_chains = 4;
  std::size_t thin = 20;     // keep every thin-th post-burn-in state
  std::size_t n_seed = 100;  // seeds handed to the particle stage
  std::size_t n_particles = 1000;
  std::size_t extra_stages = 2;
  /// Proposal for the particle stages; unset means the MH proposal at
  /// its final-stage scale.
  std::optional<GaussianRandomWalkProposal> sis_proposal;
  ProposalRule proposal_rule = ProposalRule::weighted_variance;
  std::uint64_t max_attempts_per_stage = 0;
};

struct HybridResult {
  MultiChainResult mh;
  SisResult sis;
  std::vector<std::pair<std::size_t, std::uint64_t>> seed_origin;  // (chain, iteration)
  diagnostics::PerformanceReport performance;

  const ParticleSystem& final_system() const { return sis.final_system(); }
  RunStatus status() const noexcept { return sis.status; }
};

/// Every `thin`-th post-burn-in state of each completed chain, pooled in
/// chain order.
inline std::vector<std::pair<std::size_t, const MhRecord*>> thinned_states(const MultiChainResult& mh,
                                                                           std::size_t thin) {
  if (thin == 0) {
    throw std::invalid_argument("thinned_states: thin must be positive");
  }
  std::vector<std::pair<std::size_t, const MhRecord*>> pooled;
  for (std::size_t c = 0; c < mh.chains.size(); ++c) {
    if (mh.chains[c].status != RunStatus::complete) {
      continue;
    }
    const auto post = mh.chains[c].post_burn_in();
    for (std::size_t i = thin - 1; i < post.size(); i += thin) {
      pooled.emplace_back(c, &post[i]);
    }
  }
  return pooled;
}

/// Particle stage of hybrid_abcmu on chains already run with config.mh.
template <ErrorModel Problem>
HybridResult hybrid_from_chains(const Problem& problem, const BoxPrior& prior, const HybridConfig& config,
                                MultiChainResult chains, const ExecutionOptions& exec) {
  if (config.n_seed == 0 || config.extra_stages == 0) {
    throw std::invalid_argument("hybrid_abcmu: need at least one seed and one extra stage");
  }
  HybridResult result;
  result.mh = std::move(chains);
  const auto pooled = thinned_states(result.mh, config.thin);
  if (pooled.size() < config.n_seed) {
    throw std::invalid_argument("hybrid_abcmu: only " + std::to_string(pooled.size()) +
                                " thinned post-burn-in states for " + std::to_string(config.n_seed) + " seeds");
  }

  const auto final_span = config.mh.schedule.final_row();
  const std::vector<double> final_row(final_span.begin(), final_span.end());
  InitFromParticles seeds;
  seeds.taus = final_row;
  seeds.prior_simulations = result.mh.total_simulations;
  for (std::size_t i = 0; i < config.n_seed; ++i) {
    const std::size_t pick = i * pooled.size() / config.n_seed;
    const auto& [chain, record] = pooled[pick];
    seeds.states.push_back({ParameterVector(record->theta, prior.shared_names()), ErrorVector(record->errors)});
    result.seed_origin.emplace_back(chain, record->iteration);
  }

  SisConfig sis;
  sis.n_particles = config.n_particles;
  sis.n_stages = config.extra_stages + 1;
  sis.annealing.mode = AnnealingMode::fixed_schedule;
  sis.schedule = ToleranceSchedule(std::vector<std::vector<double>>(sis.n_stages, final_row));
  sis.final_row = final_row;
  if (config.sis_proposal) {
    sis.proposal = *config.sis_proposal;
  } else {
    sis.proposal = config.mh.proposal.with_scale(resolve_stage_scales(config.mh).back());
  }
  sis.proposal_rule = config.proposal_rule;
  sis.max_attempts_per_stage = config.max_attempts_per_stage;
  result.sis = sis_abcmu(problem, prior, sis, seeds, exec);
  if (result.sis.history.size() > 1) {
    result.performance = diagnostics::performance_report(result.sis);
  }
  return result;
}

/// MH chains anneal to the final tolerance row; n_seed thinned
/// post-burn-in states seed a particle sampler that runs extra_stages
/// more stages at the final row. Simulation counts include the chains.
template <ErrorModel Problem>
HybridResult hybrid_abcmu(const Problem& problem, const BoxPrior& prior, const HybridConfig& config,
                          const ExecutionOptions& exec) {
  return hybrid_from_chains(problem, prior, config, mh_multichain(problem, prior, config.mh, config.n_chains, exec),
                            exec);
}

}  // namespace abcmu
