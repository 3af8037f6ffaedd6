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
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "abcmu/kernel.hpp"
#include "abcmu/model.hpp"
#include "abcmu/parallel.hpp"
#include "abcmu/prior.hpp"
#include "abcmu/proposal.hpp"
#include "abcmu/rng.hpp"
#include "abcmu/samplers/annealing.hpp"
#include "abcmu/samplers/collect.hpp"
#include "abcmu/samplers/common.hpp"

namespace abcmu {

struct Particle {
  std::int64_t ancestor = -1;  // index into the previous generation, -1 at stage 1
  ParameterVector theta;
  ErrorVector errors;
  double w = 0.0;  // unnormalised weight
  double W = 0.0;  // normalised weight
};

struct ParticleSystem {
  std::size_t stage = 1;  // 1-based
  std::vector<Particle> particles;
  std::vector<double> taus;
  std::uint64_t cumulative_sim_count = 0;

  std::vector<double> normalized_weights() const {
    std::vector<double> out;
    out.reserve(particles.size());
    for (const auto& p : particles) {
      out.push_back(p.W);
    }
    return out;
  }
};

struct StageMetadata {
  std::size_t stage = 1;
  std::vector<double> taus;
  std::vector<double> proposal_stddevs;  // effective, empty at stage 1
  std::uint64_t simulations = 0;          // simulator calls in this stage
  std::uint64_t attempts = 0;             // rejection-control attempts
  std::uint64_t executed_simulations = 0;
  double ess = 0.0;
};

enum class ProposalRule {
  annealed,           // base stddevs times a per-stage scale
  weighted_variance,  // stddev_d = sqrt(2 * weighted variance of previous particles)
};

struct SisConfig {
  std::size_t n_particles = 1000;
  std::size_t n_stages = 4;  // total stages including stage 1
  AnnealingPolicy annealing;
  /// Explicit rows for AnnealingMode::fixed_schedule; must have n_stages rows.
  std::optional<ToleranceSchedule> schedule;
  /// Stage-1 row for prior initialisation. Empty: pilot run with q = 1.
  std::vector<double> initial_row;
  /// Floor of the annealed rows; the last stage is run at or above it.
  std::vector<double> final_row;
  GaussianRandomWalkProposal proposal{{1.0}};
  ProposalRule proposal_rule = ProposalRule::annealed;
  /// Per-stage attempt cap. 0 means 10^4 * n_particles.
  std::uint64_t max_attempts_per_stage = 0;
  std::size_t pilot_size = 1000;
};

struct SeedState {
  ParameterVector theta;
  ErrorVector errors;
};

/// Stage 1 drawn from the prior and kept inside the first windows.
struct InitFromPrior {};

/// Stage 1 given as equally weighted states, e.g. MH output.
struct InitFromParticles {
  std::vector<SeedState> states;
  std::vector<double> taus;                  // windows the states satisfy
  std::uint64_t prior_simulations = 0;       // simulations spent producing them
};

using SisInit = std::variant<InitFromPrior, InitFromParticles>;

struct SisResult {
  std::vector<ParticleSystem> history;  // one system per completed stage
  std::vector<StageMetadata> stages;
  RunStatus status = RunStatus::complete;
  /// Simulations spent before the last completed stage started.
  std::uint64_t burn_in_simulations = 0;

  const ParticleSystem& final_system() const { return history.back(); }
  std::uint64_t total_simulations() const { return history.empty() ? 0 : history.back().cumulative_sim_count; }
};

namespace detail {

inline double ess_of(const std::vector<Particle>& particles) {
  double sum_sq = 0.0;
  for (const auto& p : particles) {
    sum_sq += p.W * p.W;
  }
  return 1.0 / sum_sq;
}

inline void normalize(std::vector<Particle>& particles) {
  double total = 0.0;
  for (const auto& p : particles) {
    total += p.w;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::runtime_error("sis_abcmu: weights do not normalise");
  }
  for (auto& p : particles) {
    p.W = p.w / total;
  }
}

inline std::vector<double> weighted_stddevs(const std::vector<Particle>& particles, std::size_t dim) {
  std::vector<double> out(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    double mean = 0.0;
    for (const auto& p : particles) {
      mean += p.W * p.theta[d];
    }
    double var = 0.0;
    for (const auto& p : particles) {
      var += p.W * (p.theta[d] - mean) * (p.theta[d] - mean);
    }
    out[d] = std::sqrt(2.0 * var);
  }
  return out;
}

}  // namespace detail

/// Sequential importance sampling on the joint (theta, error) space with
/// Rao-Blackwellised rejection control. Stage n >= 2 draws an ancestor
/// from the previous weights, perturbs it with M_n, simulates, keeps the
/// candidate iff every |e_k| <= tau_nk / 2 and weights it by
///   w = pi(theta) / sum_j W_{n-1}^j M_n(theta_{n-1}^j; theta).
/// Candidate j of stage n uses stream (seed, n, j).
template <ErrorModel Problem>
SisResult sis_abcmu(const Problem& problem, const BoxPrior& prior, const SisConfig& config, const SisInit& init,
                    const ExecutionOptions& exec) {
  const std::size_t k_count = problem.error_names().size();
  const std::size_t dim = prior.dimension();
  if (config.n_particles == 0 || config.n_stages == 0) {
    throw std::invalid_argument("sis_abcmu: need at least one particle and one stage");
  }
  if (config.proposal.dimension() != dim) {
    throw std::invalid_argument("sis_abcmu: proposal dimension differs from the prior");
  }
  config.annealing.validate();
  const bool fixed = config.annealing.mode == AnnealingMode::fixed_schedule;
  if (fixed) {
    if (!config.schedule || config.schedule->stages() != config.n_stages || config.schedule->summaries() != k_count) {
      throw std::invalid_argument("sis_abcmu: fixed schedule needs n_stages rows of K tolerances");
    }
  } else if (config.final_row.size() != k_count) {
    throw std::invalid_argument("sis_abcmu: final_row must have K tolerances");
  }
  const std::uint64_t max_attempts =
      config.max_attempts_per_stage > 0 ? config.max_attempts_per_stage : 10'000ULL * config.n_particles;

  SisResult result;

  // Stage 1.
  ParticleSystem current;
  current.stage = 1;
  StageMetadata meta1;
  if (const auto* seeds = std::get_if<InitFromParticles>(&init)) {
    if (seeds->states.empty()) {
      throw std::invalid_argument("sis_abcmu: no seed particles");
    }
    current.taus = seeds->taus;
    if (current.taus.size() != k_count) {
      throw std::invalid_argument("sis_abcmu: seed tolerance row must have K entries");
    }
    for (const auto& s : seeds->states) {
      if (!inside_windows(s.errors, current.taus)) {
        throw std::invalid_argument("sis_abcmu: seed particle lies outside its tolerance windows");
      }
      current.particles.push_back({-1, s.theta, s.errors, 1.0, 0.0});
    }
    current.cumulative_sim_count = seeds->prior_simulations;
  } else {
    if (fixed) {
      const auto row = config.schedule->row(0);
      current.taus.assign(row.begin(), row.end());
    } else if (!config.initial_row.empty()) {
      current.taus = config.initial_row;
    } else {
      current.taus = pilot_initial_row(problem, prior, config.pilot_size, exec, 1.0);
      current.cumulative_sim_count += config.pilot_size;
      for (std::size_t k = 0; k < k_count; ++k) {
        current.taus[k] = std::max(current.taus[k], config.final_row[k]);
      }
    }
    if (current.taus.size() != k_count) {
      throw std::invalid_argument("sis_abcmu: initial row must have K tolerances");
    }
    auto collected = detail::collect_accepted<SeedState>(
        config.n_particles, max_attempts, exec, [&](std::uint64_t j) {
          detail::Attempt<SeedState> a;
          Rng rng = Rng::stream(exec.seed, {stream_tag::kSequential, 1, j});
          ParameterVector theta = prior.sample(rng);
          auto errors = problem.simulate_errors(theta, rng);
          a.simulated = true;
          if (errors && inside_windows(*errors, current.taus)) {
            a.accepted = SeedState{std::move(theta), std::move(*errors)};
          }
          return a;
        });
    meta1.simulations = collected.simulations;
    meta1.attempts = collected.attempts;
    meta1.executed_simulations = collected.executed_simulations;
    current.cumulative_sim_count += collected.simulations;
    if (collected.capped) {
      result.status = RunStatus::stage_stalled;
      result.stages.push_back(meta1);
      return result;
    }
    for (auto& [j, s] : collected.accepted) {
      const double w = kernel_product(s.errors, current.taus);
      current.particles.push_back({-1, std::move(s.theta), std::move(s.errors), w, 0.0});
    }
  }
  detail::normalize(current.particles);
  meta1.stage = 1;
  meta1.taus = current.taus;
  meta1.ess = detail::ess_of(current.particles);
  result.stages.push_back(meta1);
  result.history.push_back(current);

  double scale = config.proposal.scale();
  for (std::size_t n = 2; n <= config.n_stages; ++n) {
    const ParticleSystem& previous = result.history.back();
    std::vector<double> taus;
    if (fixed) {
      const auto row = config.schedule->row(n - 1);
      taus.assign(row.begin(), row.end());
    } else {
      std::vector<ErrorVector> recent;
      recent.reserve(previous.particles.size());
      for (const auto& p : previous.particles) {
        recent.push_back(p.errors);
      }
      taus = anneal_next(config.annealing, previous.taus, config.final_row, recent);
    }
    for (std::size_t k = 0; k < k_count; ++k) {
      if (taus[k] > previous.taus[k]) {
        throw std::invalid_argument("sis_abcmu: tolerances must not increase between stages");
      }
    }

    std::vector<double> stddevs;
    if (config.proposal_rule == ProposalRule::weighted_variance) {
      stddevs = detail::weighted_stddevs(previous.particles, dim);
      for (std::size_t d = 0; d < dim; ++d) {
        if (!(stddevs[d] > 0.0)) {
          stddevs[d] = config.proposal.stddevs()[d] * config.proposal.scale();
        }
      }
    } else {
      scale *= scale_multiplier(config.annealing, n, previous.taus, taus);
      for (double sd : config.proposal.stddevs()) {
        stddevs.push_back(sd * scale);
      }
    }
    const GaussianRandomWalkProposal kernel(stddevs);

    std::vector<double> cumulative(previous.particles.size());
    double running = 0.0;
    for (std::size_t i = 0; i < previous.particles.size(); ++i) {
      running += previous.particles[i].W;
      cumulative[i] = running;
    }

    struct Candidate {
      std::int64_t ancestor;
      ParameterVector theta;
      ErrorVector errors;
    };
    auto collected = detail::collect_accepted<Candidate>(
        config.n_particles, max_attempts, exec, [&](std::uint64_t j) {
          detail::Attempt<Candidate> a;
          Rng rng = Rng::stream(exec.seed, {stream_tag::kSequential, n, j});
          const double u = rng.uniform() * running;
          const auto pick = static_cast<std::size_t>(
              std::min<std::ptrdiff_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin(),
                                       static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
          ParameterVector theta = kernel.sample(previous.particles[pick].theta, rng);
          if (prior.density(theta) == 0.0) {
            return a;
          }
          auto errors = problem.simulate_errors(theta, rng);
          a.simulated = true;
          if (errors && inside_windows(*errors, taus)) {
            a.accepted = Candidate{static_cast<std::int64_t>(pick), std::move(theta), std::move(*errors)};
          }
          return a;
        });

    StageMetadata meta;
    meta.stage = n;
    meta.taus = taus;
    meta.proposal_stddevs = stddevs;
    meta.simulations = collected.simulations;
    meta.attempts = collected.attempts;
    meta.executed_simulations = collected.executed_simulations;
    if (collected.capped) {
      result.status = RunStatus::stage_stalled;
      result.stages.push_back(meta);
      break;
    }

    ParticleSystem next;
    next.stage = n;
    next.taus = taus;
    next.cumulative_sim_count = previous.cumulative_sim_count + collected.simulations;
    std::vector<double> weights(collected.accepted.size());
    parallel_for(collected.accepted.size(), exec.workers, [&](std::size_t i) {
      const auto& c = collected.accepted[i].second;
      double denominator = 0.0;
      for (const auto& p : previous.particles) {
        denominator += p.W * kernel.density(p.theta, c.theta);
      }
      weights[i] = prior.density(c.theta) / denominator;
    });
    next.particles.reserve(collected.accepted.size());
    for (std::size_t i = 0; i < collected.accepted.size(); ++i) {
      auto& c = collected.accepted[i].second;
      next.particles.push_back(Particle{c.ancestor, std::move(c.theta), std::move(c.errors), weights[i], 0.0});
    }
    detail::normalize(next.particles);
    meta.ess = detail::ess_of(next.particles);
    result.stages.push_back(meta);
    result.history.push_back(std::move(next));
  }
  result.burn_in_simulations =
      result.history.back().cumulative_sim_count - result.stages[result.history.size() - 1].simulations;
  return result;
}

}  // namespace abcmu
