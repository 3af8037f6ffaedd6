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
#include <limits>
#include <stdexcept>
#include <vector>

#include "abcmu/diagnostics/ess.hpp"
#include "abcmu/errors.hpp"
#include "abcmu/samplers/mh.hpp"
#include "abcmu/samplers/sis.hpp"

namespace abcmu::diagnostics {

/// Burn-in, ESS per 1000 retained samples and simulations per effective
/// sample.
struct PerformanceReport {
  std::uint64_t burn_in = 0;  // simulations
  double ess_per_1000 = 0.0;
  double sims_per_ess = 0.0;
  double ess = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t total_sims = 0;
};

inline PerformanceReport performance_report(std::uint64_t burn_in_sims, std::uint64_t total_sims,
                                            const EssReport& ess) {
  if (ess.n_samples == 0) {
    throw std::invalid_argument("performance_report: no post-burn-in samples");
  }
  if (!(ess.ess > 0.0)) {
    throw std::invalid_argument("performance_report: ESS must be positive");
  }
  if (burn_in_sims > total_sims) {
    throw std::invalid_argument("performance_report: burn-in exceeds the total simulation count");
  }
  PerformanceReport r;
  r.burn_in = burn_in_sims;
  r.ess = ess.ess;
  r.n_samples = ess.n_samples;
  r.total_sims = total_sims;
  r.ess_per_1000 = ess.ess / static_cast<double>(ess.n_samples) * 1000.0;
  r.sims_per_ess = static_cast<double>(total_sims) / ess.ess;
  return r;
}

/// ESS of the post-burn-in part of several chains, given as
/// chains[c][d] = series of parameter d in chain c. Per parameter the
/// Sokal ESS is summed over chains and the smallest parameter wins. A
/// chain too short or constant after burn-in counts as one sample.
inline EssReport mcmc_ess(const std::vector<std::vector<std::vector<double>>>& chains, double window_constant = 6.0) {
  std::size_t dim = 0;
  for (const auto& chain : chains) {
    dim = std::max(dim, chain.size());
  }
  std::size_t n_total = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < dim; ++d) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& chain : chains) {
      if (d >= chain.size() || chain[d].empty()) {
        continue;
      }
      const auto& series = chain[d];
      n += series.size();
      if (series.size() < 10) {
        sum += 1.0;
        continue;
      }
      try {
        sum += ess_sokal(series, window_constant).ess;
      } catch (const DegenerateData&) {
        sum += 1.0;
      }
    }
    n_total = n;
    best = std::min(best, sum);
  }
  if (n_total == 0) {
    throw std::invalid_argument("mcmc_ess: no post-burn-in samples");
  }
  return {EssMethod::sokal_autocorrelation, best, n_total, std::nullopt, std::nullopt};
}

inline EssReport mcmc_ess(const MultiChainResult& result, double window_constant = 6.0) {
  std::vector<std::vector<std::vector<double>>> chains;
  for (const auto& chain : result.chains) {
    if (chain.status != RunStatus::complete) {
      continue;
    }
    const auto post = chain.post_burn_in();
    if (post.empty()) {
      continue;
    }
    std::vector<std::vector<double>> series(post.front().theta.size());
    for (const auto& r : post) {
      for (std::size_t d = 0; d < series.size(); ++d) {
        series[d].push_back(r.theta[d]);
      }
    }
    chains.push_back(std::move(series));
  }
  return mcmc_ess(chains, window_constant);
}

inline PerformanceReport performance_report(const MultiChainResult& result, double window_constant = 6.0) {
  return performance_report(result.report.total_burn_in_simulations, result.total_simulations,
                            mcmc_ess(result, window_constant));
}

/// Final-stage weights of a particle run; burn-in is everything spent
/// before the final stage.
inline PerformanceReport performance_report(const SisResult& result) {
  if (result.history.empty()) {
    throw std::invalid_argument("performance_report: particle run has no completed stage");
  }
  const auto weights = result.final_system().normalized_weights();
  return performance_report(result.burn_in_simulations, result.total_simulations(), ess_weights(weights));
}

}  // namespace abcmu::diagnostics
