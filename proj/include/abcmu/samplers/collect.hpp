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
#include <vector>

#include "abcmu/parallel.hpp"
#include "abcmu/samplers/common.hpp"

namespace abcmu::detail {

template <class Payload>
struct Attempt {
  bool simulated = false;          // did this attempt call the simulator
  std::optional<Payload> accepted;  // set iff the candidate was accepted
};

template <class Payload>
struct Collected {
  std::vector<std::pair<std::uint64_t, Payload>> accepted;  // (attempt index, payload)
  std::uint64_t attempts = 0;     // serial-equivalent attempts
  std::uint64_t simulations = 0;  // serial-equivalent simulator calls
  std::uint64_t executed_simulations = 0;
  bool capped = false;
};

/// Evaluates attempts 0, 1, 2, ... until `needed` are accepted or
/// `max_attempts` is reached. With several workers a round of attempts is
/// evaluated speculatively and then scanned in index order, so the accepted
/// set equals that of the serial loop; work past the stopping point shows
/// up only in executed_simulations.
template <class Payload, class Eval>
Collected<Payload> collect_accepted(std::size_t needed, std::uint64_t max_attempts, const ExecutionOptions& exec,
                                    Eval&& evaluate) {
  Collected<Payload> out;
  if (needed == 0) {
    return out;
  }
  out.accepted.reserve(needed);
  const std::size_t batch = exec.workers > 1 ? std::max<std::size_t>(exec.batch_size, exec.workers) : 1;
  std::vector<Attempt<Payload>> round_results(batch);
  while (out.accepted.size() < needed) {
    if (out.attempts >= max_attempts) {
      out.capped = true;
      break;
    }
    const std::uint64_t first = out.attempts;
    const auto round = static_cast<std::size_t>(std::min<std::uint64_t>(batch, max_attempts - first));
    parallel_for(round, exec.workers, [&](std::size_t j) { round_results[j] = evaluate(first + j); });
    for (std::size_t j = 0; j < round; ++j) {
      out.executed_simulations += round_results[j].simulated ? 1 : 0;
    }
    for (std::size_t j = 0; j < round && out.accepted.size() < needed; ++j) {
      auto& r = round_results[j];
      ++out.attempts;
      out.simulations += r.simulated ? 1 : 0;
      if (r.accepted) {
        out.accepted.emplace_back(first + j, std::move(*r.accepted));
      }
    }
  }
  return out;
}

}  // namespace abcmu::detail
