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

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace abcmu {

enum class RunStatus {
  complete,
  budget_exhausted,   // simulation cap hit before the requested sample size
  stage_stalled,      // a SIS stage hit its attempt cap
  cannot_initialize,  // an MH chain never found a state inside the first windows
};

constexpr std::string_view to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::complete:
      return "complete";
    case RunStatus::budget_exhausted:
      return "budget-exhausted";
    case RunStatus::stage_stalled:
      return "stage-stalled";
    case RunStatus::cannot_initialize:
      return "cannot-initialize";
  }
  return "unknown";
}

/// Execution settings shared by all samplers. Results depend on `seed`
/// only: `workers` and `batch_size` change speed, never output.
struct ExecutionOptions {
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  /// Candidates evaluated speculatively per round when workers > 1.
  std::size_t batch_size = 64;
};

}  // namespace abcmu
