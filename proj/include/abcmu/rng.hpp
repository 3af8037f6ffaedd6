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

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace abcmu {

/// SplitMix64 step. Used only to expand seeds and to mix stream paths.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31U);
}

/// xoshiro256** generator with explicit stream derivation.
///
/// Every logical task (an MH chain, a rejection attempt, a SIS candidate)
/// owns a generator obtained from `Rng::stream(seed, {tag, i, j, ...})`.
/// Streams depend only on the seed and the path, never on which worker
/// thread happens to run the task, so serial and parallel runs agree.
///
/// Satisfies std::uniform_random_bit_generator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : state_) {
      word = splitmix64(sm);
    }
  }

  /// Generator for the task identified by `path` under `seed`.
  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = seed;
    std::uint64_t mixed = splitmix64(h);
    for (std::uint64_t p : path) {
      std::uint64_t s = mixed ^ (p + 0x632be59bd9b4e019ULL);
      mixed = splitmix64(s);
    }
    return Rng(mixed);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17U;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11U) * 0x1.0p-53; }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

/// Stream tags keep the sampler families from sharing streams under one seed.
namespace stream_tag {
inline constexpr std::uint64_t kRejection = 1;
inline constexpr std::uint64_t kMetropolis = 2;
inline constexpr std::uint64_t kSequential = 3;
inline constexpr std::uint64_t kPilot = 4;
inline constexpr std::uint64_t kObservation = 5;
}  // namespace stream_tag

}  // namespace abcmu
