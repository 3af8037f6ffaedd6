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

#include <stdexcept>
#include <string>

namespace abcmu {

/// Input data carries no spread along some axis (flat range, constant series).
class DegenerateData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A single simulation produced output that cannot be compared with the
/// observed data. Samplers treat it as a rejected draw that still counts
/// against the simulation budget.
class SimulationRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A log-ratio or similar distance was asked for outside its domain.
class DistanceDomainError : public SimulationRejected {
 public:
  using SimulationRejected::SimulationRejected;
};

/// A summary statistic is undefined for this data, e.g. an
/// autocorrelation of too short or constant a series.
class UndefinedSummary : public SimulationRejected {
 public:
  using SimulationRejected::SimulationRejected;
};

/// Network growth could not reach its target order within the step cap.
class GrowthStalled : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace abcmu
