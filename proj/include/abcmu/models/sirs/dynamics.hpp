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
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "abcmu/rng.hpp"

namespace abcmu::sirs {

inline constexpr double kDaysPerYear = 365.0;
inline constexpr std::size_t kStepsPerWeek = 14;  // dt = 0.5 days

struct SirsParams {
  double r0 = 2.0;
  double duration_infection = 2.5;  // D, days
  double duration_immunity = 4.0;   // Gamma, years
  double seasonality = 0.2;         // s
  double reporting = 0.1;           // rho

  void validate() const {
    if (!(r0 > 0.0) || !(duration_infection > 0.0) || !(duration_immunity > 0.0) || !std::isfinite(r0) ||
        !std::isfinite(duration_infection) || !std::isfinite(duration_immunity)) {
      throw std::invalid_argument("SirsParams: R0, D and Gamma must be positive");
    }
    if (!(seasonality >= 0.0 && seasonality <= 1.0)) {
      throw std::invalid_argument("SirsParams: seasonality must lie in [0, 1]");
    }
    if (!(reporting > 0.0 && reporting <= 1.0)) {
      throw std::invalid_argument("SirsParams: reporting fraction must lie in (0, 1]");
    }
  }
};

struct SirsEnvironment {
  /// Population per observed week; a single value means constant.
  std::vector<double> population{1.6e7};
  double mu = 1.0 / (80.0 * kDaysPerYear);
  /// True-positive rate per week of the year, 52 cyclic values or one.
  std::vector<double> true_positive_rate{1.0};
  double travelers_per_year = 5e6;
  /// Day of the year (Jan 1 = 0) on which the first observed week starts.
  double start_day = 0.0;
  /// Seasons start with the week containing this day of the year.
  double season_start_day = 181.0;

  void validate() const {
    if (population.empty()) {
      throw std::invalid_argument("SirsEnvironment: empty population series");
    }
    for (double n : population) {
      if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("SirsEnvironment: population must be positive");
      }
    }
    if (true_positive_rate.empty()) {
      throw std::invalid_argument("SirsEnvironment: empty true-positive-rate series");
    }
    for (double f : true_positive_rate) {
      if (!(f > 0.0 && f <= 1.0)) {
        throw std::invalid_argument("SirsEnvironment: true-positive rates must lie in (0, 1]");
      }
    }
    if (!(mu >= 0.0) || !(travelers_per_year >= 0.0)) {
      throw std::invalid_argument("SirsEnvironment: mu and travelers must be nonnegative");
    }
  }

  double population_at(std::int64_t week) const {
    if (week <= 0) {
      return population.front();
    }
    const auto w = static_cast<std::size_t>(week);
    return w < population.size() ? population[w] : population.back();
  }

  double true_positive_at(double day) const {
    if (true_positive_rate.size() == 1) {
      return true_positive_rate.front();
    }
    const double doy = day_of_year(day);
    const auto w = static_cast<std::size_t>(doy / 7.0) % true_positive_rate.size();
    return true_positive_rate[w];
  }

  static double day_of_year(double day) {
    const double r = std::fmod(day, kDaysPerYear);
    return r < 0.0 ? r + kDaysPerYear : r;
  }
};

/// Per-day rates of the SIRS system.
struct SirsRates {
  double beta = 0.0;
  double nu = 0.0;
  double gamma = 0.0;
  double mu = 0.0;
  double visitors = 0.0;  // I_v
  double seasonality = 0.0;
  double reporting = 1.0;
};

/// nu = 1/D, gamma = 1/(365 Gamma), beta = R0 (nu + mu) and
///   I_v = (mu + gamma)/(mu + gamma + nu) (1 - 1/R0) travelers / 365,
/// clamped at 0 when R0 <= 1.
inline SirsRates derive_rates(const SirsParams& p, double mu, double travelers_per_year = 5e6) {
  p.validate();
  SirsRates r;
  r.nu = 1.0 / p.duration_infection;
  r.gamma = 1.0 / (kDaysPerYear * p.duration_immunity);
  r.mu = mu;
  r.beta = p.r0 * (r.nu + mu);
  r.visitors = std::max(0.0, (mu + r.gamma) / (mu + r.gamma + r.nu) * (1.0 - 1.0 / p.r0) * travelers_per_year /
                                 kDaysPerYear);
  r.seasonality = p.seasonality;
  r.reporting = p.reporting;
  return r;
}

/// beta (1 + s sin(2 pi t / 365)); t is reduced modulo 365 first so the
/// period is exact in floating point.
inline double seasonal_beta(double beta, double s, double t_days) {
  return beta * (1.0 + s * std::sin(2.0 * std::numbers::pi * SirsEnvironment::day_of_year(t_days) / kDaysPerYear));
}

struct SirsState {
  std::int64_t S = 0;
  std::int64_t I = 0;
  std::int64_t R = 0;
  double t = 0.0;

  std::int64_t total() const noexcept { return S + I + R; }
  friend bool operator==(const SirsState&, const SirsState&) = default;
};

struct StepResult {
  std::int64_t infections = 0;
  std::int64_t births = 0;
  std::int64_t deaths = 0;
};

namespace detail {

inline std::int64_t binomial(std::int64_t n, double p, Rng& rng) {
  if (n <= 0 || !(p > 0.0)) {
    return 0;
  }
  if (p >= 1.0) {
    return n;
  }
  return std::binomial_distribution<std::int64_t>(n, p)(rng);
}

inline std::int64_t poisson(double mean, Rng& rng) {
  if (!(mean > 0.0)) {
    return 0;
  }
  return std::poisson_distribution<std::int64_t>(mean)(rng);
}

/// Exits from a compartment of size n with competing rates (a, b): the
/// total exit count is Binomial(n, 1 - exp(-(a+b) dt)), split
/// Binomial(exits, a/(a+b)) into the first channel.
inline std::pair<std::int64_t, std::int64_t> competing_exits(std::int64_t n, double a, double b, double dt,
                                                             Rng& rng) {
  const double total = a + b;
  if (!(total > 0.0) || n <= 0) {
    return {0, 0};
  }
  const std::int64_t exits = binomial(n, -std::expm1(-total * dt), rng);
  const std::int64_t first = binomial(exits, a / total, rng);
  return {first, exits - first};
}

}  // namespace detail

/// One Euler-multinomial step of length dt. Births Poisson(mu N dt) enter
/// S; all transitions use the state at the start of the step.
inline StepResult step_euler_multinomial(SirsState& state, const SirsRates& rates, double population, double dt,
                                         Rng& rng) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("step_euler_multinomial: dt must be positive");
  }
  if (state.S < 0 || state.I < 0 || state.R < 0) {
    throw std::invalid_argument("step_euler_multinomial: negative compartment");
  }
  const double beta_t = seasonal_beta(rates.beta, rates.seasonality, state.t);
  const double force = beta_t * (static_cast<double>(state.I) + rates.visitors) / population;
  const auto [infections, deaths_s] = detail::competing_exits(state.S, force, rates.mu, dt, rng);
  const auto [recoveries, deaths_i] = detail::competing_exits(state.I, rates.nu, rates.mu, dt, rng);
  const auto [waned, deaths_r] = detail::competing_exits(state.R, rates.gamma, rates.mu, dt, rng);
  const std::int64_t births = detail::poisson(rates.mu * population * dt, rng);
  state.S += births - infections - deaths_s + waned;
  state.I += infections - recoveries - deaths_i;
  state.R += recoveries - waned - deaths_r;
  state.t += dt;
  if (state.S < 0 || state.I < 0 || state.R < 0) {
    throw std::logic_error("step_euler_multinomial: compartment went negative");
  }
  return {infections, births, deaths_s + deaths_i + deaths_r};
}

/// Deterministic endemic equilibrium of the non-seasonal system without
/// visitors: S = N/R0, I = N (1 - 1/R0)(mu + gamma)/(mu + gamma + nu).
inline SirsState endemic_state(const SirsRates& rates, double population, double t = 0.0) {
  const double r0 = rates.beta / (rates.nu + rates.mu);
  const double n = std::round(population);
  if (!(r0 > 1.0)) {
    return {static_cast<std::int64_t>(n), 0, 0, t};
  }
  const double i = (1.0 - 1.0 / r0) * (rates.mu + rates.gamma) / (rates.mu + rates.gamma + rates.nu);
  const auto S = static_cast<std::int64_t>(std::round(n / r0));
  const auto I = static_cast<std::int64_t>(std::round(n * i));
  return {S, I, static_cast<std::int64_t>(n) - S - I, t};
}

struct IncidenceSeries {
  std::vector<double> counts;               // weekly reported cases
  std::vector<std::size_t> season_starts;   // weeks that open a season
  std::vector<double> population;           // per week
  bool extinct = false;
};

/// Weeks whose 7 days include `season_start_day`, given the day of the
/// year on which week 0 starts.
inline std::vector<std::size_t> season_starts_for(std::size_t weeks, double start_day, double season_start_day) {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < weeks; ++w) {
    const double doy = SirsEnvironment::day_of_year(start_day + 7.0 * static_cast<double>(w));
    const double ahead = SirsEnvironment::day_of_year(season_start_day - doy);
    if (ahead < 7.0) {
      out.push_back(w);
    }
  }
  return out;
}

/// Integrates the state for burn_in_weeks + horizon_weeks weeks from the
/// endemic equilibrium (or `initial`), accumulating rho I / f_t per day,
/// and reports Poisson(weekly flow) counts for the horizon weeks.
inline IncidenceSeries simulate_sirs(const SirsRates& rates, const SirsEnvironment& env, std::size_t horizon_weeks,
                                     std::size_t burn_in_weeks, Rng& rng,
                                     std::optional<SirsState> initial = std::nullopt) {
  env.validate();
  if (horizon_weeks == 0) {
    throw std::invalid_argument("simulate_sirs: empty horizon");
  }
  constexpr double dt = 7.0 / static_cast<double>(kStepsPerWeek);
  const double t0 = env.start_day - 7.0 * static_cast<double>(burn_in_weeks);
  SirsState state = initial ? *initial : endemic_state(rates, env.population_at(0), t0);
  state.t = t0;
  IncidenceSeries out;
  out.counts.reserve(horizon_weeks);
  const auto total_weeks = static_cast<std::int64_t>(burn_in_weeks + horizon_weeks);
  for (std::int64_t week = 0; week < total_weeks; ++week) {
    const std::int64_t obs_week = week - static_cast<std::int64_t>(burn_in_weeks);
    const double n = env.population_at(obs_week);
    double flow = 0.0;
    for (std::size_t step = 0; step < kStepsPerWeek; ++step) {
      const double f = env.true_positive_at(state.t);
      flow += rates.reporting / f * static_cast<double>(state.I) * dt;
      step_euler_multinomial(state, rates, n, dt, rng);
      if (state.I == 0 && rates.visitors == 0.0) {
        out.extinct = true;
      }
    }
    if (obs_week >= 0) {
      out.counts.push_back(static_cast<double>(detail::poisson(flow, rng)));
      out.population.push_back(n);
    }
  }
  out.season_starts = season_starts_for(horizon_weeks, env.start_day, env.season_start_day);
  return out;
}

inline IncidenceSeries simulate_sirs(const SirsParams& params, const SirsEnvironment& env, std::size_t horizon_weeks,
                                     std::size_t burn_in_weeks, Rng& rng) {
  return simulate_sirs(derive_rates(params, env.mu, env.travelers_per_year), env, horizon_weeks, burn_in_weeks, rng);
}

}  // namespace abcmu::sirs
