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

#include <chrono>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "abcmu/model.hpp"
#include "abcmu/models/sirs/dynamics.hpp"
#include "abcmu/models/sirs/summaries.hpp"

namespace abcmu::sirs {

/// Seasonal SIRS with Poisson reporting; theta = (R0, D, Gamma, s, rho).
class SirsModel {
 public:
  SirsModel(SirsEnvironment env, std::size_t horizon_weeks, std::size_t burn_in_weeks = 520)
      : env_(std::move(env)), horizon_weeks_(horizon_weeks), burn_in_weeks_(burn_in_weeks) {
    env_.validate();
    if (horizon_weeks_ < 2 * 52) {
      throw std::invalid_argument("SirsModel: horizon must cover at least two seasons");
    }
  }

  Names parameter_names() const { return {"R0", "D", "Gamma", "s", "rho"}; }
  Names summary_names() const { return sirs::summary_names(); }
  const SirsEnvironment& environment() const noexcept { return env_; }
  std::size_t horizon_weeks() const noexcept { return horizon_weeks_; }
  std::size_t burn_in_weeks() const noexcept { return burn_in_weeks_; }

  static SirsParams params_of(const ParameterVector& theta) {
    if (theta.size() != 5) {
      throw std::invalid_argument("SirsModel: expected 5 parameters");
    }
    return {theta[0], theta[1], theta[2], theta[3], theta[4]};
  }

  IncidenceSeries simulate_series(const ParameterVector& theta, Rng& rng) const {
    return simulate_sirs(params_of(theta), env_, horizon_weeks_, burn_in_weeks_, rng);
  }

  SummaryVector simulate(const ParameterVector& theta, Rng& rng) const {
    return summaries_sirs(simulate_series(theta, rng));
  }

 private:
  SirsEnvironment env_;
  std::size_t horizon_weeks_;
  std::size_t burn_in_weeks_;
};

using SirsProblem = AbcProblem<SirsModel, SirsDistance>;

/// Monday of ISO week `week` of ISO year `year`.
inline std::chrono::sys_days iso_week_monday(int year, unsigned week) {
  using namespace std::chrono;
  const sys_days jan4{std::chrono::year{year} / January / 4};
  const unsigned offset = weekday{jan4}.iso_encoding() - 1;
  return jan4 - days{offset} + weeks{week - 1};
}

/// "YYYY-Www" (an optional "-D" day suffix is ignored).
inline std::chrono::sys_days parse_iso_week(const std::string& token) {
  int year = 0;
  unsigned week = 0;
  char tail = 0;
  if (std::sscanf(token.c_str(), "%d-W%2u%c", &year, &week, &tail) < 2 || week < 1 || week > 53) {
    throw std::invalid_argument("bad ISO week '" + token + "', expected YYYY-Www");
  }
  return iso_week_monday(year, week);
}

/// Observed weekly counts with calendar information.
struct ObservedIncidence {
  IncidenceSeries series;
  double start_day = 0.0;  // day of the year of the first Monday
};

/// Two columns per line, ISO week and count. Weeks must be consecutive.
/// `population` holds one value per week or a single constant.
inline ObservedIncidence read_incidence(std::istream& in, const std::vector<double>& population,
                                        double season_start_day = 181.0) {
  using namespace std::chrono;
  ObservedIncidence out;
  std::vector<sys_days> mondays;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    std::istringstream ss(line);
    std::string week;
    double count = 0.0;
    if (!(ss >> week)) {
      continue;
    }
    if (!(ss >> count) || count < 0.0) {
      throw std::invalid_argument("incidence line " + std::to_string(line_no) + ": expected a nonnegative count");
    }
    try {
      mondays.push_back(parse_iso_week(week));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("incidence line " + std::to_string(line_no) + ": " + e.what());
    }
    if (mondays.size() > 1 && mondays.back() - mondays[mondays.size() - 2] != days{7}) {
      throw std::invalid_argument("incidence line " + std::to_string(line_no) + ": weeks are not consecutive");
    }
    out.series.counts.push_back(count);
  }
  if (mondays.empty()) {
    throw std::invalid_argument("incidence: no data");
  }
  const std::size_t n = mondays.size();
  if (population.size() != 1 && population.size() != n) {
    throw std::invalid_argument("incidence: population series must have one value or one per week");
  }
  for (std::size_t w = 0; w < n; ++w) {
    out.series.population.push_back(population.size() == 1 ? population.front() : population[w]);
    const year_month_day ymd{mondays[w]};
    const sys_days new_year{ymd.year() / January / 1};
    const double doy = static_cast<double>((mondays[w] - new_year).count());
    if (w == 0) {
      out.start_day = doy;
    }
    const double ahead = SirsEnvironment::day_of_year(season_start_day - doy);
    if (ahead < 7.0) {
      out.series.season_starts.push_back(w);
    }
  }
  return out;
}

/// Whitespace-separated numbers.
inline std::vector<double> read_values(std::istream& in) {
  std::vector<double> out;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) {
        throw std::invalid_argument(token);
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("expected a number, found '" + token + "'");
    }
  }
  return out;
}

}  // namespace abcmu::sirs
