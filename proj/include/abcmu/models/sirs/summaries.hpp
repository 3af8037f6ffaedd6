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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "abcmu/distance.hpp"
#include "abcmu/errors.hpp"
#include "abcmu/models/sirs/dynamics.hpp"
#include "abcmu/types.hpp"

namespace abcmu::sirs {

inline const Names& summary_names() {
  static const Names names{"CDF-dPK", "ACF-dPK", "M-EXPL", "CDF-PK", "M-ATTR"};
  return names;
}

struct Season {
  std::size_t first_week;
  std::size_t end_week;  // one past the last week
};

/// Complete seasons: the weeks between consecutive season starts.
inline std::vector<Season> complete_seasons(const IncidenceSeries& series) {
  std::vector<Season> out;
  for (std::size_t i = 0; i + 1 < series.season_starts.size(); ++i) {
    out.push_back({series.season_starts[i], series.season_starts[i + 1]});
  }
  return out;
}

/// Sample autocorrelation at `lag`: sum (x_t - m)(x_{t+lag} - m) / sum (x_t - m)^2.
inline double autocorrelation(std::span<const double> xs, std::size_t lag) {
  if (xs.size() < lag + 2) {
    throw UndefinedSummary("autocorrelation: series too short for lag " + std::to_string(lag));
  }
  double mean = 0.0;
  for (double x : xs) {
    mean += x;
  }
  mean /= static_cast<double>(xs.size());
  double denom = 0.0;
  for (double x : xs) {
    denom += (x - mean) * (x - mean);
  }
  if (!(denom > 0.0)) {
    throw UndefinedSummary("autocorrelation: constant series");
  }
  double num = 0.0;
  for (std::size_t t = 0; t + lag < xs.size(); ++t) {
    num += (xs[t] - mean) * (xs[t + lag] - mean);
  }
  return num / denom;
}

struct SeasonStatistics {
  std::vector<double> peaks;  // per 100,000
  std::vector<double> peak_differences;
  std::vector<double> weeks_above_half_peak;
  std::vector<double> attack_rates;
};

inline SeasonStatistics season_statistics(const IncidenceSeries& series) {
  if (series.population.size() != series.counts.size()) {
    throw std::invalid_argument("season_statistics: population and counts differ in length");
  }
  const auto seasons = complete_seasons(series);
  if (seasons.size() < 3) {
    throw std::invalid_argument("season_statistics: need at least 3 complete seasons, found " +
                                std::to_string(seasons.size()));
  }
  SeasonStatistics st;
  for (const auto& season : seasons) {
    const double mid_population = series.population[(season.first_week + season.end_week - 1) / 2];
    double peak = 0.0;
    double cases = 0.0;
    double population = 0.0;
    for (std::size_t w = season.first_week; w < season.end_week; ++w) {
      peak = std::max(peak, series.counts[w]);
      cases += series.counts[w];
      population += series.population[w];
    }
    std::size_t above = 0;
    for (std::size_t w = season.first_week; w < season.end_week; ++w) {
      above += series.counts[w] >= 0.5 * peak ? 1 : 0;
    }
    const double weeks = static_cast<double>(season.end_week - season.first_week);
    st.peaks.push_back(peak / mid_population * 1e5);
    st.weeks_above_half_peak.push_back(static_cast<double>(above));
    st.attack_rates.push_back(cases / (population / weeks));
  }
  for (std::size_t i = 0; i + 1 < st.peaks.size(); ++i) {
    st.peak_differences.push_back(st.peaks[i + 1] - st.peaks[i]);
  }
  return st;
}

inline double mean_of(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) {
    sum += x;
  }
  return sum / static_cast<double>(xs.size());
}

/// CDF-dPK, ACF-dPK (lag 2), M-EXPL, CDF-PK, M-ATTR. Peaks are weekly
/// counts per 100,000 of the mid-season population.
inline SummaryVector summaries_sirs(const IncidenceSeries& series) {
  const SeasonStatistics st = season_statistics(series);
  if (st.peak_differences.size() < 4) {
    throw UndefinedSummary("summaries_sirs: lag-2 autocorrelation needs at least 4 peak differences");
  }
  SummaryVector s;
  s.reserve(5);
  s.emplace_back(EmpiricalDistribution(st.peak_differences));
  s.emplace_back(autocorrelation(st.peak_differences, 2));
  s.emplace_back(mean_of(st.weeks_above_half_peak));
  s.emplace_back(EmpiricalDistribution(st.peaks));
  s.emplace_back(mean_of(st.attack_rates));
  return s;
}

struct SirsDistance {
  std::vector<double> peak_thresholds{200.0, 400.0};

  /// CvM for CDF-dPK, log ratios for ACF-dPK, M-EXPL and M-ATTR, and the
  /// mean log ratio of the peak ECDFs at the thresholds for CDF-PK.
  ErrorVector operator()(const SummaryVector& sim, const SummaryVector& obs) const {
    if (sim.size() != 5 || obs.size() != 5) {
      throw std::invalid_argument("distances_sirs: expected 5 summaries");
    }
    if (peak_thresholds.empty()) {
      throw std::invalid_argument("distances_sirs: no peak thresholds");
    }
    std::vector<double> e(5);
    e[0] = distance_cvm(std::get<EmpiricalDistribution>(sim[0]), std::get<EmpiricalDistribution>(obs[0]));
    e[1] = log_ratio_same_sign(std::get<double>(sim[1]), std::get<double>(obs[1]));
    e[2] = distance_signed(std::get<double>(sim[2]), std::get<double>(obs[2]), SignedMode::log_ratio);
    const auto& ps = std::get<EmpiricalDistribution>(sim[3]);
    const auto& po = std::get<EmpiricalDistribution>(obs[3]);
    double sum = 0.0;
    for (double c : peak_thresholds) {
      sum += distance_signed(ps.cdf(c), po.cdf(c), SignedMode::log_ratio);
    }
    e[3] = sum / static_cast<double>(peak_thresholds.size());
    e[4] = distance_signed(std::get<double>(sim[4]), std::get<double>(obs[4]), SignedMode::log_ratio);
    return ErrorVector(std::move(e));
  }
};

inline ErrorVector distances_sirs(const SummaryVector& sim, const SummaryVector& obs) {
  return SirsDistance{}(sim, obs);
}

}  // namespace abcmu::sirs
