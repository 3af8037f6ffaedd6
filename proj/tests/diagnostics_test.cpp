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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "abcmu/diagnostics/ash.hpp"
#include "abcmu/diagnostics/error_analysis.hpp"
#include "abcmu/diagnostics/ess.hpp"
#include "abcmu/diagnostics/performance.hpp"
#include "abcmu/samplers/rejection.hpp"
#include "test_support.hpp"

namespace abcmu::diagnostics {
namespace {

std::vector<double> ar1(double rho, std::size_t n, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, {0});
  std::normal_distribution<double> z;
  std::vector<double> x(n);
  x[0] = z(rng) / std::sqrt(1 - rho * rho);
  for (std::size_t i = 1; i < n; ++i) x[i] = rho * x[i - 1] + z(rng);
  return x;
}

// ---------------------------------------------------------------- ESS

TEST(EssSokal, IidSeriesIsNearlyIndependent) {
  const auto r = ess_sokal(ar1(0.0, 100000, 1));
  EXPECT_GE(r.ess / 100000, 0.9);
  EXPECT_LE(r.ess / 100000, 1.1);
  EXPECT_EQ(r.method, EssMethod::sokal_autocorrelation);
  EXPECT_TRUE(r.integrated_autocorrelation_time.has_value());
}

TEST(EssSokal, Ar1MatchesAnalyticAutocorrelationTime) {
  const double rho = 0.9;
  const double expected = (1 - rho) / (1 + rho);
  const auto r = ess_sokal(ar1(rho, 100000, 2));
  EXPECT_NEAR(r.ess / 100000, expected, 0.2 * expected);
  EXPECT_NEAR(*r.integrated_autocorrelation_time, 19.0, 0.2 * 19.0);
  EXPECT_GE(*r.window, 6.0 * *r.integrated_autocorrelation_time);
}

TEST(EssSokal, RejectsConstantAndShortSeries) {
  EXPECT_THROW(ess_sokal(std::vector<double>(50, 1.5)), DegenerateData);
  EXPECT_THROW(ess_sokal(std::vector<double>(9, 1.0)), std::invalid_argument);
}

TEST(EssSokal, ShufflingNeverHurts) {
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto x = ar1(0.7, 2000, 100 + seed);
    const double original = ess_sokal(x).ess;
    Rng rng = Rng::stream(seed, {9});
    std::shuffle(x.begin(), x.end(), rng);
    const auto shuffled = ess_sokal(x);
    EXPECT_LE(shuffled.ess, 2000 + 1e-9);
    wins += shuffled.ess >= original ? 1 : 0;
  }
  EXPECT_GE(wins, 95);
}

TEST(EssWeights, Examples) {
  EXPECT_NEAR(ess_weights(std::vector<double>(1000, 1e-3)).ess, 1000.0, 1e-9);
  std::vector<double> one_hot(10, 0.0);
  one_hot[3] = 1.0;
  EXPECT_DOUBLE_EQ(ess_weights(one_hot).ess, 1.0);
  EXPECT_NEAR(ess_weights(std::vector<double>{0.5, 0.25, 0.25}).ess, 8.0 / 3.0, 1e-12);
  EXPECT_LT(ess_weights(std::vector<double>{0.4, 0.3, 0.3}).ess, 3.0);
  EXPECT_THROW(ess_weights(std::vector<double>{0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(ess_weights(std::vector<double>{}), std::invalid_argument);
}

TEST(McmcEss, SumsChainsAndTakesSmallestComponent) {
  const auto a = ar1(0.0, 5000, 3);
  const auto b = ar1(0.9, 5000, 4);
  const auto c = ar1(0.0, 5000, 5);
  const auto d = ar1(0.9, 5000, 6);
  const auto r = mcmc_ess({{a, b}, {c, d}});
  const double slow = ess_sokal(b).ess + ess_sokal(d).ess;
  EXPECT_DOUBLE_EQ(r.ess, std::min(slow, ess_sokal(a).ess + ess_sokal(c).ess));
  EXPECT_EQ(r.n_samples, 10000u);
}

// -------------------------------------------------------- performance

TEST(Performance, TableColumns) {
  const EssReport thousand{EssMethod::inverse_sum_squared_weights, 1000.0, 1000, std::nullopt, std::nullopt};
  const auto r = performance_report(5000, 1'000'000, thousand);
  EXPECT_EQ(r.sims_per_ess, 1000.0);
  EXPECT_EQ(r.burn_in, 5000u);
  const EssReport sixty{EssMethod::sokal_autocorrelation, 60.0, 1000, std::nullopt, std::nullopt};
  EXPECT_DOUBLE_EQ(performance_report(0, 100, sixty).ess_per_1000, 60.0);
  const EssReport empty{EssMethod::sokal_autocorrelation, 1.0, 0, std::nullopt, std::nullopt};
  EXPECT_THROW(performance_report(0, 100, empty), std::invalid_argument);
  EXPECT_THROW(performance_report(200, 100, sixty), std::invalid_argument);
}

// ---------------------------------------------------------------- ASH

std::vector<ErrorVector> uniform_pairs(std::size_t n, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, {0});
  std::vector<ErrorVector> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    out.emplace_back(std::vector<double>{x, y});
  }
  return out;
}

TEST(Ash, SingleShiftIsPlainHistogram) {
  Rng rng = Rng::stream(7, {0});
  std::normal_distribution<double> z;
  std::vector<ErrorVector> samples;
  std::vector<double> weights;
  for (int i = 0; i < 3000; ++i) {
    samples.emplace_back(std::vector<double>{z(rng), 0.5 * z(rng) + 1.0, z(rng)});
    weights.push_back(rng.uniform());
  }
  double total = 0.0;
  for (double w : weights) total += w;
  const auto grid = error_density_ash2d(samples, weights, 0, 2, 12, 1);
  ASSERT_EQ(grid.nx(), 14u);
  ASSERT_EQ(grid.ny(), 14u);
  auto range = [&](std::size_t k) {
    double lo = samples[0][k], hi = lo;
    for (const auto& e : samples) {
      lo = std::min(lo, e[k]);
      hi = std::max(hi, e[k]);
    }
    return std::pair{lo, hi};
  };
  const auto [x_lo, x_hi] = range(0);
  const auto [y_lo, y_hi] = range(2);
  auto cell = [](double v, double lo, double hi) {
    const auto b = static_cast<std::size_t>(std::min(11.0, std::floor((v - lo) / ((hi - lo) / 12))));
    return b + 1;  // one padding bin
  };
  std::vector<double> hist(grid.nx() * grid.ny(), 0.0);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    hist[cell(samples[s][0], x_lo, x_hi) * grid.ny() + cell(samples[s][2], y_lo, y_hi)] += weights[s];
  }
  EXPECT_NEAR(grid.x_edges[1], x_lo, 1e-12);
  EXPECT_NEAR(grid.x_edges[13], x_hi, 1e-12);
  for (std::size_t c = 0; c < hist.size(); ++c) {
    EXPECT_NEAR(grid.density[c], hist[c] / total / grid.cell_area(), 1e-9) << c;
  }
  // Padding: the outer ring is empty.
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    EXPECT_EQ(grid.at(i, 0), 0.0);
    EXPECT_EQ(grid.at(0, i), 0.0);
    EXPECT_EQ(grid.at(i, 13), 0.0);
    EXPECT_EQ(grid.at(13, i), 0.0);
  }
}

TEST(Ash, AllMassInOneCell) {
  std::vector<ErrorVector> samples{ErrorVector({0.0, 0.0}), ErrorVector({1.0, 1.0})};
  const std::vector<double> weights{1.0, 0.0};
  const auto grid = error_density_ash2d(samples, weights, 0, 1, 10, 1);
  const auto [i, j] = grid.argmax();
  EXPECT_EQ(i, 1u);
  EXPECT_EQ(j, 1u);
  EXPECT_NEAR(grid.at(i, j) * grid.cell_area(), 1.0, 1e-12);
  EXPECT_NEAR(grid.integral(), 1.0, 1e-12);
}

TEST(Ash, UniformSamplesAreFlatInside) {
  const auto samples = uniform_pairs(100000, 8);
  const auto grid = error_density_ash2d(samples, 0, 1, 10, 4);
  EXPECT_NEAR(grid.integral(), 1.0, 1e-6);
  const double h = 0.1;
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      // Cells whose smoothing window stays inside the unit square.
      if (grid.x_edges[i] < h || grid.x_edges[i + 1] > 1 - h || grid.y_edges[j] < h || grid.y_edges[j + 1] > 1 - h) {
        continue;
      }
      worst = std::max(worst, std::abs(grid.at(i, j) - 1.0));
      ++checked;
    }
  }
  EXPECT_GT(checked, 500u);
  EXPECT_LT(worst, 0.15);
}

TEST(Ash, NormalisedForEveryShiftCount) {
  const auto samples = uniform_pairs(500, 9);
  for (std::size_t m : {1u, 2u, 3u, 4u, 7u}) {
    EXPECT_NEAR(error_density_ash2d(samples, 0, 1, 8, m).integral(), 1.0, 1e-6);
  }
}

TEST(Ash, RejectsBadInput) {
  const auto samples = uniform_pairs(10, 1);
  EXPECT_THROW(error_density_ash2d(std::span(samples).first(1), 0, 1), std::invalid_argument);
  EXPECT_THROW(error_density_ash2d(samples, 0, 1, 3), std::invalid_argument);
  EXPECT_THROW(error_density_ash2d(samples, 0, 2), std::invalid_argument);
  std::vector<ErrorVector> flat{ErrorVector({0.0, 1.0}), ErrorVector({0.5, 1.0})};
  EXPECT_THROW(error_density_ash2d(flat, 0, 1), DegenerateData);
}

TEST(Ash, TextRoundTrip) {
  const auto grid = error_density_ash2d(uniform_pairs(200, 2), 0, 1, 6, 2);
  std::stringstream ss;
  write_ash_grid(ss, grid);
  const auto back = read_ash_grid(ss);
  EXPECT_EQ(back.x_edges, grid.x_edges);
  EXPECT_EQ(back.y_edges, grid.y_edges);
  EXPECT_EQ(back.density, grid.density);
  std::stringstream bad("0 1 2\n");
  EXPECT_THROW(read_ash_grid(bad), std::runtime_error);
}

// ------------------------------------------------------ expected error

TEST(ExpectedError, Examples) {
  std::vector<ErrorVector> sym{ErrorVector({0.3, -2.0}), ErrorVector({-0.3, 2.0})};
  EXPECT_EQ(expected_error(sym), (std::vector<double>{0.0, 0.0}));
  std::vector<ErrorVector> one{ErrorVector({0.25, -1.5})};
  EXPECT_EQ(expected_error(one), (std::vector<double>{0.25, -1.5}));
  EXPECT_THROW(expected_error(sym, std::vector<double>{0.5, 0.6}), std::invalid_argument);
}

TEST(ExpectedError, LinearInWeightsAndShiftEquivariant) {
  const auto samples = uniform_pairs(50, 3);
  std::vector<double> w1(50), w2(50), mix(50);
  double s1 = 0, s2 = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    w1[i] = 1.0 + i;
    w2[i] = 1.0 + (i % 7);
    s1 += w1[i];
    s2 += w2[i];
  }
  for (std::size_t i = 0; i < 50; ++i) {
    w1[i] /= s1;
    w2[i] /= s2;
    mix[i] = 0.3 * w1[i] + 0.7 * w2[i];
  }
  const auto e1 = expected_error(samples, w1);
  const auto e2 = expected_error(samples, w2);
  const auto em = expected_error(samples, mix);
  std::vector<ErrorVector> shifted;
  for (const auto& s : samples) shifted.emplace_back(std::vector<double>{s[0] + 2.0, s[1] - 1.0});
  const auto es = expected_error(shifted, w1);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_NEAR(em[k], 0.3 * e1[k] + 0.7 * e2[k], 1e-12);
  }
  EXPECT_NEAR(es[0], e1[0] + 2.0, 1e-12);
  EXPECT_NEAR(es[1], e1[1] - 1.0, 1e-12);
}

TEST(ExpectedError, WellSpecifiedToyIsUnbiased) {
  const double taus[] = {0.05};
  const auto r = rej_abcmu(testing::toy_problem(), testing::toy_prior(-0.7, 1.3), taus, {2000, 10'000'000}, {14});
  std::vector<ErrorVector> errors;
  std::vector<double> e1;
  for (const auto& a : r.accepted) {
    errors.push_back(a.errors);
    e1.push_back(a.errors[0]);
  }
  const auto m = testing::moments(e1);
  EXPECT_LT(std::abs(expected_error(errors)[0]), 3.0 * m.se());
}

// ----------------------------------------------------- factorization

TEST(Factorization, PerfectDependenceIsLarge) {
  std::vector<ErrorVector> samples;
  for (const auto& s : uniform_pairs(10000, 4)) samples.emplace_back(std::vector<double>{s[0], s[0]});
  EXPECT_GT(factorization_check(samples, 0, 1, 10), 0.5);
}

TEST(Factorization, IndependentIsSmall) {
  const auto samples = uniform_pairs(10000, 5);
  EXPECT_LT(factorization_check(samples, 0, 1, 10), 0.05);
}

TEST(Factorization, SingleCellIsZero) {
  std::vector<ErrorVector> samples(1000, ErrorVector({0.2, -0.4}));
  EXPECT_NEAR(factorization_check(samples, 0, 1, 10), 0.0, 1e-12);
}

TEST(Factorization, SymmetricAndScaleInvariant) {
  std::vector<ErrorVector> samples;
  std::vector<ErrorVector> scaled;
  for (const auto& s : uniform_pairs(5000, 6)) {
    samples.emplace_back(std::vector<double>{s[0], s[0] * s[1]});
    scaled.emplace_back(std::vector<double>{4.0 * s[0], 4.0 * s[0] * s[1]});
  }
  const double tv = factorization_check(samples, 0, 1, 10);
  EXPECT_DOUBLE_EQ(tv, factorization_check(samples, 1, 0, 10));
  EXPECT_DOUBLE_EQ(tv, factorization_check(scaled, 0, 1, 10));
  EXPECT_GT(tv, 0.05);
}

TEST(Factorization, RejectsSmallSamples) {
  EXPECT_THROW(factorization_check(uniform_pairs(999, 1), 0, 1), std::invalid_argument);
  EXPECT_THROW(factorization_check(uniform_pairs(1000, 1), 0, 2), std::invalid_argument);
}

TEST(Factorization, ToyMeanAndSdErrorsFactorize) {
  const double taus[] = {1.0, 1.0};
  const auto r = rej_abcmu(testing::toy_problem(toy::ToySummaries::mean_and_sd), testing::toy_prior(-0.2, 0.8), taus,
                           {10000, 10'000'000}, {15});
  std::vector<ErrorVector> errors;
  for (const auto& a : r.accepted) errors.push_back(a.errors);
  EXPECT_LT(factorization_check(errors, 0, 1, 10), 0.05);
}

}  // namespace
}  // namespace abcmu::diagnostics
