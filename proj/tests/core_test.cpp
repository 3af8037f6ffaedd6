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
#include <vector>

#include "abcmu/distance.hpp"
#include "abcmu/errors.hpp"
#include "abcmu/kernel.hpp"
#include "abcmu/model.hpp"
#include "abcmu/parallel.hpp"
#include "abcmu/prior.hpp"
#include "abcmu/proposal.hpp"
#include "abcmu/rng.hpp"
#include "abcmu/types.hpp"

namespace {

using namespace abcmu;

// Brute-force two-sample CvM: evaluate both ECDFs at every pooled point.
double cvm_oracle(std::vector<double> a, std::vector<double> b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  auto ecdf = [](const std::vector<double>& xs, double z) {
    return static_cast<double>(std::count_if(xs.begin(), xs.end(), [&](double x) { return x <= z; })) /
           static_cast<double>(xs.size());
  };
  double sum = 0.0;
  for (double z : pooled) {
    const double d = ecdf(a, z) - ecdf(b, z);
    sum += d * d;
  }
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  return n * m / ((n + m) * (n + m)) * sum;
}

std::vector<double> normal_sample(std::size_t n, double mean, Rng& rng) {
  std::normal_distribution<double> dist(mean, 1.0);
  std::vector<double> xs(n);
  for (auto& x : xs) {
    x = dist(rng);
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Rng a = Rng::stream(42, {1, 7});
  Rng b = Rng::stream(42, {1, 7});
  Rng c = Rng::stream(42, {1, 8});
  Rng d = Rng::stream(43, {1, 7});
  const auto first = a();
  EXPECT_EQ(first, b());
  EXPECT_NE(first, c());
  EXPECT_NE(first, d());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, MatchesReferenceXoshiro) {
  // Reference xoshiro256** seeded by splitmix64(0), written out independently.
  std::uint64_t sm = 0;
  auto next_sm = [&] {
    std::uint64_t z = (sm += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t s[4] = {next_sm(), next_sm(), next_sm(), next_sm()};
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  Rng rng(0);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t expected = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    ASSERT_EQ(rng(), expected) << "draw " << i;
  }
}

TEST(Kernel, Eval) {
  EXPECT_DOUBLE_EQ(kernel_eval(0.0, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(kernel_eval(1.01, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(kernel_eval(-0.5, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(kernel_eval(1.0, 2.0), 0.5);
  EXPECT_THROW(kernel_eval(0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(kernel_eval(0.0, -1.0), std::invalid_argument);
  EXPECT_THROW(kernel_eval(std::nan(""), 1.0), std::invalid_argument);
}

TEST(Kernel, IntegratesToOne) {
  const double tau = 1.7;
  const double h = tau / 1e4;
  double sum = 0.0;
  for (double e = -tau; e <= tau; e += h) {
    sum += kernel_eval(e, tau) * h;
  }
  EXPECT_NEAR(sum, 1.0, 1e-3);
}

TEST(Kernel, Product) {
  const std::vector<double> taus{2.0, 4.0};
  EXPECT_DOUBLE_EQ(kernel_product(ErrorVector{0.0, 0.0}, taus), 0.125);
  EXPECT_DOUBLE_EQ(kernel_product(ErrorVector{0.0, 3.0}, taus), 0.0);
  EXPECT_DOUBLE_EQ(kernel_product(ErrorVector{1.0, -2.0}, taus), 0.125);
  EXPECT_THROW(kernel_product(ErrorVector{1.0}, taus), std::invalid_argument);
}

TEST(Kernel, ProductMatchesLinfRegionForEqualTolerances) {
  Rng rng(5);
  const double tau = 1.3;
  const std::vector<double> taus(3, tau);
  for (int i = 0; i < 10000; ++i) {
    ErrorVector e{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
    EXPECT_EQ(kernel_product(e, taus) > 0.0, distance_linf_combine(e) <= tau / 2.0);
  }
}

TEST(Distance, Signed) {
  EXPECT_DOUBLE_EQ(distance_signed(5, 5, SignedMode::log_ratio), 0.0);
  EXPECT_NEAR(distance_signed(10, 5, SignedMode::log_ratio), 0.6931471805599453, 1e-15);
  EXPECT_DOUBLE_EQ(distance_signed(3, 7, SignedMode::difference), -4.0);
  EXPECT_THROW(distance_signed(0, 5, SignedMode::log_ratio), DistanceDomainError);
  EXPECT_THROW(distance_signed(-1, 5, SignedMode::log_ratio), DistanceDomainError);
  EXPECT_THROW(log_ratio_same_sign(0.5, -0.5), DistanceDomainError);
  EXPECT_NEAR(log_ratio_same_sign(-0.2, -0.1), std::log(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(relative_difference(3.0, 2.0), 0.5);
}

TEST(Distance, CvmHandValues) {
  EXPECT_DOUBLE_EQ(distance_cvm(std::vector<double>{0.0}, std::vector<double>{1.0}),
                   cvm_oracle({0.0}, {1.0}));
  EXPECT_DOUBLE_EQ(distance_cvm(std::vector<double>{0.0}, std::vector<double>{1.0}), 0.25);
  const std::vector<double> same{1.0, 2.0, 2.0, 5.0};
  EXPECT_DOUBLE_EQ(distance_cvm(same, same), 0.0);
  EXPECT_THROW(distance_cvm(std::vector<double>{}, same), std::invalid_argument);
  EXPECT_THROW(distance_cvm(std::vector<double>{2.0, 1.0}, same), std::invalid_argument);
}

TEST(Distance, CvmMatchesBruteForceWithTies) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(1 + trial % 13);
    std::vector<double> b(1 + trial % 7);
    for (auto& x : a) {
      x = std::floor(rng.uniform() * 6.0);
    }
    for (auto& x : b) {
      x = std::floor(rng.uniform() * 6.0);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    // The brute force counts tied pooled points once per copy, as does the merge.
    ASSERT_NEAR(distance_cvm(a, b), cvm_oracle(a, b), 1e-12) << "trial " << trial;
    ASSERT_NEAR(distance_cvm(a, b), distance_cvm(b, a), 1e-12);
  }
}

TEST(Distance, CvmSeparatesShiftedNormals) {
  int wins = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng = Rng::stream(99, {t});
    const auto a = normal_sample(1000, 0.0, rng);
    const auto a2 = normal_sample(1000, 0.0, rng);
    const auto b = normal_sample(1000, 3.0, rng);
    wins += distance_cvm(a, b) > distance_cvm(a, a2) ? 1 : 0;
  }
  EXPECT_GE(wins, 99);
}

TEST(Distance, Linf) {
  EXPECT_DOUBLE_EQ(distance_linf_combine(ErrorVector{1.0, -3.0, 2.0}), 3.0);
  EXPECT_DOUBLE_EQ(distance_linf_combine(ErrorVector{0.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(distance_linf_combine(ErrorVector{-2.5}), 2.5);
}

TEST(Types, Invariants) {
  EXPECT_THROW(ParameterVector({}, make_names({})), std::invalid_argument);
  EXPECT_THROW(ParameterVector({1.0, 2.0}, make_names({"a"})), std::invalid_argument);
  EXPECT_THROW(ParameterVector({INFINITY}, make_names({"a"})), std::invalid_argument);
  EXPECT_THROW(ErrorVector({std::nan("")}), std::invalid_argument);
  EXPECT_THROW(EmpiricalDistribution({}), std::invalid_argument);
  const EmpiricalDistribution d({3.0, 1.0, 2.0});
  EXPECT_TRUE(std::is_sorted(d.samples().begin(), d.samples().end()));
  EXPECT_DOUBLE_EQ(d.cdf(2.0), 2.0 / 3.0);
  EXPECT_THROW(ToleranceSchedule({{1.0, 1.0}, {0.5, 2.0}}), std::invalid_argument);
  EXPECT_THROW(ToleranceSchedule({{1.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(ToleranceSchedule({{1.0, 1.0}, {0.5}}), std::invalid_argument);
  const ToleranceSchedule s({{2.0, 1.0}, {1.0, 1.0}});
  EXPECT_EQ(s.stages(), 2u);
  EXPECT_EQ(s.final_row()[0], 1.0);
}

TEST(Prior, DensityAndSampling) {
  const BoxPrior unit({"a", "b"}, {{0.0, 1.0}, {0.0, 1.0}});
  EXPECT_DOUBLE_EQ(unit.density(std::vector<double>{0.5, 0.5}), 1.0);
  EXPECT_DOUBLE_EQ(unit.density(std::vector<double>{1.5, 0.5}), 0.0);
  const BoxPrior box({"x", "y"}, {{-1.0, 3.0}, {2.0, 2.5}});
  EXPECT_DOUBLE_EQ(box.density(std::vector<double>{0.0, 2.2}) * 4.0 * 0.5, 1.0);
  EXPECT_THROW(BoxPrior({"a"}, {{1.0, 1.0}}), std::invalid_argument);
  Rng rng(3);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const auto theta = unit.sample(rng);
    ASSERT_TRUE(unit.contains(theta.values()));
    sum += theta[0];
  }
  EXPECT_NEAR(sum / 1e5, 0.5, 0.01);
}

TEST(Proposal, SymmetricAndCalibrated) {
  EXPECT_THROW(GaussianRandomWalkProposal({1.0}, 0.0), std::invalid_argument);
  EXPECT_THROW(GaussianRandomWalkProposal({0.0}), std::invalid_argument);
  const GaussianRandomWalkProposal q({0.5, 2.0}, 1.5);
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<double> a{rng.uniform() * 4 - 2, rng.uniform() * 4 - 2};
    const std::vector<double> b{rng.uniform() * 4 - 2, rng.uniform() * 4 - 2};
    ASSERT_EQ(q.density(a, b), q.density(b, a));
  }
  const GaussianRandomWalkProposal unit({1.0});
  const ParameterVector origin({0.0}, make_names({"t"}));
  double sum = 0.0;
  double sum_sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = unit.sample(origin, rng)[0];
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  EXPECT_NEAR(sum_sq / n - mean * mean, 1.0, 0.05);
  EXPECT_NEAR(unit.density(std::vector<double>{0.0}, std::vector<double>{0.0}), 1.0 / std::sqrt(2.0 * M_PI), 1e-15);
}

struct CountingModel {
  Names parameter_names() const { return {"p"}; }
  Names summary_names() const { return {"s"}; }
  SummaryVector simulate(const ParameterVector& theta, Rng& rng) const {
    if (theta[0] < 0.0) {
      throw DistanceDomainError("negative");
    }
    return {theta[0] + rng.uniform()};
  }
};

struct Diff {
  ErrorVector operator()(const SummaryVector& sim, const SummaryVector& obs) const {
    return ErrorVector{std::get<double>(sim[0]) - std::get<double>(obs[0])};
  }
};

TEST(Model, ProblemIsPureAndMapsRejections) {
  const AbcProblem problem(CountingModel{}, SummaryVector{0.5}, Diff{});
  const ParameterVector theta({1.0}, make_names({"p"}));
  Rng a(1);
  Rng b(1);
  EXPECT_EQ(problem.simulate_errors(theta, a), problem.simulate_errors(theta, b));
  Rng c(1);
  EXPECT_FALSE(problem.simulate_errors(ParameterVector({-1.0}, make_names({"p"})), c).has_value());
  const AnyErrorModel erased(problem);
  Rng d(1);
  Rng e(1);
  EXPECT_EQ(erased.simulate_errors(theta, d), problem.simulate_errors(theta, e));
  EXPECT_EQ(erased.error_names(), Names{"s"});
}

TEST(Parallel, CoversEveryIndexAndPropagatesErrors) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 37) {
                                throw std::runtime_error("boom");
                              }
                            }),
               std::runtime_error);
}

}  // namespace
