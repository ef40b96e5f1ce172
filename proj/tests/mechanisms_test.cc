// Copyright 2026 The CDP Accountant Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "cdp/mechanisms.h"

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "gtest/gtest.h"
#include "cdp/distribution.h"
#include "cdp/serialization.h"
#include "cdp/subgaussian.h"

namespace cdp {
namespace {

TEST(GaussianCdpTest, Examples) {
  const CdpBound unit = GaussianCdp({1.0, 1.0});
  EXPECT_EQ(unit.mu, 0.5);
  EXPECT_EQ(unit.tau, 1.0);
  const CdpBound constant = GaussianCdp({0.0, 3.0});
  EXPECT_EQ(constant.mu, 0.0);
  EXPECT_EQ(constant.tau, 0.0);
  const CdpBound half = GaussianCdp({1.0, 2.0});
  EXPECT_DOUBLE_EQ(half.mu, 0.125);
  EXPECT_DOUBLE_EQ(half.tau, 0.5);
  EXPECT_THROW(GaussianCdp({1.0, 0.0}), std::domain_error);
  EXPECT_THROW(GaussianCdp({1.0, -1.0}), std::domain_error);
}

TEST(GaussianCdpTest, MuIsExactlyHalfTauSquared) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(0.01, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const CdpBound bound = GaussianCdp({dist(rng), dist(rng)});
    EXPECT_EQ(bound.mu, bound.tau * bound.tau / 2.0);
  }
}

TEST(GaussianLossParamsTest, MatchesTheCdpBound) {
  const GaussianLossLaw law = GaussianLossParams({1.0, 1.0});
  EXPECT_EQ(law.mean, 0.5);
  EXPECT_EQ(law.std, 1.0);
  const GaussianLossLaw scaled = GaussianLossParams({2.0, 4.0});
  EXPECT_DOUBLE_EQ(scaled.mean, 0.125);
  EXPECT_DOUBLE_EQ(scaled.std, 0.5);
  const GaussianLossLaw zero = GaussianLossParams({0.0, 1.0});
  EXPECT_EQ(zero.mean, 0.0);
  EXPECT_EQ(zero.std, 0.0);
}

TEST(SampleGaussianLossTest, SeededStatistics) {
  const GaussianMechanismSpec spec{1.0, 1.0};
  const std::int64_t n = 1'000'000;
  const std::vector<double> losses = SampleGaussianLoss(spec, n, 20260810);
  double mean = 0;
  for (double x : losses) mean += x;
  mean /= double(n);
  EXPECT_NEAR(mean, 0.5, 0.005);
  double var = 0;
  for (double x : losses) var += (x - mean) * (x - mean);
  EXPECT_NEAR(std::sqrt(var / double(n - 1)), 1.0, 0.01);
  // Empirical tail under the subgaussian bound at two standards.
  std::int64_t exceed = 0;
  for (double x : losses) exceed += x >= 0.5 + 2.0;
  EXPECT_LE(double(exceed) / double(n), std::exp(-2.0));
}

TEST(SampleGaussianLossTest, ZeroSensitivityGivesZeroLoss) {
  for (double x : SampleGaussianLoss({0.0, 2.0}, 100, 1)) EXPECT_EQ(x, 0.0);
}

TEST(SampleGaussianLossTest, DeterministicGivenSeed) {
  const GaussianMechanismSpec spec{1.0, 2.0};
  const auto a = SampleGaussianLoss(spec, 16, 99);
  const auto b = SampleGaussianLoss(spec, 16, 99);
  const auto c = SampleGaussianLoss(spec, 16, 100);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_THROW(SampleGaussianLoss(spec, 0, 1), std::invalid_argument);
}

TEST(CalibrateGaussianForCdpTest, Examples) {
  EXPECT_DOUBLE_EQ(CalibrateGaussianForCdp(1.0, {0.5, 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(CalibrateGaussianForCdp(1.0, {0.005, 0.1}), 10.0);
  EXPECT_DOUBLE_EQ(CalibrateGaussianForCdp(0.0, {0.0, 0.0}), 1.0);
  EXPECT_THROW(CalibrateGaussianForCdp(1.0, {0.0, 0.0}), std::domain_error);
}

TEST(CalibrateGaussianForCdpTest, SingleComponentTargets) {
  // A zero component is unconstrained.
  EXPECT_DOUBLE_EQ(CalibrateGaussianForCdp(1.0, {0.0, 0.5}), 2.0);
  EXPECT_DOUBLE_EQ(CalibrateGaussianForCdp(1.0, {0.125, 0.0}), 2.0);
}

TEST(CalibrateGaussianForCdpTest, RoundTripDominatesTarget) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> sens_dist(0.01, 5.0);
  std::uniform_real_distribution<double> mu_dist(1e-4, 2.0);
  std::uniform_real_distribution<double> tau_dist(1e-3, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double sens = sens_dist(rng);
    const CdpBound target{mu_dist(rng), tau_dist(rng)};
    const CdpBound achieved =
        GaussianCdp({sens, CalibrateGaussianForCdp(sens, target)});
    EXPECT_LE(achieved.mu, target.mu * (1 + 1e-12));
    EXPECT_LE(achieved.tau, target.tau * (1 + 1e-12));
  }
}

TEST(CalibrateGaussianForDpTest, Examples) {
  EXPECT_NEAR(CalibrateGaussianForDp(1.0, {1.0, std::exp(-1.0)}),
              std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(CalibrateGaussianForDp(1.0, {1.0, 1e-6}), 5.256521769756932,
              1e-12);
  EXPECT_DOUBLE_EQ(CalibrateGaussianForDp(0.0, {1.0, 0.5}), 1.0);
  EXPECT_THROW(CalibrateGaussianForDp(1.0, {0.0, 0.5}), std::domain_error);
  EXPECT_THROW(CalibrateGaussianForDp(1.0, {1.0, 0.0}), std::domain_error);
  EXPECT_THROW(CalibrateGaussianForDp(1.0, {1.0, 1.0}), std::domain_error);
}

TEST(GaussianGroupCdpTest, Examples) {
  const GaussianMechanismSpec spec{1.0, 1.0};
  const CdpBound single = GaussianGroupCdp(spec, 1);
  EXPECT_EQ(single.mu, GaussianCdp(spec).mu);
  EXPECT_EQ(single.tau, GaussianCdp(spec).tau);

  const CdpBound wide = GaussianGroupCdp({1.0, 100.0}, 4);
  EXPECT_NEAR(wide.mu, 0.0008, 1e-18);
  EXPECT_NEAR(wide.tau, 0.04, 1e-15);

  const CdpBound pair = GaussianGroupCdp({1.0, 1.0}, 2);
  EXPECT_DOUBLE_EQ(pair.mu, 2.0);
  EXPECT_DOUBLE_EQ(pair.tau, 2.0);

  EXPECT_THROW(GaussianGroupCdp(spec, 0), std::domain_error);
}

TEST(GaussianGroupCdpTest, EqualsGroupSensitivityScaling) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> sens_dist(0.0, 3.0);
  std::uniform_real_distribution<double> sigma_dist(0.5, 50.0);
  std::uniform_int_distribution<int> s_dist(1, 16);
  for (int i = 0; i < 1000; ++i) {
    const GaussianMechanismSpec spec{sens_dist(rng), sigma_dist(rng)};
    const int s = s_dist(rng);
    const CdpBound group = GaussianGroupCdp(spec, s);
    const CdpBound scaled = GaussianCdp({double(s) * spec.sensitivity,
                                         spec.sigma});
    EXPECT_EQ(group.mu, scaled.mu);
    EXPECT_EQ(group.tau, scaled.tau);
  }
}

TEST(RandomizedResponsePairTest, Examples) {
  const auto [p, q] = RandomizedResponsePair(1.0);
  EXPECT_NEAR(p.ProbOf("true"), 0.7310585786300049, 1e-15);
  EXPECT_NEAR(p.ProbOf("false"), 0.2689414213699951, 1e-15);
  EXPECT_NEAR(q.ProbOf("true"), 0.2689414213699951, 1e-15);
  EXPECT_THROW(RandomizedResponsePair(0.0), std::invalid_argument);
  EXPECT_THROW(RandomizedResponsePair(-0.2), std::invalid_argument);
}

TEST(RandomizedResponsePairTest, MaxDivergenceIsEpsilonBothWays) {
  for (double eps : {0.05, 0.3, 1.0, 2.5}) {
    const auto [p, q] = RandomizedResponsePair(eps);
    EXPECT_NEAR(MaxDivergence(p, q), eps, 1e-12);
    EXPECT_NEAR(MaxDivergence(q, p), eps, 1e-12);
  }
}

TEST(LaplaceEpsilonTest, Examples) {
  EXPECT_DOUBLE_EQ(LaplaceEpsilon(1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(LaplaceEpsilon(0.0, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(LaplaceEpsilon(1.0, 10.0), 0.1);
  EXPECT_THROW(LaplaceEpsilon(1.0, 0.0), std::domain_error);
}

TEST(MechanismSpecJsonTest, RoundTripAndKindCheck) {
  const GaussianMechanismSpec spec{1.5, 2.25};
  const GaussianMechanismSpec back =
      MechanismSpecFromJson(MechanismSpecToJson(spec));
  EXPECT_EQ(back.sensitivity, spec.sensitivity);
  EXPECT_EQ(back.sigma, spec.sigma);
  EXPECT_THROW(MechanismSpecFromJson(nlohmann::json{
                   {"kind", "laplace"}, {"sensitivity", 1.0}, {"sigma", 1.0}}),
               std::invalid_argument);
}

}  // namespace
}  // namespace cdp
