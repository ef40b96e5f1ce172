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
//
// End-to-end acceptance checks. Each test prints one PASS/FAIL line; the
// statistical ones run a fixed seed and finish inside their stated budget.
#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "gtest/gtest.h"
#include "cdp/composition.h"
#include "cdp/distribution.h"
#include "cdp/group_privacy.h"
#include "cdp/ledger.h"
#include "cdp/mechanisms.h"
#include "cdp/reduction.h"
#include "cdp/subgaussian.h"
#include "cdp/verify.h"
#include "test_util.h"

namespace cdp {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class AcceptanceTest : public ::testing::Test {
 protected:
  void Criterion(int number, const std::string& label) {
    number_ = number;
    label_ = label;
  }

  void TearDown() override {
    std::cout << "[ACCEPTANCE] criterion " << number_ << " (" << label_
              << "): " << (HasFailure() ? "FAIL" : "PASS") << std::endl;
  }

 private:
  int number_ = 0;
  std::string label_;
};

// The shared corpus for criteria 2 and 3: 10^4 Dirichlet pairs with support
// 2..8, rejection-sampled to symmetric max divergence at most 2.
const std::vector<std::pair<DiscreteDistribution, DiscreteDistribution>>&
SharedPairCorpus() {
  static const auto* corpus = [] {
    auto* pairs = new std::vector<
        std::pair<DiscreteDistribution, DiscreteDistribution>>();
    pairs->reserve(10000);
    std::mt19937_64 rng(20260810);
    for (int i = 0; i < 10000; ++i) {
      pairs->push_back(RandomEqualSupportPair(rng, 2, 8, 2.0));
    }
    return pairs;
  }();
  return *corpus;
}

TEST_F(AcceptanceTest, C1GaussianCharacterization) {
  Criterion(1, "gaussian characterization");
  const auto start = Clock::now();

  const CdpBound bound = GaussianCdp({1.0, 1.0});
  EXPECT_EQ(bound.mu, 0.5);
  EXPECT_EQ(bound.tau, 1.0);

  const std::int64_t n = 1'000'000;
  const std::vector<double> losses = SampleGaussianLoss({1.0, 1.0}, n, 42);
  double mean = 0;
  for (double x : losses) mean += x;
  mean /= double(n);
  EXPECT_NEAR(mean, 0.5, 0.005);

  double var = 0;
  for (double x : losses) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / double(n - 1));
  EXPECT_NEAR(sd, 1.0, 0.01);

  std::int64_t exceed = 0;
  for (double x : losses) exceed += x >= 0.5 + 2.0;
  EXPECT_LE(double(exceed) / double(n), 0.1354);

  EXPECT_LT(SecondsSince(start), 5.0);
}

TEST_F(AcceptanceTest, C2TightKlBound) {
  Criterion(2, "tight KL bound on 10^4 random pairs");
  const auto start = Clock::now();
  int violations = 0;
  for (const auto& [p, q] : SharedPairCorpus()) {
    const double eps = SymmetricMaxDivergence(p, q);
    if (KlDivergence(p, q) > KlTightBound(eps) + 1e-12) ++violations;
  }
  EXPECT_EQ(violations, 0);
  EXPECT_LT(SecondsSince(start), 30.0);
}

TEST_F(AcceptanceTest, C3AntipodalReduction) {
  Criterion(3, "antipodal reduction on the same 10^4 pairs");

  for (const auto& [p, q] : SharedPairCorpus()) {
    const AntipodalPair pair = Antipodalize(p, q);
    ASSERT_TRUE(VerifyAntipodal(pair));
    ASSERT_NEAR(SymmetricMaxDivergence(pair.m, pair.m_prime), pair.epsilon,
                1e-12);
    ASSERT_GE(KlDivergence(pair.m, pair.m_prime) - KlDivergence(p, q),
              -1e-12);
    ASSERT_LE(KlSymmetryGap(pair), 1e-12);
  }

  // Golden case: D = (0.5, 0.5), D' = (0.4, 0.6).
  const AntipodalPair golden =
      Antipodalize(cdp_test::MakeDistribution({0.5, 0.5}),
                   cdp_test::MakeDistribution({0.4, 0.6}));
  EXPECT_NEAR(golden.m.ProbOf("o0"), 0.5, 1e-12);
  EXPECT_NEAR(golden.m.ProbOf("o1"), 0.4, 1e-12);
  EXPECT_NEAR(golden.m.ProbOf("o1#s"), 0.1, 1e-12);
  EXPECT_NEAR(golden.m_prime.ProbOf("o0"), 0.4, 1e-12);
  EXPECT_NEAR(golden.m_prime.ProbOf("o1"), 0.5, 1e-12);
  EXPECT_NEAR(golden.m_prime.ProbOf("o1#s"), 0.1, 1e-12);
  const double expected_kl = 0.1 * std::log(1.25);
  EXPECT_NEAR(KlDivergence(golden.m, golden.m_prime), expected_kl, 1e-15);
  EXPECT_NEAR(KlDivergence(golden.m_prime, golden.m), expected_kl, 1e-15);
}

TEST_F(AcceptanceTest, C4HalvingIdentity) {
  Criterion(4, "dp_to_cdp mu halves the DRV bound bit-exactly");
  for (int i = 0; i < 1000; ++i) {
    const double eps = 3.0 * double(i) / 999.0;
    ASSERT_EQ(DpToCdp(eps).mu, DrvKlBound(eps) / 2.0) << "eps = " << eps;
  }
}

TEST_F(AcceptanceTest, C5CompositionOracle) {
  Criterion(5, "composition oracle, 6x randomized response at eps 0.3");
  const double eps = 0.3;
  const auto [p, q] = RandomizedResponsePair(eps);
  const double mu = KlDivergence(p, q);
  const double tau = eps;  // Hoeffding standard of the +-eps loss

  const std::vector<PrivacyLossRV> rvs(6, PrivacyLossRv(p, q));
  const PrivacyLossRV joint = ConvolveLossRvs(rvs);
  EXPECT_NEAR(joint.Mean(), 6.0 * mu, 1e-10);

  EXPECT_TRUE(VerifyCertificate(joint, std::sqrt(6.0) * tau,
                                DefaultLambdaGrid())
                  .Passes());

  const CdpBound composed =
      ComposeCdp(std::vector<CdpBound>(6, CdpBound{mu, tau}));
  EXPECT_EQ(composed.mu, 6.0 * mu);
  EXPECT_EQ(composed.tau, std::sqrt(6.0) * tau);
}

TEST_F(AcceptanceTest, C6AdvancedCompositionValue) {
  Criterion(6, "advanced composition against a 50-digit oracle");
  using Wide = boost::multiprecision::cpp_dec_float_50;
  const Wide k = 100, eps = Wide(1) / 10, delta = Wide(1) / 1000000;
  const Wide oracle = boost::multiprecision::sqrt(2 * k * log(1 / delta)) * eps +
                      k * eps * (exp(eps) - 1) / 2;
  const double lib = AdvancedComposition(100, 0.1, 0.0, 1e-6).epsilon;
  EXPECT_NEAR(lib, oracle.convert_to<double>(), 1e-4);
  EXPECT_NEAR(oracle.convert_to<double>(), 5.78237, 1e-4);
}

TEST_F(AcceptanceTest, C7GroupPrivacyNearTightness) {
  Criterion(7, "group recursion near-tightness and closed-form domination");
  const GroupBoundResult rec = GroupCdpRecursion({5e-13, 1e-6}, 8);
  const double group_tau = 8e-6;
  const double group_mu = group_tau * group_tau / 2.0;  // 3.2e-11
  EXPECT_LE(rec.bound.tau, 1.1 * group_tau);
  EXPECT_LE(rec.bound.mu, 1.2 * group_mu);
  EXPECT_GE(rec.bound.tau, group_tau);
  EXPECT_GE(rec.bound.mu, group_mu);

  std::mt19937_64 rng(20260810);
  std::uniform_int_distribution<int> m_dist(0, 6);
  std::uniform_real_distribution<double> frac(0.01, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const int s = 1 << m_dist(rng);
    const double log2s = std::max(1.0, std::log2(double(s)));
    const double cap =
        0.5 / (double(s) * log2s * log2s * log2s * 34.0 * 34.0 * 34.0);
    const double tau = cap * frac(rng);
    const CdpBound start{tau * tau / 2.0, tau};
    const GroupBoundResult recursion = GroupCdpRecursion(start, s);
    const GroupBoundResult closed = GroupCdpClosedForm(start, s);
    ASSERT_GE(closed.bound.tau, recursion.bound.tau);
    ASSERT_GE(closed.bound.mu, recursion.bound.mu);
  }
}

TEST_F(AcceptanceTest, C8PureDpSubgaussianity) {
  Criterion(8, "pure-DP loss passes the certificate at tau = epsilon");
  std::mt19937_64 rng(20260810);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    auto [p, q] = RandomEqualSupportPair(rng, 2, 8, 1.0);
    const double eps = SymmetricMaxDivergence(p, q);
    if (!VerifyCertificate(PrivacyLossRv(p, q), eps, DefaultLambdaGrid())
             .Passes()) {
      ++violations;
    }
  }
  EXPECT_EQ(violations, 0);
}

TEST_F(AcceptanceTest, C9LedgerAndTail) {
  Criterion(9, "ledger totals, exceedance, and (epsilon, delta) conversion");
  Ledger ledger;
  for (int i = 0; i < 100; ++i) {
    ledger = ledger.Record("query-" + std::to_string(i), {0.005, 0.1});
  }
  EXPECT_NEAR(ledger.total().mu, 0.5, 1e-12);
  EXPECT_NEAR(ledger.total().tau, 1.0, 1e-12);
  EXPECT_NEAR(ExceedanceProbability(ledger, 2.5), std::exp(-2.0), 1e-12);
  EXPECT_NEAR(ToApproxDp(ledger.total(), std::exp(-2.0)).epsilon, 2.5, 1e-12);
}

}  // namespace
}  // namespace cdp
