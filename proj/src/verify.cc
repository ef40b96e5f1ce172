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
#include "cdp/verify.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cdp/composition.h"
#include "cdp/group_privacy.h"
#include "cdp/mechanisms.h"
#include "cdp/reduction.h"
#include "cdp/serialization.h"
#include "cdp/subgaussian.h"

namespace cdp {
namespace {

using nlohmann::json;

// Independent oracle: max over all nonempty subsets S of ln(p(S)/q(S)).
// Deliberately not the per-atom route the library takes.
double SubsetMaxDivergence(const DiscreteDistribution& p,
                           const DiscreteDistribution& q) {
  const std::size_t n = p.size();
  if (n > 24) throw std::invalid_argument("subset oracle limited to n <= 24");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    double ps = 0, qs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) {
        ps += p.probs()[i];
        qs += q.ProbOf(p.outcomes()[i]);
      }
    }
    if (ps > 0) best = std::max(best, std::log(ps) - std::log(qs));
  }
  return best;
}

json PairToJson(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  return json{{"p", DistributionToJson(p)}, {"q", DistributionToJson(q)}};
}

class Suite {
 public:
  Suite(std::string name, std::uint64_t seed, std::int64_t trials)
      : seed_(seed) {
    report_.suite = std::move(name);
    report_.seed = seed;
    report_.trials = trials;
  }

  // Runs `body(rng, trial)` for each trial; `body` returns an empty string
  // on success and a counterexample dump on failure. The check stops at the
  // first failure. Each check gets its own generator stream, so checks stay
  // independent of one another.
  template <typename Body>
  void Check(const std::string& name, std::int64_t trials, Body&& body) {
    CheckResult result;
    result.name = name;
    std::mt19937_64 rng(seed_ ^ std::hash<std::string>{}(name));
    for (std::int64_t t = 0; t < trials; ++t) {
      ++result.cases;
      std::string counterexample;
      try {
        counterexample = body(rng, t);
      } catch (const std::exception& e) {
        counterexample = json{{"exception", e.what()}}.dump();
      }
      if (!counterexample.empty()) {
        result.passed = false;
        result.counterexample = counterexample;
        break;
      }
    }
    report_.checks.push_back(std::move(result));
  }

  SuiteReport Take() { return std::move(report_); }

 private:
  std::uint64_t seed_;
  SuiteReport report_;
};

}  // namespace

bool SuiteReport::Passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

std::pair<DiscreteDistribution, DiscreteDistribution> RandomEqualSupportPair(
    std::mt19937_64& rng, int min_support, int max_support,
    double max_epsilon) {
  std::uniform_int_distribution<int> size_dist(min_support, max_support);
  std::exponential_distribution<double> gamma1(1.0);  // Dirichlet(1,...,1)
  for (;;) {
    const std::size_t n = static_cast<std::size_t>(size_dist(rng));
    std::vector<std::string> outcomes(n);
    std::vector<double> p(n), q(n);
    double ps = 0, qs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      outcomes[i] = "o" + std::to_string(i);
      ps += (p[i] = gamma1(rng));
      qs += (q[i] = gamma1(rng));
    }
    for (std::size_t i = 0; i < n; ++i) {
      p[i] /= ps;
      q[i] /= qs;
    }
    DiscreteDistribution dp(outcomes, p), dq(outcomes, q);
    const double eps = SymmetricMaxDivergence(dp, dq);
    if (eps > 0 && eps <= max_epsilon) return {std::move(dp), std::move(dq)};
  }
}

SuiteReport RunReductionSuite(std::uint64_t seed, std::int64_t trials) {
  Suite suite("reduction", seed, trials);

  suite.Check("kl-tight-bound", trials, [](std::mt19937_64& rng, std::int64_t) {
    auto [p, q] = RandomEqualSupportPair(rng, 2, 8, 2.0);
    const double eps = SymmetricMaxDivergence(p, q);
    const double kl = KlDivergence(p, q);
    if (kl > KlTightBound(eps) + 1e-12) {
      return json{{"epsilon", eps},
                  {"kl", kl},
                  {"bound", KlTightBound(eps)},
                  {"pair", PairToJson(p, q)}}
          .dump();
    }
    return std::string();
  });

  suite.Check("antipodal-valid", trials, [](std::mt19937_64& rng, std::int64_t) {
    auto [p, q] = RandomEqualSupportPair(rng, 2, 8, 2.0);
    const AntipodalPair pair = Antipodalize(p, q);
    if (!VerifyAntipodal(pair)) {
      return json{{"pair", PairToJson(p, q)},
                  {"antipodal", AntipodalPairToJson(pair)}}
          .dump();
    }
    return std::string();
  });

  suite.Check("antipodal-preserves-epsilon", trials,
              [](std::mt19937_64& rng, std::int64_t) {
                auto [p, q] = RandomEqualSupportPair(rng, 2, 8, 2.0);
                const AntipodalPair pair = Antipodalize(p, q);
                const double back =
                    SymmetricMaxDivergence(pair.m, pair.m_prime);
                if (std::abs(back - pair.epsilon) > 1e-12) {
                  return json{{"epsilon", pair.epsilon},
                              {"after", back},
                              {"pair", PairToJson(p, q)}}
                      .dump();
                }
                return std::string();
              });

  suite.Check("antipodal-kl-nondecreasing", trials,
              [](std::mt19937_64& rng, std::int64_t) {
                auto [p, q] = RandomEqualSupportPair(rng, 2, 8, 2.0);
                const AntipodalPair pair = Antipodalize(p, q);
                const double before = KlDivergence(p, q);
                const double after = KlDivergence(pair.m, pair.m_prime);
                if (after - before < -1e-12) {
                  return json{{"kl_before", before},
                              {"kl_after", after},
                              {"pair", PairToJson(p, q)}}
                      .dump();
                }
                return std::string();
              });

  suite.Check("antipodal-kl-symmetric", trials,
              [](std::mt19937_64& rng, std::int64_t) {
                auto [p, q] = RandomEqualSupportPair(rng, 2, 8, 2.0);
                const AntipodalPair pair = Antipodalize(p, q);
                const double gap = KlSymmetryGap(pair);
                if (gap > 1e-12) {
                  return json{{"gap", gap}, {"pair", PairToJson(p, q)}}.dump();
                }
                return std::string();
              });

  suite.Check("halving-identity", 1000,
              [](std::mt19937_64&, std::int64_t t) {
                const double eps = 3.0 * double(t) / 999.0;
                if (DpToCdp(eps).mu != DrvKlBound(eps) / 2.0) {
                  return json{{"epsilon", eps}}.dump();
                }
                return std::string();
              });

  suite.Check("pure-dp-hoeffding-certificate", trials,
              [](std::mt19937_64& rng, std::int64_t) {
                auto [p, q] = RandomEqualSupportPair(rng, 2, 8, 1.0);
                const double eps = SymmetricMaxDivergence(p, q);
                const SubgaussianCertificate cert = VerifyCertificate(
                    PrivacyLossRv(p, q), eps, DefaultLambdaGrid());
                if (!cert.Passes()) {
                  return json{{"epsilon", eps},
                              {"certificate", CertificateToJson(cert)},
                              {"pair", PairToJson(p, q)}}
                      .dump();
                }
                return std::string();
              });

  suite.Check("atom-max-equals-subset-max", trials,
              [](std::mt19937_64& rng, std::int64_t) {
                auto [p, q] = RandomEqualSupportPair(rng, 2, 8, 6.0);
                const double atom_max = MaxDivergence(p, q);
                const double subset_max = SubsetMaxDivergence(p, q);
                if (std::abs(atom_max - subset_max) > 1e-12) {
                  return json{{"atom_max", atom_max},
                              {"subset_max", subset_max},
                              {"pair", PairToJson(p, q)}}
                      .dump();
                }
                return std::string();
              });

  return suite.Take();
}

SuiteReport RunCompositionSuite(std::uint64_t seed, std::int64_t trials) {
  Suite suite("composition", seed, trials);

  suite.Check("convolution-mean-additivity", trials,
              [](std::mt19937_64& rng, std::int64_t) {
                std::uniform_int_distribution<int> k_dist(1, 4);
                const int k = k_dist(rng);
                std::vector<PrivacyLossRV> rvs;
                double mean_sum = 0;
                for (int i = 0; i < k; ++i) {
                  auto [p, q] = RandomEqualSupportPair(rng, 2, 5, 2.0);
                  rvs.push_back(PrivacyLossRv(p, q));
                  mean_sum += rvs.back().Mean();
                }
                const double mean = ConvolveLossRvs(rvs).Mean();
                if (std::abs(mean - mean_sum) > 1e-10) {
                  return json{{"k", k},
                              {"convolved_mean", mean},
                              {"sum_of_means", mean_sum}}
                      .dump();
                }
                return std::string();
              });

  suite.Check(
      "certificate-composition", trials,
      [](std::mt19937_64& rng, std::int64_t) {
        std::uniform_int_distribution<int> k_dist(2, 5);
        std::uniform_real_distribution<double> eps_dist(0.05, 1.0);
        const int k = k_dist(rng);
        std::vector<PrivacyLossRV> rvs;
        std::vector<double> taus;
        for (int i = 0; i < k; ++i) {
          const double eps = eps_dist(rng);
          auto [p, q] = RandomizedResponsePair(eps);
          rvs.push_back(PrivacyLossRv(p, q));
          taus.push_back(eps);
          const SubgaussianCertificate single =
              VerifyCertificate(rvs.back(), eps, DefaultLambdaGrid());
          if (!single.Passes()) {
            return json{{"epsilon", eps},
                        {"certificate", CertificateToJson(single)}}
                .dump();
          }
        }
        const SubgaussianCertificate joint = VerifyCertificate(
            ConvolveLossRvs(rvs), SumStandard(taus), DefaultLambdaGrid());
        if (!joint.Passes()) {
          return json{{"taus", taus},
                      {"certificate", CertificateToJson(joint)}}
              .dump();
        }
        return std::string();
      });

  suite.Check("compose-equal-bounds", trials,
              [](std::mt19937_64& rng, std::int64_t) {
                // Dyadic components keep every sum exact, so the closed form
                // (k mu, sqrt(k tau^2)) must match bit for bit.
                std::uniform_int_distribution<int> grid(0, 1 << 20);
                std::uniform_int_distribution<int> k_dist(1, 64);
                const double mu = std::ldexp(double(grid(rng)), -22);
                const double tau = std::ldexp(double(grid(rng)), -21);
                const int k = k_dist(rng);
                const std::vector<CdpBound> bounds(std::size_t(k), {mu, tau});
                const CdpBound composed = ComposeCdp(bounds);
                const double want_mu = double(k) * mu;
                const double want_tau = std::sqrt(double(k) * tau * tau);
                if (composed.mu != want_mu || composed.tau != want_tau) {
                  return json{{"k", k},
                              {"mu", mu},
                              {"tau", tau},
                              {"composed_mu", composed.mu},
                              {"composed_tau", composed.tau}}
                      .dump();
                }
                return std::string();
              });

  suite.Check("advanced-monotone", trials,
              [](std::mt19937_64& rng, std::int64_t) {
                std::uniform_int_distribution<int> k_dist(1, 200);
                std::uniform_real_distribution<double> eps_dist(0.0, 1.0);
                std::uniform_real_distribution<double> logd_dist(2.0, 20.0);
                const int k = k_dist(rng);
                const double eps = eps_dist(rng);
                const double delta = std::exp(-logd_dist(rng));
                const double base =
                    AdvancedComposition(k, eps, 0, delta).epsilon;
                const double more_k =
                    AdvancedComposition(k + 1, eps, 0, delta).epsilon;
                const double more_eps =
                    AdvancedComposition(k, eps + 0.1, 0, delta).epsilon;
                const double smaller_delta =
                    AdvancedComposition(k, eps, 0, delta / 2).epsilon;
                if (more_k < base || more_eps < base || smaller_delta < base) {
                  return json{{"k", k}, {"epsilon", eps}, {"delta", delta}}
                      .dump();
                }
                return std::string();
              });

  suite.Check(
      "gaussian-composition-closed-form", trials,
      [](std::mt19937_64& rng, std::int64_t) {
        std::uniform_int_distribution<int> k_dist(1, 20);
        std::uniform_real_distribution<double> sens_dist(0.1, 2.0);
        std::uniform_real_distribution<double> sigma_dist(0.5, 20.0);
        const int k = k_dist(rng);
        std::vector<CdpBound> bounds;
        double tau_sq = 0;
        for (int i = 0; i < k; ++i) {
          const GaussianMechanismSpec spec{sens_dist(rng), sigma_dist(rng)};
          bounds.push_back(GaussianCdp(spec));
          tau_sq += bounds.back().tau * bounds.back().tau;
        }
        const CdpBound composed = ComposeCdp(bounds);
        // The composed loss is itself Gaussian: tau adds in quadrature and
        // mu stays exactly tau^2/2 (halving commutes with the exact sums).
        const CdpBound single =
            GaussianCdp({std::sqrt(tau_sq), 1.0});
        if (composed.mu != tau_sq / 2.0 || composed.tau != single.tau ||
            std::abs(single.mu - composed.mu) >
                1e-15 * std::max(1.0, composed.mu)) {
          return json{{"k", k},
                      {"composed", CdpBoundToJson(composed)},
                      {"single", CdpBoundToJson(single)}}
              .dump();
        }
        return std::string();
      });

  return suite.Take();
}

SuiteReport RunGaussianSuite(std::uint64_t seed, std::int64_t trials) {
  Suite suite("gaussian", seed, trials);
  const std::int64_t n = 1'000'000;

  suite.Check("mc-mean", 1, [&](std::mt19937_64& rng, std::int64_t) {
    const GaussianMechanismSpec spec{1.0, 1.0};
    const auto law = GaussianLossParams(spec);
    const std::vector<double> losses = SampleGaussianLoss(spec, n, rng());
    double mean = 0;
    for (double x : losses) mean += x;
    mean /= double(n);
    const double limit = 3.0 * law.std / std::sqrt(double(n));
    if (std::abs(mean - law.mean) > limit) {
      return json{{"mean", mean}, {"expected", law.mean}, {"limit", limit}}
          .dump();
    }
    return std::string();
  });

  suite.Check("mc-std", 1, [&](std::mt19937_64& rng, std::int64_t) {
    const GaussianMechanismSpec spec{1.0, 1.0};
    const auto law = GaussianLossParams(spec);
    const std::vector<double> losses = SampleGaussianLoss(spec, n, rng());
    double mean = 0;
    for (double x : losses) mean += x;
    mean /= double(n);
    double var = 0;
    for (double x : losses) var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / double(n - 1));
    if (std::abs(sd - law.std) > 0.01 * law.std) {
      return json{{"stddev", sd}, {"expected", law.std}}.dump();
    }
    return std::string();
  });

  suite.Check("mc-tail", 1, [&](std::mt19937_64& rng, std::int64_t) {
    const GaussianMechanismSpec spec{1.0, 1.0};
    const auto law = GaussianLossParams(spec);
    const std::vector<double> losses = SampleGaussianLoss(spec, n, rng());
    for (double t : {1.0, 2.0, 3.0}) {
      const double threshold = law.mean + t * law.std;
      std::int64_t exceed = 0;
      for (double x : losses) exceed += x >= threshold;
      const double fraction = double(exceed) / double(n);
      if (fraction > TailBound(law.std, t)) {
        return json{{"t", t},
                    {"fraction", fraction},
                    {"bound", TailBound(law.std, t)}}
            .dump();
      }
    }
    return std::string();
  });

  suite.Check("group-sensitivity-identity", trials,
              [](std::mt19937_64& rng, std::int64_t) {
                std::uniform_real_distribution<double> sens_dist(0.0, 3.0);
                std::uniform_real_distribution<double> sigma_dist(0.5, 50.0);
                std::uniform_int_distribution<int> s_dist(1, 16);
                const GaussianMechanismSpec spec{sens_dist(rng),
                                                 sigma_dist(rng)};
                const int s = s_dist(rng);
                const CdpBound group = GaussianGroupCdp(spec, s);
                const CdpBound scaled = GaussianCdp(
                    {double(s) * spec.sensitivity, spec.sigma});
                if (group.mu != scaled.mu || group.tau != scaled.tau) {
                  return json{{"s", s},
                              {"group", CdpBoundToJson(group)},
                              {"scaled", CdpBoundToJson(scaled)}}
                      .dump();
                }
                return std::string();
              });

  suite.Check("calibration-roundtrip", trials,
              [](std::mt19937_64& rng, std::int64_t) {
                std::uniform_real_distribution<double> sens_dist(0.01, 5.0);
                std::uniform_real_distribution<double> mu_dist(1e-4, 2.0);
                std::uniform_real_distribution<double> tau_dist(1e-3, 2.0);
                const double sens = sens_dist(rng);
                const CdpBound target{mu_dist(rng), tau_dist(rng)};
                const double sigma = CalibrateGaussianForCdp(sens, target);
                const CdpBound achieved = GaussianCdp({sens, sigma});
                const double slack = 1.0 + 1e-12;
                if (achieved.mu > target.mu * slack ||
                    achieved.tau > target.tau * slack) {
                  return json{{"sensitivity", sens},
                              {"target", CdpBoundToJson(target)},
                              {"sigma", sigma},
                              {"achieved", CdpBoundToJson(achieved)}}
                      .dump();
                }
                return std::string();
              });

  return suite.Take();
}

SuiteReport RunGroupSuite(std::uint64_t seed, std::int64_t trials) {
  Suite suite("group", seed, trials);

  suite.Check(
      "recursion-dominates-exact-gaussian", trials,
      [](std::mt19937_64& rng, std::int64_t) {
        std::uniform_int_distribution<int> m_dist(0, 5);
        std::uniform_real_distribution<double> log_tau(-16.0, -7.0);
        const int s = 1 << m_dist(rng);
        const double tau = std::exp(log_tau(rng));
        const GaussianMechanismSpec spec{tau, 1.0};
        const GroupBoundResult rec = GroupCdpRecursion(GaussianCdp(spec), s);
        const CdpBound exact = GaussianGroupCdp(spec, s);
        if (rec.bound.tau < exact.tau || rec.bound.mu < exact.mu) {
          return json{{"s", s},
                      {"tau", tau},
                      {"recursion", GroupBoundResultToJson(rec)},
                      {"exact", CdpBoundToJson(exact)}}
              .dump();
        }
        return std::string();
      });

  suite.Check("near-tightness-small-tau", 1,
              [](std::mt19937_64&, std::int64_t) {
                const GroupBoundResult rec =
                    GroupCdpRecursion({5e-13, 1e-6}, 8);
                const double s_tau = 8e-6;
                if (rec.bound.tau > 1.1 * s_tau ||
                    rec.bound.mu > 1.2 * s_tau * s_tau / 2.0) {
                  return GroupBoundResultToJson(rec).dump();
                }
                return std::string();
              });

  suite.Check("per-level-invariant", trials,
              [](std::mt19937_64& rng, std::int64_t) {
                // Smallness-admissible draws: the theorem's domain.
                std::uniform_int_distribution<int> m_dist(0, 6);
                std::uniform_real_distribution<double> frac(0.01, 1.0);
                const int s = 1 << m_dist(rng);
                const double log2s = std::max(1.0, std::log2(double(s)));
                const double cap = 0.5 / (double(s) * log2s * log2s * log2s *
                                          34.0 * 34.0 * 34.0);
                const double tau = cap * frac(rng);
                const GroupBoundResult rec =
                    GroupCdpRecursion({tau * tau / 2.0, tau}, s);
                for (const CdpBound& step : rec.steps) {
                  if (step.mu > step.tau * step.tau / 2.0 * (1 + 1e-12)) {
                    return GroupBoundResultToJson(rec).dump();
                  }
                }
                return std::string();
              });

  suite.Check(
      "closed-form-dominates-recursion", trials,
      [](std::mt19937_64& rng, std::int64_t) {
        // Admissible draws: tau small enough for the closed form at this s.
        std::uniform_int_distribution<int> m_dist(0, 6);
        std::uniform_real_distribution<double> frac(0.01, 1.0);
        const int s = 1 << m_dist(rng);
        const double log2s = std::max(1.0, std::log2(double(s)));
        const double tau_cap =
            0.5 / (double(s) * log2s * log2s * log2s * 34.0 * 34.0 * 34.0);
        const double tau = tau_cap * frac(rng);
        const CdpBound start{tau * tau / 2.0, tau};
        const GroupBoundResult rec = GroupCdpRecursion(start, s);
        const GroupBoundResult closed = GroupCdpClosedForm(start, s);
        if (closed.bound.tau < rec.bound.tau ||
            closed.bound.mu < rec.bound.mu) {
          return json{{"s", s},
                      {"tau", tau},
                      {"recursion", GroupBoundResultToJson(rec)},
                      {"closed", GroupBoundResultToJson(closed)}}
              .dump();
        }
        return std::string();
      });

  suite.Check(
      "discrete-chain-oracle", trials, [](std::mt19937_64& rng, std::int64_t) {
        // A chain z_0 .. z_s of binary distributions whose consecutive odds
        // ratios are e^eps, so consecutive pairs are eps-DP adjacent. The
        // endpoint pair then obeys the group bound for size s.
        std::uniform_real_distribution<double> eps_dist(0.005, 0.05);
        const double eps = eps_dist(rng);
        for (int s : {2, 4}) {
          const double mu_step = eps * std::tanh(eps / 2.0);
          std::vector<DiscreteDistribution> chain;
          for (int i = 0; i <= s; ++i) {
            const double log_odds = (double(i) - double(s) / 2.0) * eps;
            const double head = 1.0 / (1.0 + std::exp(-log_odds));
            chain.push_back(
                DiscreteDistribution({"true", "false"}, {head, 1.0 - head}));
          }
          for (int i = 0; i < s; ++i) {
            const double kl_fwd = KlDivergence(chain[i], chain[i + 1]);
            const double kl_bwd = KlDivergence(chain[i + 1], chain[i]);
            const double step_eps =
                SymmetricMaxDivergence(chain[i], chain[i + 1]);
            if (step_eps > eps * (1 + 1e-9) ||
                std::max(kl_fwd, kl_bwd) > mu_step * (1 + 1e-9)) {
              return json{{"epsilon", eps},
                          {"step", i},
                          {"step_epsilon", step_eps}}
                  .dump();
            }
          }
          const GroupBoundResult group =
              GroupCdpRecursion({mu_step, eps}, s);
          const PrivacyLossRV endpoint =
              PrivacyLossRv(chain.front(), chain.back());
          const SubgaussianCertificate cert = VerifyCertificate(
              endpoint, group.bound.tau, DefaultLambdaGrid());
          if (endpoint.Mean() > group.bound.mu || !cert.Passes()) {
            return json{{"epsilon", eps},
                        {"s", s},
                        {"endpoint_mean", endpoint.Mean()},
                        {"group", GroupBoundResultToJson(group)},
                        {"certificate", CertificateToJson(cert)}}
                .dump();
          }
        }
        return std::string();
      });

  return suite.Take();
}

SuiteReport RunSuite(const std::string& name, std::uint64_t seed,
                     std::int64_t trials) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (name == "reduction") return RunReductionSuite(seed, trials);
  if (name == "composition") return RunCompositionSuite(seed, trials);
  if (name == "gaussian") return RunGaussianSuite(seed, trials);
  if (name == "group") return RunGroupSuite(seed, trials);
  throw std::invalid_argument(
      "unknown suite '" + name +
      "' (expected reduction|composition|gaussian|group)");
}

}  // namespace cdp
