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
#include <limits>
#include <random>
#include <stdexcept>

namespace cdp {
namespace {

void ValidateSpec(const GaussianMechanismSpec& spec) {
  if (!(spec.sigma > 0)) {
    throw std::domain_error("gaussian mechanism requires sigma > 0");
  }
  if (!(spec.sensitivity >= 0)) {
    throw std::domain_error("sensitivity must be >= 0");
  }
}

}  // namespace

CdpBound GaussianCdp(const GaussianMechanismSpec& spec) {
  ValidateSpec(spec);
  const double tau = spec.sensitivity / spec.sigma;
  return {tau * tau / 2.0, tau};
}

GaussianLossLaw GaussianLossParams(const GaussianMechanismSpec& spec) {
  ValidateSpec(spec);
  const double tau = spec.sensitivity / spec.sigma;
  return {tau * tau / 2.0, tau};
}

std::vector<double> SampleGaussianLoss(const GaussianMechanismSpec& spec,
                                       std::int64_t n, std::uint64_t seed) {
  ValidateSpec(spec);
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  const double tau = spec.sensitivity / spec.sigma;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, spec.sigma);
  std::vector<double> losses;
  losses.reserve(std::size_t(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double x = noise(rng);
    losses.push_back(tau * (x / spec.sigma) + tau * tau / 2.0);
  }
  return losses;
}

double CalibrateGaussianForCdp(double sensitivity, const CdpBound& target) {
  if (!(sensitivity >= 0)) {
    throw std::domain_error("sensitivity must be >= 0");
  }
  if (!(target.mu >= 0) || !(target.tau >= 0)) {
    throw std::domain_error("target bound components must be >= 0");
  }
  if (sensitivity == 0) return 1.0;  // any sigma works; 1 by convention
  // A zero component is unconstrained; the strictest positive constraint on
  // sensitivity/sigma wins.
  double limit = std::numeric_limits<double>::infinity();
  if (target.tau > 0) limit = std::min(limit, target.tau);
  if (target.mu > 0) limit = std::min(limit, std::sqrt(2.0 * target.mu));
  if (!std::isfinite(limit)) {
    throw std::domain_error(
        "target (0, 0) is unattainable for positive sensitivity");
  }
  return sensitivity / limit;
}

double CalibrateGaussianForDp(double sensitivity, const DpBound& bound) {
  if (!(sensitivity >= 0)) {
    throw std::domain_error("sensitivity must be >= 0");
  }
  if (!(bound.epsilon > 0)) {
    throw std::domain_error("dp calibration requires epsilon > 0");
  }
  if (!(bound.delta > 0) || bound.delta >= 1) {
    throw std::domain_error("dp calibration requires delta in (0, 1)");
  }
  if (sensitivity == 0) return 1.0;
  return sensitivity * std::sqrt(2.0 * std::log(1.0 / bound.delta)) /
         bound.epsilon;
}

CdpBound GaussianGroupCdp(const GaussianMechanismSpec& spec, int s) {
  ValidateSpec(spec);
  if (s < 1) throw std::domain_error("group size must be >= 1");
  // Group sensitivity is at most s * sensitivity, so this is exact.
  const double tau = (double(s) * spec.sensitivity) / spec.sigma;
  return {tau * tau / 2.0, tau};
}

std::pair<DiscreteDistribution, DiscreteDistribution> RandomizedResponsePair(
    double epsilon) {
  if (!(epsilon > 0)) {
    throw std::invalid_argument(
        "randomized response requires epsilon > 0 (the degenerate pair is "
        "useless as an oracle)");
  }
  const double truthful = 1.0 / (1.0 + std::exp(-epsilon));  // e^eps/(1+e^eps)
  const double flipped = 1.0 / (1.0 + std::exp(epsilon));
  std::vector<std::string> outcomes = {"true", "false"};
  return {DiscreteDistribution(outcomes, {truthful, flipped}),
          DiscreteDistribution(outcomes, {flipped, truthful})};
}

double LaplaceEpsilon(double sensitivity, double b) {
  if (!(b > 0)) throw std::domain_error("laplace scale b must be > 0");
  if (!(sensitivity >= 0)) {
    throw std::domain_error("sensitivity must be >= 0");
  }
  return sensitivity / b;
}

}  // namespace cdp
