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
#ifndef CDP_MECHANISMS_H_
#define CDP_MECHANISMS_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "cdp/distribution.h"

namespace cdp {

// A (mu, tau) concentrated-DP bound: the privacy loss has mean at most mu
// (nats) and its centered version is tau-subgaussian.
struct CdpBound {
  double mu = 0;
  double tau = 0;
};

// A classic (epsilon, delta) differential-privacy bound.
struct DpBound {
  double epsilon = 0;
  double delta = 0;
};

// The Gaussian mechanism: adds N(0, sigma^2) noise to a query with global
// sensitivity `sensitivity`.
struct GaussianMechanismSpec {
  double sensitivity = 0;
  double sigma = 1;
};

// Name of the sampler recorded in simulation metadata; reproducibility given
// (spec, n, seed) is a contract.
inline constexpr const char* kGaussianSamplerName =
    "mt19937_64/normal_distribution";

// The Gaussian mechanism with noise magnitude sigma is (tau^2/2, tau)-CDP
// with tau = sensitivity / sigma. mu is computed from the same tau, so
// mu == tau * tau / 2 holds bit-for-bit.
CdpBound GaussianCdp(const GaussianMechanismSpec& spec);

// The exact law of the Gaussian mechanism's privacy loss rv: Gaussian with
// mean tau^2/2 and standard deviation tau, tau = sensitivity / sigma.
struct GaussianLossLaw {
  double mean = 0;
  double std = 0;
};
GaussianLossLaw GaussianLossParams(const GaussianMechanismSpec& spec);

// Monte Carlo harness: draws x ~ N(0, sigma^2) and returns per-sample
// (sensitivity/sigma) * (x/sigma) + (sensitivity/sigma)^2 / 2. Deterministic
// given seed (kGaussianSamplerName).
std::vector<double> SampleGaussianLoss(const GaussianMechanismSpec& spec,
                                       std::int64_t n, std::uint64_t seed);

// Smallest sigma whose Gaussian mechanism satisfies the target bound
// componentwise: sigma = sensitivity / min over the positive components of
// {target.tau, sqrt(2 target.mu)}. A zero component is unconstrained; both
// zero with positive sensitivity is an error. sensitivity = 0 returns 1 by
// convention.
double CalibrateGaussianForCdp(double sensitivity, const CdpBound& target);

// The classic (epsilon, delta)-DP calibration baseline:
// sigma = sensitivity * sqrt(2 ln(1/delta)) / epsilon.
double CalibrateGaussianForDp(double sensitivity, const DpBound& bound);

// Group privacy for the Gaussian mechanism, exact: a group of size s has
// sensitivity at most s * sensitivity, so tau_s = s * sensitivity / sigma
// and the bound is (tau_s^2/2, tau_s).
CdpBound GaussianGroupCdp(const GaussianMechanismSpec& spec, int s);

// The canonical antipodal oracle pair: P puts e^eps/(1+e^eps) on "true" and
// the rest on "false"; Q is the swap. Max divergence both ways is exactly
// eps. eps = 0 is rejected (the degenerate pair is useless as an oracle).
std::pair<DiscreteDistribution, DiscreteDistribution> RandomizedResponsePair(
    double epsilon);

// Pure-DP parameter of the Laplace mechanism with scale b: sensitivity / b.
double LaplaceEpsilon(double sensitivity, double b);

}  // namespace cdp

#endif  // CDP_MECHANISMS_H_
