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
#include "cdp/composition.h"

#include <cmath>
#include <stdexcept>

namespace cdp {

CdpBound ComposeCdp(const std::vector<CdpBound>& bounds) {
  double mu = 0;
  double tau_sq = 0;
  for (const CdpBound& bound : bounds) {
    if (!(bound.mu >= 0) || !(bound.tau >= 0)) {
      throw std::invalid_argument("cdp bound components must be >= 0");
    }
    mu += bound.mu;
    tau_sq += bound.tau * bound.tau;
  }
  return {mu, std::sqrt(tau_sq)};
}

DpBound AdvancedComposition(int k, double epsilon, double delta_prime,
                            double delta) {
  if (k < 1) throw std::domain_error("composition length k must be >= 1");
  if (!(epsilon >= 0)) throw std::domain_error("epsilon must be >= 0");
  if (!(delta_prime >= 0) || delta_prime >= 1) {
    throw std::domain_error("delta_prime must lie in [0, 1)");
  }
  if (!(delta > 0) || delta >= 1) {
    throw std::domain_error("delta must lie in (0, 1)");
  }
  const double kd = double(k);
  const double eps_total =
      std::sqrt(2.0 * kd * std::log(1.0 / delta)) * epsilon +
      kd * epsilon * std::expm1(epsilon) / 2.0;
  return {eps_total, kd * delta_prime + delta};
}

DpBound BasicComposition(int k, double epsilon) {
  if (k < 1) throw std::domain_error("composition length k must be >= 1");
  if (!(epsilon >= 0)) throw std::domain_error("epsilon must be >= 0");
  return {double(k) * epsilon, 0.0};
}

PrivacyLossRV ConvolveLossRvs(const std::vector<PrivacyLossRV>& rvs) {
  // The identity of convolution: no mechanisms, no loss.
  std::vector<LossAtom> acc = {{0.0, 1.0}};
  for (const PrivacyLossRV& rv : rvs) {
    const std::vector<LossAtom>& next = rv.atoms();
    const std::int64_t product =
        std::int64_t(acc.size()) * std::int64_t(next.size());
    if (product > kConvolutionAtomLimit) {
      throw std::length_error("convolution would exceed the atom limit");
    }
    std::vector<LossAtom> out;
    out.reserve(std::size_t(product));
    for (const LossAtom& a : acc) {
      for (const LossAtom& b : next) {
        out.push_back({a.loss + b.loss, a.prob * b.prob});
      }
    }
    // Canonicalization merges atoms with losses equal within tolerance,
    // which keeps rational-ratio mechanisms from growing exponentially.
    acc = PrivacyLossRV(std::move(out)).atoms();
  }
  return PrivacyLossRV(std::move(acc));
}

}  // namespace cdp
