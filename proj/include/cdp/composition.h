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
#ifndef CDP_COMPOSITION_H_
#define CDP_COMPOSITION_H_

#include <cstdint>
#include <vector>

#include "cdp/distribution.h"
#include "cdp/mechanisms.h"

namespace cdp {

// Composition of k CDP mechanisms: (sum mu_i, sqrt(sum tau_i^2)).
// The empty composition is (0, 0).
CdpBound ComposeCdp(const std::vector<CdpBound>& bounds);

// Theorem: k-fold adaptive composition of (epsilon, delta_prime)-DP
// mechanisms is (sqrt(2k ln(1/delta)) eps + k eps (e^eps - 1)/2,
// k delta_prime + delta)-DP for every delta > 0.
DpBound AdvancedComposition(int k, double epsilon, double delta_prime,
                            double delta);

// The worst-case (k * epsilon, 0) bound.
DpBound BasicComposition(int k, double epsilon);

// Guard against exponential atom growth in repeated convolution.
inline constexpr std::int64_t kConvolutionAtomLimit = 1'000'000;

// Exact discrete convolution of independent loss rvs; the non-adaptive
// oracle for the composition theorem (the joint loss of an independent
// composition is the sum of the per-step losses). Atoms with losses equal
// within kAtomMergeTolerance are merged. Errors if the atom count would
// exceed kConvolutionAtomLimit.
PrivacyLossRV ConvolveLossRvs(const std::vector<PrivacyLossRV>& rvs);

}  // namespace cdp

#endif  // CDP_COMPOSITION_H_
