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
#ifndef CDP_GROUP_PRIVACY_H_
#define CDP_GROUP_PRIVACY_H_

#include <cmath>
#include <string>
#include <vector>

#include "cdp/mechanisms.h"

namespace cdp {

// The universal constant of the group-privacy closed forms, 2 * 34^4.5.
extern const double kGroupAlpha;

enum class GroupMethod { kExactGaussian, kRecursion, kClosedForm };

std::string GroupMethodName(GroupMethod method);

// Group-privacy bound for a group of size s, with the per-level doubling
// trace when computed by recursion. Non-power-of-two s is rounded up;
// requested and effective sizes are both recorded.
struct GroupBoundResult {
  int s = 1;            // requested
  int effective_s = 1;  // next power of two
  CdpBound bound;
  GroupMethod method = GroupMethod::kRecursion;
  // steps[0] is the input bound (after inflation, if requested); one entry
  // per doubling level after that. Empty for closed forms.
  std::vector<CdpBound> steps;
  bool rounded_up = false;
  // True when tau * s * (log2 s)^3 * 34^3 <= 1/2 fails for the effective s.
  // Fatal for the closed forms, a warning for the recursion.
  bool smallness_condition_violated = false;
  bool inflated = false;
  double original_tau = 0;  // before inflation; meaningful when inflated
};

// One doubling step of the subgaussian standard: 2 tau + 34 tau^1.5.
double GroupTauStep(double tau_m);

// One doubling step of the expected loss: 2 mu + tau^2 + 3.5 tau^3 +
// 1.5 tau^4. Requires the maintained invariant mu <= tau^2/2.
double GroupMuStep(double mu_m, double tau_m);

// Doubles the group size log2(s) times from the input bound, recording every
// level. Requires mu <= tau^2/2 (set inflate to raise tau to sqrt(2 mu)
// first; never done silently). The proof's smallness condition is reported
// in the result, not enforced: the per-level invariant is what the steps
// need, and it is checked at every level.
GroupBoundResult GroupCdpRecursion(const CdpBound& bound, int s,
                                   bool inflate = false);

// Closed form dominating the tau recursion:
// s tau + kGroupAlpha * (s (log2 s)^3 tau)^1.5. Requires the smallness
// condition tau * s * (log2 s)^3 * 34^3 <= 1/2.
double GroupTauClosedForm(double tau, int s);

// Closed form dominating the mu recursion from a (tau^2/2, tau) start:
// (s tau)^2/2 + kGroupAlpha * (s tau)^2.5 * (log2 s)^4.5. Same smallness
// condition. The polylog exponent uses the doubling count itself; with one
// fewer (as in the two-level base case of the underlying induction) the
// term vanishes at s = 2 and the form stops dominating the recursion.
double GroupMuClosedForm(double tau, int s);

// Closed-form variants packaged with the same bookkeeping as the recursion.
GroupBoundResult GroupCdpClosedForm(const CdpBound& bound, int s,
                                    bool inflate = false);

// Expected-loss bound for a composition of two adjacency steps
// (Lemma on pairwise expectations): mu1 + mu2 + tau1 tau2 + 3 tau1^2 tau2 +
// (tau1 + 3 tau1^2) mu2, for tau1 <= 1/3. The tau1^2 tau2 coefficient is 3,
// matching the proof's concluding line (the lemma statement prints 2).
double PairwiseKlBound(double mu1, double tau1, double mu2, double tau2);

// Subgaussian-standard bound for the two-step composition, tau <= 1/4:
// 2 tau + 34 tau^1.5 (identical to GroupTauStep by construction).
double PairwiseTauBound(double tau);

// True iff tau * s * (log2 s)^3 * 34^3 <= 1/2 for the given s.
bool GroupSmallnessConditionHolds(double tau, int s);

// Smallest power of two >= s (s >= 1).
int NextPowerOfTwo(int s);

}  // namespace cdp

#endif  // CDP_GROUP_PRIVACY_H_
