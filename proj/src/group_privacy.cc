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
#include "cdp/group_privacy.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cdp {
namespace {

// Relative slack on the mu <= tau^2/2 invariant; absorbs the rounding of an
// inflated tau = sqrt(2 mu) squared back.
constexpr double kInvariantSlack = 1e-12;

void CheckMuTauInvariant(double mu, double tau, const char* where) {
  if (mu > tau * tau / 2.0 * (1.0 + kInvariantSlack)) {
    std::ostringstream msg;
    msg << where << ": invariant mu <= tau^2/2 violated (mu = " << mu
        << ", tau^2/2 = " << tau * tau / 2.0
        << "); pass inflate to raise tau to sqrt(2 mu)";
    throw std::domain_error(msg.str());
  }
}

int Log2OfPowerOfTwo(int s) {
  int m = 0;
  while ((1 << m) < s) ++m;
  return m;
}

struct GroupInput {
  CdpBound bound;
  GroupBoundResult result;  // bookkeeping prefilled, bound not yet set
};

GroupInput PrepareGroupInput(const CdpBound& bound, int s, bool inflate,
                             GroupMethod method) {
  if (s < 1) throw std::domain_error("group size s must be >= 1");
  if (!(bound.mu >= 0) || !(bound.tau >= 0)) {
    throw std::domain_error("cdp bound components must be >= 0");
  }
  GroupInput input;
  input.result.s = s;
  input.result.effective_s = NextPowerOfTwo(s);
  input.result.rounded_up = input.result.effective_s != s;
  input.result.method = method;

  CdpBound start = bound;
  if (start.mu > start.tau * start.tau / 2.0 * (1.0 + kInvariantSlack)) {
    if (!inflate) {
      CheckMuTauInvariant(start.mu, start.tau, "group bound input");
    }
    input.result.inflated = true;
    input.result.original_tau = start.tau;
    start.tau = std::sqrt(2.0 * start.mu);
  }
  input.result.smallness_condition_violated =
      !GroupSmallnessConditionHolds(start.tau, input.result.effective_s);
  input.bound = start;
  return input;
}

}  // namespace

const double kGroupAlpha = 2.0 * std::pow(34.0, 4.5);

std::string GroupMethodName(GroupMethod method) {
  switch (method) {
    case GroupMethod::kExactGaussian:
      return "exact-gaussian";
    case GroupMethod::kRecursion:
      return "recursion";
    case GroupMethod::kClosedForm:
      return "closed-form";
  }
  return "unknown";
}

double GroupTauStep(double tau_m) {
  if (!(tau_m >= 0)) throw std::domain_error("tau must be >= 0");
  return 2.0 * tau_m + 34.0 * std::pow(tau_m, 1.5);
}

double GroupMuStep(double mu_m, double tau_m) {
  if (!(mu_m >= 0) || !(tau_m >= 0)) {
    throw std::domain_error("mu and tau must be >= 0");
  }
  CheckMuTauInvariant(mu_m, tau_m, "group mu step");
  const double t2 = tau_m * tau_m;
  return 2.0 * mu_m + t2 + 3.5 * t2 * tau_m + 1.5 * t2 * t2;
}

GroupBoundResult GroupCdpRecursion(const CdpBound& bound, int s,
                                   bool inflate) {
  GroupInput input = PrepareGroupInput(bound, s, inflate,
                                       GroupMethod::kRecursion);
  GroupBoundResult result = std::move(input.result);
  CdpBound level = input.bound;
  result.steps.push_back(level);
  const int doublings = Log2OfPowerOfTwo(result.effective_s);
  for (int m = 0; m < doublings; ++m) {
    // GroupMuStep re-checks the maintained invariant at every level.
    level = {GroupMuStep(level.mu, level.tau), GroupTauStep(level.tau)};
    result.steps.push_back(level);
  }
  // The map stops maintaining the invariant once intermediate taus grow to
  // hundreds; that only happens far outside the bound's meaningful domain,
  // and is an error, not a result.
  CheckMuTauInvariant(level.mu, level.tau, "group recursion final level");
  result.bound = level;
  return result;
}

double GroupTauClosedForm(double tau, int s) {
  if (!(tau >= 0)) throw std::domain_error("tau must be >= 0");
  if (s < 1) throw std::domain_error("group size s must be >= 1");
  const int s_eff = NextPowerOfTwo(s);
  if (!GroupSmallnessConditionHolds(tau, s_eff)) {
    throw std::domain_error(
        "closed form requires tau * s * (log2 s)^3 * 34^3 <= 1/2");
  }
  const double m = double(Log2OfPowerOfTwo(s_eff));
  return double(s_eff) * tau +
         kGroupAlpha * std::pow(double(s_eff) * m * m * m * tau, 1.5);
}

double GroupMuClosedForm(double tau, int s) {
  if (!(tau >= 0)) throw std::domain_error("tau must be >= 0");
  if (s < 1) throw std::domain_error("group size s must be >= 1");
  const int s_eff = NextPowerOfTwo(s);
  if (!GroupSmallnessConditionHolds(tau, s_eff)) {
    throw std::domain_error(
        "closed form requires tau * s * (log2 s)^3 * 34^3 <= 1/2");
  }
  const double st = double(s_eff) * tau;
  const double m = double(Log2OfPowerOfTwo(s_eff));
  return st * st / 2.0 + kGroupAlpha * std::pow(st, 2.5) * std::pow(m, 4.5);
}

GroupBoundResult GroupCdpClosedForm(const CdpBound& bound, int s,
                                    bool inflate) {
  GroupInput input = PrepareGroupInput(bound, s, inflate,
                                       GroupMethod::kClosedForm);
  GroupBoundResult result = std::move(input.result);
  if (result.smallness_condition_violated) {
    throw std::domain_error(
        "closed form requires tau * s * (log2 s)^3 * 34^3 <= 1/2");
  }
  result.bound = {GroupMuClosedForm(input.bound.tau, result.effective_s),
                  GroupTauClosedForm(input.bound.tau, result.effective_s)};
  return result;
}

double PairwiseKlBound(double mu1, double tau1, double mu2, double tau2) {
  if (!(mu1 >= 0) || !(mu2 >= 0) || !(tau1 >= 0) || !(tau2 >= 0)) {
    throw std::domain_error("bound components must be >= 0");
  }
  if (tau1 > 1.0 / 3.0) {
    throw std::domain_error("pairwise kl bound requires tau1 <= 1/3");
  }
  // The tau1^2 tau2 coefficient follows the proof's concluding line (3); the
  // lemma statement prints 2.
  return mu1 + mu2 + tau1 * tau2 + 3.0 * tau1 * tau1 * tau2 +
         (tau1 + 3.0 * tau1 * tau1) * mu2;
}

double PairwiseTauBound(double tau) {
  if (!(tau >= 0) || tau > 0.25) {
    throw std::domain_error("pairwise tau bound requires 0 <= tau <= 1/4");
  }
  return GroupTauStep(tau);
}

bool GroupSmallnessConditionHolds(double tau, int s) {
  const double log2s = std::log2(double(s));
  return tau * double(s) * log2s * log2s * log2s * 34.0 * 34.0 * 34.0 <= 0.5;
}

int NextPowerOfTwo(int s) {
  int p = 1;
  while (p < s) p *= 2;
  return p;
}

}  // namespace cdp
