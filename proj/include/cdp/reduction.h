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
#ifndef CDP_REDUCTION_H_
#define CDP_REDUCTION_H_

#include <string>
#include <utility>
#include <vector>

#include "cdp/distribution.h"
#include "cdp/mechanisms.h"

namespace cdp {

// One outcome's split: the original label keeps a maximally divergent share
// of its mass (log ratio exactly +-eps) and the synthetic label s_x gets the
// remainder, identical on both sides.
struct SplitEntry {
  std::string original;  // x
  std::string split;     // s_x
  bool split_mass_zero = false;
};

// An antipodal pair (m, m_prime): every per-outcome log ratio lies in
// {-eps, 0, +eps}. Produced by Antipodalize, which splits each outcome's
// mass without moving mass across outcomes, preserving max divergence and
// never decreasing KL. The source pair is retained so the mass-split
// invariant can be verified after the fact.
struct AntipodalPair {
  DiscreteDistribution m;
  DiscreteDistribution m_prime;
  double epsilon = 0;
  std::vector<SplitEntry> split_map;
  DiscreteDistribution source;
  DiscreteDistribution source_prime;
};

// Log-ratio membership in {-eps, 0, +eps} is checked to 1e-9; mass
// identities to 1e-12.
inline constexpr double kAntipodalRatioTolerance = 1e-9;
inline constexpr double kAntipodalMassTolerance = 1e-12;

// Theorem: every eps-DP mechanism is (eps(e^eps - 1)/2, eps)-CDP.
CdpBound DpToCdp(double epsilon);

// The prior bound on expected privacy loss: eps(e^eps - 1).
double DrvKlBound(double epsilon);

// The tight bound: eps(e^eps - 1)/2. Equal to DpToCdp(eps).mu and to
// DrvKlBound(eps)/2 bit-for-bit.
double KlTightBound(double epsilon);

// Splits each outcome of (d, d_prime) into a maximally divergent part and an
// equal-mass remainder: with p_x = d_prime[x] and alpha solving
// d[x] = e^{alpha eps} p_x, the split keeps
//   m_prime[x] = p_x (e^{alpha eps} - 1) / (e^{sign(alpha) eps} - 1),
//   m[x] = e^{sign(alpha) eps} m_prime[x],
//   m[s_x] = m_prime[s_x] = p_x - m_prime[x].
// sign(0) = +1 (the alpha = 0 numerator vanishes either way). Zero-mass s_x
// atoms stay in the support, flagged in the split map. Identical inputs are
// returned unchanged with eps = 0.
AntipodalPair Antipodalize(const DiscreteDistribution& d,
                           const DiscreteDistribution& d_prime);

// True iff every AntipodalPair invariant holds at the stated tolerances:
// log ratios of positive-mass atoms in {-eps, 0, +eps}, m and m_prime equal
// on every s_x, and each original outcome's mass exactly split.
bool VerifyAntipodal(const AntipodalPair& pair);

// |KL(m||m_prime) - KL(m_prime||m)|; zero for antipodal pairs.
double KlSymmetryGap(const AntipodalPair& pair);

// Numerically maximizes KL(D||D') subject to symmetric max divergence eps
// over the antipodal two-sided family (exhaustive in effect: Antipodalize
// never decreases KL), reporting the gap to KlTightBound(eps). No tightness
// claim: the bound is not attained.
struct ExtremalSearchResult {
  double epsilon = 0;
  double kl_max_found = 0;
  double kl_bound = 0;
  double gap = 0;
  double achieving_positive_mass = 0;  // mass on the +eps atom
};
ExtremalSearchResult SearchExtremalKl(double epsilon);

}  // namespace cdp

#endif  // CDP_REDUCTION_H_
