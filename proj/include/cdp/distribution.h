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
#ifndef CDP_DISTRIBUTION_H_
#define CDP_DISTRIBUTION_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdp {

// Tolerance used everywhere a probability vector must sum to one.
inline constexpr double kNormalizationTolerance = 1e-12;

// Tolerance for merging privacy-loss atoms with (numerically) equal loss.
inline constexpr double kAtomMergeTolerance = 1e-12;

// Thrown when a divergence is requested for a pair of distributions whose
// supports differ: the offending outcome has positive mass on one side and
// none on the other, so the log ratio is not defined.
class SupportMismatchError : public std::runtime_error {
 public:
  enum class Side { kLeft, kRight };

  SupportMismatchError(std::string outcome, Side zero_side);
  // Variant for the delta-approximate divergence: the mass the left
  // distribution puts outside the right support exceeds delta.
  SupportMismatchError(std::string outcome, Side zero_side, double excess_mass,
                       double delta);

  const std::string& outcome() const { return outcome_; }
  Side zero_side() const { return zero_side_; }

 private:
  std::string outcome_;
  Side zero_side_;
};

// A finite probability distribution over labeled outcomes. Values are
// immutable once constructed; all invariants (probabilities nonnegative,
// summing to one within kNormalizationTolerance, unique labels) are checked
// at construction and inputs outside tolerance are rejected rather than
// silently renormalized.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<std::string> outcomes,
                       std::vector<double> probs);

  static DiscreteDistribution Uniform(std::size_t n);

  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return outcomes_.size(); }

  // Probability of a labeled outcome; 0 if the label is absent.
  double ProbOf(const std::string& outcome) const;

 private:
  std::vector<std::string> outcomes_;
  std::vector<double> probs_;
};

struct LossAtom {
  double loss = 0;  // nats
  double prob = 0;
};

// The privacy loss random variable L_(P||Q): a finite list of
// (loss, probability) atoms. Atoms with equal loss are merged on
// construction; the mean of the atoms equals the KL divergence of the
// generating pair.
class PrivacyLossRV {
 public:
  explicit PrivacyLossRV(const std::vector<LossAtom>& atoms);

  const std::vector<LossAtom>& atoms() const { return atoms_; }
  double Mean() const;
  double Variance() const;
  // Same atoms with the mean subtracted from every loss.
  PrivacyLossRV Centered() const;

  // CSV dump with header `loss,prob`, one atom per line.
  std::string ToCsv() const;

 private:
  std::vector<LossAtom> atoms_;
};

// D_KL(p||q) = sum_x p[x] ln(p[x]/q[x]), in nats. Supports must be equal.
double KlDivergence(const DiscreteDistribution& p,
                    const DiscreteDistribution& q);

// D_inf(p||q) = max over outcomes of ln(p[x]/q[x]). The set maximum in the
// definition is attained on a single atom: ln(p(S)/q(S)) is the log of a
// mediant of the atom ratios, hence bounded by the largest of them.
double MaxDivergence(const DiscreteDistribution& p,
                     const DiscreteDistribution& q);

// max(D_inf(p||q), D_inf(q||p)); the epsilon of a mechanism pair.
double SymmetricMaxDivergence(const DiscreteDistribution& p,
                              const DiscreteDistribution& q);

struct ApproxMaxDivergenceResult {
  double value = 0;
  // True when the support exceeded kExactSubsetSearchLimit and the
  // ratio-greedy construction was used instead of exhaustive subset search.
  bool heuristic = false;
};

inline constexpr std::size_t kExactSubsetSearchLimit = 20;

// D_inf^delta(p||q) = max over subsets S with p(S) >= delta of
// ln(p(S)/q(S)). Exhaustive over all subsets for supports of size up to
// kExactSubsetSearchLimit, ratio-sorted greedy above. Supports need not be
// equal: the p-mass outside q's support must not exceed delta (equality
// accepted; the result is then +infinity on the offending subset).
ApproxMaxDivergenceResult ApproxMaxDivergence(const DiscreteDistribution& p,
                                              const DiscreteDistribution& q,
                                              double delta);

// Builds L_(p||q): one atom per outcome x with loss ln(p[x]/q[x]) and
// probability p[x]; equal-loss atoms merged. Supports must be equal.
PrivacyLossRV PrivacyLossRv(const DiscreteDistribution& p,
                            const DiscreteDistribution& q);

// ln E[e^{lambda X}] for X distributed as rv, evaluated in log space.
// Errors when a lambda * loss term leaves the double exponent range.
double LogMgf(const PrivacyLossRV& rv, double lambda);

// Numerical certificate for the subgaussian standard of a centered rv:
// sup over the grid of sqrt(2 ln E[e^{lambda X}] / lambda^2) with X the rv
// centered at its mean. A lower bound on the true standard, converging as
// the grid refines. The MGF is evaluated in log space; lambda values of 0
// are rejected, and a loss exponent beyond the double range is an error.
double EmpiricalSubgaussianStandard(const PrivacyLossRV& rv,
                                    const std::vector<double>& lambda_grid);

}  // namespace cdp

#endif  // CDP_DISTRIBUTION_H_
