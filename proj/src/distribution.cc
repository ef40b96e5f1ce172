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
#include "cdp/distribution.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace cdp {
namespace {

// exp() saturates around |x| ~ 709.78; beyond that a lambda * loss term is
// outside the representable exponent range even in log space.
constexpr double kExponentGuard = 700.0;

std::string SideName(SupportMismatchError::Side side) {
  return side == SupportMismatchError::Side::kLeft ? "left" : "right";
}

// The common support of (p, q): outcomes with positive mass on either side,
// both-zero atoms dropped. Throws if any surviving outcome has mass on only
// one side. Order follows p's outcome list, then q's extras, so results are
// deterministic.
struct AlignedAtom {
  std::string label;
  double p = 0;
  double q = 0;
};

std::vector<AlignedAtom> AlignSupports(const DiscreteDistribution& p,
                                       const DiscreteDistribution& q) {
  std::unordered_map<std::string, double> q_mass;
  q_mass.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    q_mass.emplace(q.outcomes()[i], q.probs()[i]);
  }

  std::vector<AlignedAtom> atoms;
  atoms.reserve(p.size() + q.size());
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::string& label = p.outcomes()[i];
    const double pp = p.probs()[i];
    const auto it = q_mass.find(label);
    const double qq = it == q_mass.end() ? 0.0 : it->second;
    seen.insert(label);
    if (pp == 0 && qq == 0) continue;
    if (pp > 0 && qq == 0) {
      throw SupportMismatchError(label, SupportMismatchError::Side::kRight);
    }
    if (pp == 0 && qq > 0) {
      throw SupportMismatchError(label, SupportMismatchError::Side::kLeft);
    }
    atoms.push_back({label, pp, qq});
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    const std::string& label = q.outcomes()[i];
    if (seen.count(label) > 0) continue;
    if (q.probs()[i] > 0) {
      throw SupportMismatchError(label, SupportMismatchError::Side::kLeft);
    }
  }
  return atoms;
}

double LogSumExp(const std::vector<double>& terms) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double t : terms) hi = std::max(hi, t);
  if (!std::isfinite(hi)) return hi;
  double acc = 0;
  for (double t : terms) acc += std::exp(t - hi);
  return hi + std::log(acc);
}

// ln E[e^{lambda * X}] for the atoms, evaluated in log space. Throws when a
// lambda * loss term leaves the double exponent range.
double LogMgfOfAtoms(const std::vector<LossAtom>& atoms, double lambda) {
  std::vector<double> terms;
  terms.reserve(atoms.size());
  for (const LossAtom& atom : atoms) {
    const double exponent = lambda * atom.loss;
    if (!(std::abs(exponent) <= kExponentGuard)) {
      std::ostringstream msg;
      msg << "lambda * loss = " << exponent
          << " exceeds the exponent range (|x| <= " << kExponentGuard << ")";
      throw std::domain_error(msg.str());
    }
    terms.push_back(std::log(atom.prob) + exponent);
  }
  return LogSumExp(terms);
}

}  // namespace

SupportMismatchError::SupportMismatchError(std::string outcome, Side zero_side)
    : std::runtime_error("divergence not defined: outcome '" + outcome +
                         "' has zero mass on the " + SideName(zero_side) +
                         " side only"),
      outcome_(std::move(outcome)),
      zero_side_(zero_side) {}

SupportMismatchError::SupportMismatchError(std::string outcome, Side zero_side,
                                           double excess_mass, double delta)
    : std::runtime_error(
          "delta-approximate divergence not defined: mass " +
          std::to_string(excess_mass) + " outside the " +
          SideName(zero_side == Side::kLeft ? Side::kRight : Side::kLeft) +
          " support exceeds delta = " + std::to_string(delta) +
          " (first offending outcome '" + outcome + "')"),
      outcome_(std::move(outcome)),
      zero_side_(zero_side) {}

DiscreteDistribution::DiscreteDistribution(std::vector<std::string> outcomes,
                                           std::vector<double> probs)
    : outcomes_(std::move(outcomes)), probs_(std::move(probs)) {
  if (outcomes_.size() != probs_.size()) {
    throw std::invalid_argument("outcomes and probs must have equal length");
  }
  if (outcomes_.empty()) {
    throw std::invalid_argument("a distribution needs at least one outcome");
  }
  std::unordered_set<std::string> labels;
  labels.reserve(outcomes_.size());
  double total = 0;
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (!labels.insert(outcomes_[i]).second) {
      throw std::invalid_argument("duplicate outcome label '" + outcomes_[i] +
                                  "'");
    }
    if (!(probs_[i] >= 0) || !std::isfinite(probs_[i])) {
      throw std::invalid_argument("probability of '" + outcomes_[i] +
                                  "' is negative or not finite");
    }
    total += probs_[i];
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    std::ostringstream msg;
    msg << "probabilities sum to " << total << ", not 1 within "
        << kNormalizationTolerance << " (inputs are rejected, not "
        << "renormalized)";
    throw std::invalid_argument(msg.str());
  }
}

DiscreteDistribution DiscreteDistribution::Uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform distribution needs n >= 1");
  std::vector<std::string> outcomes(n);
  for (std::size_t i = 0; i < n; ++i) outcomes[i] = "o" + std::to_string(i);
  return DiscreteDistribution(std::move(outcomes),
                              std::vector<double>(n, 1.0 / double(n)));
}

double DiscreteDistribution::ProbOf(const std::string& outcome) const {
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (outcomes_[i] == outcome) return probs_[i];
  }
  return 0;
}

PrivacyLossRV::PrivacyLossRV(const std::vector<LossAtom>& atoms) {
  std::vector<LossAtom> live;
  live.reserve(atoms.size());
  double total = 0;
  for (const LossAtom& atom : atoms) {
    if (!std::isfinite(atom.loss)) {
      throw std::invalid_argument("loss atom value is not finite");
    }
    if (!(atom.prob >= 0) || !std::isfinite(atom.prob)) {
      throw std::invalid_argument("loss atom probability is negative");
    }
    total += atom.prob;
    if (atom.prob > 0) live.push_back(atom);
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw std::invalid_argument(
        "loss atom probabilities do not sum to 1 within tolerance");
  }
  std::sort(live.begin(), live.end(),
            [](const LossAtom& a, const LossAtom& b) { return a.loss < b.loss; });
  // Merge runs of numerically equal losses; the merged loss is the
  // probability-weighted mean so the rv's mean is preserved.
  for (const LossAtom& atom : live) {
    if (!atoms_.empty() &&
        atom.loss - atoms_.back().loss <= kAtomMergeTolerance) {
      LossAtom& last = atoms_.back();
      const double mass = last.prob + atom.prob;
      last.loss = (last.loss * last.prob + atom.loss * atom.prob) / mass;
      last.prob = mass;
    } else {
      atoms_.push_back(atom);
    }
  }
}

double PrivacyLossRV::Mean() const {
  double mean = 0;
  for (const LossAtom& atom : atoms_) mean += atom.prob * atom.loss;
  return mean;
}

double PrivacyLossRV::Variance() const {
  const double mean = Mean();
  double var = 0;
  for (const LossAtom& atom : atoms_) {
    var += atom.prob * (atom.loss - mean) * (atom.loss - mean);
  }
  return var;
}

PrivacyLossRV PrivacyLossRV::Centered() const {
  const double mean = Mean();
  std::vector<LossAtom> centered = atoms_;
  for (LossAtom& atom : centered) atom.loss -= mean;
  return PrivacyLossRV(std::move(centered));
}

std::string PrivacyLossRV::ToCsv() const {
  std::string out = "loss,prob\n";
  char line[80];
  for (const LossAtom& atom : atoms_) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g\n", atom.loss, atom.prob);
    out += line;
  }
  return out;
}

double KlDivergence(const DiscreteDistribution& p,
                    const DiscreteDistribution& q) {
  double kl = 0;
  for (const AlignedAtom& atom : AlignSupports(p, q)) {
    kl += atom.p * (std::log(atom.p) - std::log(atom.q));
  }
  return kl;
}

double MaxDivergence(const DiscreteDistribution& p,
                     const DiscreteDistribution& q) {
  double best = -std::numeric_limits<double>::infinity();
  for (const AlignedAtom& atom : AlignSupports(p, q)) {
    best = std::max(best, std::log(atom.p) - std::log(atom.q));
  }
  return best;
}

double SymmetricMaxDivergence(const DiscreteDistribution& p,
                              const DiscreteDistribution& q) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const AlignedAtom& atom : AlignSupports(p, q)) {
    const double r = std::log(atom.p) - std::log(atom.q);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return std::max(hi, -lo);
}

ApproxMaxDivergenceResult ApproxMaxDivergence(const DiscreteDistribution& p,
                                              const DiscreteDistribution& q,
                                              double delta) {
  if (!(delta >= 0) || delta >= 1) {
    throw std::invalid_argument("delta must lie in [0, 1)");
  }
  std::unordered_map<std::string, double> q_mass;
  q_mass.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    q_mass.emplace(q.outcomes()[i], q.probs()[i]);
  }
  // Atoms of p's support with their q masses (possibly zero).
  std::vector<AlignedAtom> atoms;
  double outside = 0;
  std::string worst_outside;
  double worst_outside_mass = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pp = p.probs()[i];
    if (pp == 0) continue;
    const auto it = q_mass.find(p.outcomes()[i]);
    const double qq = it == q_mass.end() ? 0.0 : it->second;
    if (qq == 0) {
      outside += pp;
      if (pp > worst_outside_mass) {
        worst_outside_mass = pp;
        worst_outside = p.outcomes()[i];
      }
    }
    atoms.push_back({p.outcomes()[i], pp, qq});
  }
  // Pr[Y outside Supp(Z)] > delta invalidates the divergence; exact equality
  // is accepted (the definition is silent there).
  if (outside > delta) {
    throw SupportMismatchError(worst_outside,
                               SupportMismatchError::Side::kRight, outside,
                               delta);
  }

  const std::size_t n = atoms.size();
  ApproxMaxDivergenceResult result;
  result.value = -std::numeric_limits<double>::infinity();

  if (n <= kExactSubsetSearchLimit) {
    // Exhaustive over all nonempty subsets. Per-mask sums come from the
    // next-lower mask, so each is a short addition chain with no drift.
    const std::size_t count = std::size_t{1} << n;
    std::vector<double> ps(count, 0.0), qs(count, 0.0);
    for (std::size_t mask = 1; mask < count; ++mask) {
      const int bit = __builtin_ctzll(mask);
      const std::size_t rest = mask & (mask - 1);
      ps[mask] = ps[rest] + atoms[std::size_t(bit)].p;
      qs[mask] = qs[rest] + atoms[std::size_t(bit)].q;
      if (ps[mask] >= delta) {
        result.value =
            std::max(result.value, std::log(ps[mask]) - std::log(qs[mask]));
      }
    }
  } else {
    // Ratio-greedy: atoms sorted by p/q descending; every qualifying prefix
    // is a candidate. A documented approximation above the exact limit.
    result.heuristic = true;
    std::sort(atoms.begin(), atoms.end(),
              [](const AlignedAtom& a, const AlignedAtom& b) {
                // q == 0 atoms have infinite ratio and sort first.
                if ((a.q == 0) != (b.q == 0)) return a.q == 0;
                return a.p * b.q > b.p * a.q;
              });
    double ps = 0, qs = 0;
    for (const AlignedAtom& atom : atoms) {
      ps += atom.p;
      qs += atom.q;
      if (ps >= delta) {
        result.value = std::max(result.value, std::log(ps) - std::log(qs));
      }
    }
  }
  if (result.value == -std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument(
        "no subset reaches mass delta; delta too large for this support");
  }
  return result;
}

PrivacyLossRV PrivacyLossRv(const DiscreteDistribution& p,
                            const DiscreteDistribution& q) {
  std::vector<LossAtom> atoms;
  for (const AlignedAtom& atom : AlignSupports(p, q)) {
    atoms.push_back({std::log(atom.p) - std::log(atom.q), atom.p});
  }
  return PrivacyLossRV(std::move(atoms));
}

double LogMgf(const PrivacyLossRV& rv, double lambda) {
  return LogMgfOfAtoms(rv.atoms(), lambda);
}

double EmpiricalSubgaussianStandard(const PrivacyLossRV& rv,
                                    const std::vector<double>& lambda_grid) {
  if (lambda_grid.empty()) {
    throw std::invalid_argument("lambda grid must be nonempty");
  }
  for (double lambda : lambda_grid) {
    if (lambda == 0) {
      throw std::invalid_argument("lambda grid must exclude 0");
    }
  }
  const std::vector<LossAtom> centered = rv.Centered().atoms();
  double best = 0;
  for (double lambda : lambda_grid) {
    // Centered rvs have ln MGF >= 0; clip rounding dust.
    const double log_mgf = std::max(0.0, LogMgfOfAtoms(centered, lambda));
    best = std::max(best, std::sqrt(2.0 * log_mgf / (lambda * lambda)));
  }
  return best;
}

}  // namespace cdp
