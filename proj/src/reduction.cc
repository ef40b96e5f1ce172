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
#include "cdp/reduction.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace cdp {
namespace {

// Unique label for the split share of `original`.
std::string SplitLabel(const std::string& original,
                       const std::unordered_set<std::string>& taken) {
  std::string label = original + "#s";
  while (taken.count(label) > 0) label += "#s";
  return label;
}

double MassOf(const std::unordered_map<std::string, double>& index,
              const std::string& label) {
  const auto it = index.find(label);
  return it == index.end() ? 0.0 : it->second;
}

std::unordered_map<std::string, double> MassIndex(
    const DiscreteDistribution& d) {
  std::unordered_map<std::string, double> index;
  index.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    index.emplace(d.outcomes()[i], d.probs()[i]);
  }
  return index;
}

}  // namespace

CdpBound DpToCdp(double epsilon) {
  if (!(epsilon >= 0)) throw std::domain_error("epsilon must be >= 0");
  return {KlTightBound(epsilon), epsilon};
}

double DrvKlBound(double epsilon) {
  if (!(epsilon >= 0)) throw std::domain_error("epsilon must be >= 0");
  return epsilon * std::expm1(epsilon);
}

double KlTightBound(double epsilon) { return DrvKlBound(epsilon) / 2.0; }

AntipodalPair Antipodalize(const DiscreteDistribution& d,
                           const DiscreteDistribution& d_prime) {
  const double epsilon = SymmetricMaxDivergence(d, d_prime);
  if (epsilon == 0) {
    // Identical distributions: no split defined; return the inputs.
    return {d, d_prime, 0.0, {}, d, d_prime};
  }

  const auto dp_index = MassIndex(d_prime);
  std::unordered_set<std::string> taken(d.outcomes().begin(),
                                        d.outcomes().end());
  for (const std::string& label : d_prime.outcomes()) taken.insert(label);

  std::vector<std::string> originals;
  std::vector<double> m_orig, mp_orig;
  std::vector<SplitEntry> split_map;
  std::vector<double> split_mass;

  for (std::size_t i = 0; i < d.size(); ++i) {
    const std::string& x = d.outcomes()[i];
    const double dx = d.probs()[i];
    const double px = MassOf(dp_index, x);
    if (dx == 0 && px == 0) continue;  // no mass to split

    // alpha solves d[x] = e^{alpha eps} p_x; the support check in
    // SymmetricMaxDivergence already rejected one-sided atoms.
    double alpha = (std::log(dx) - std::log(px)) / epsilon;
    if (std::abs(alpha) > 1.0) {
      if (std::abs(alpha) > 1.0 + kAntipodalRatioTolerance) {
        throw std::logic_error("log ratio exceeds the max divergence");
      }
      alpha = std::clamp(alpha, -1.0, 1.0);
    }
    const double sign = alpha >= 0 ? 1.0 : -1.0;  // sign(0) = +1
    double mp_x, m_x, rest;
    if (std::abs(alpha) == 1.0) {
      // Already maximally divergent: the whole mass stays put.
      mp_x = px;
      m_x = dx;
      rest = 0.0;
    } else {
      const double share =
          std::expm1(alpha * epsilon) / std::expm1(sign * epsilon);
      mp_x = px * share;
      m_x = std::exp(sign * epsilon) * mp_x;
      rest = px * (1.0 - share);  // identical on both sides
    }

    SplitEntry entry;
    entry.original = x;
    entry.split = SplitLabel(x, taken);
    entry.split_mass_zero = rest == 0;
    taken.insert(entry.split);

    originals.push_back(x);
    m_orig.push_back(m_x);
    mp_orig.push_back(mp_x);
    split_map.push_back(std::move(entry));
    split_mass.push_back(rest);
  }

  std::vector<std::string> outcomes = originals;
  std::vector<double> m_probs = m_orig;
  std::vector<double> mp_probs = mp_orig;
  for (std::size_t i = 0; i < split_map.size(); ++i) {
    outcomes.push_back(split_map[i].split);
    m_probs.push_back(split_mass[i]);
    mp_probs.push_back(split_mass[i]);
  }

  return {DiscreteDistribution(outcomes, std::move(m_probs)),
          DiscreteDistribution(outcomes, std::move(mp_probs)),
          epsilon,
          std::move(split_map),
          d,
          d_prime};
}

bool VerifyAntipodal(const AntipodalPair& pair) {
  if (!(pair.epsilon >= 0)) return false;
  const auto m_index = MassIndex(pair.m);
  const auto mp_index = MassIndex(pair.m_prime);

  // Log ratios of positive-mass atoms lie in {-eps, 0, +eps}; zero-mass
  // atoms carry no ratio and are ignored.
  for (std::size_t i = 0; i < pair.m.size(); ++i) {
    const std::string& label = pair.m.outcomes()[i];
    const double a = pair.m.probs()[i];
    const double b = MassOf(mp_index, label);
    if ((a > 0) != (b > 0)) return false;
    if (a == 0) continue;
    const double ratio = std::log(a) - std::log(b);
    const double distance =
        std::min({std::abs(ratio - pair.epsilon), std::abs(ratio),
                  std::abs(ratio + pair.epsilon)});
    if (distance > kAntipodalRatioTolerance) return false;
  }

  if (pair.split_map.empty()) {
    // Degenerate form: the inputs passed through unchanged.
    for (std::size_t i = 0; i < pair.source.size(); ++i) {
      const std::string& label = pair.source.outcomes()[i];
      if (std::abs(pair.source.probs()[i] -
                   MassOf(m_index, label)) >
          kAntipodalMassTolerance) {
        return false;
      }
    }
    return true;
  }

  const auto src_index = MassIndex(pair.source);
  const auto srcp_index = MassIndex(pair.source_prime);
  for (const SplitEntry& entry : pair.split_map) {
    const double m_x = MassOf(m_index, entry.original);
    const double m_sx = MassOf(m_index, entry.split);
    const double mp_x = MassOf(mp_index, entry.original);
    const double mp_sx = MassOf(mp_index, entry.split);
    // The split share is identical on both sides, and mass is split within
    // an outcome, never moved across outcomes.
    if (std::abs(m_sx - mp_sx) > kAntipodalMassTolerance) return false;
    if (std::abs(m_x + m_sx - MassOf(src_index, entry.original)) >
        kAntipodalMassTolerance) {
      return false;
    }
    if (std::abs(mp_x + mp_sx -
                 MassOf(srcp_index, entry.original)) >
        kAntipodalMassTolerance) {
      return false;
    }
  }
  return true;
}

double KlSymmetryGap(const AntipodalPair& pair) {
  return std::abs(KlDivergence(pair.m, pair.m_prime) -
                  KlDivergence(pair.m_prime, pair.m));
}

ExtremalSearchResult SearchExtremalKl(double epsilon) {
  if (!(epsilon >= 0)) throw std::domain_error("epsilon must be >= 0");
  ExtremalSearchResult result;
  result.epsilon = epsilon;
  result.kl_bound = KlTightBound(epsilon);
  if (epsilon == 0) return result;

  // Antipodal pairs over {+eps, -eps, 0} atoms: M = (p, q, r) against
  // M' = (p e^-eps, q e^eps, r). Matching totals forces p = q e^eps, leaving
  // one free parameter q in [0, 1/(1+e^eps)]. Antipodalize never decreases
  // KL, so scanning this family is exhaustive in effect.
  const double q_max = 1.0 / (1.0 + std::exp(epsilon));
  const int kGridPoints = 20000;
  for (int i = 1; i <= kGridPoints; ++i) {
    const double q = q_max * double(i) / double(kGridPoints);
    const double p = q * std::exp(epsilon);
    double r = 1.0 - p - q;
    if (r < 0) {
      if (r < -1e-12) continue;  // infeasible, not rounding dust
      r = 0;
    }
    std::vector<std::string> outcomes = {"hi", "lo"};
    std::vector<double> m = {p, q};
    std::vector<double> mp = {p * std::exp(-epsilon), q * std::exp(epsilon)};
    if (r > 0) {
      outcomes.push_back("eq");
      m.push_back(r);
      mp.push_back(std::max(0.0, 1.0 - mp[0] - mp[1]));
    }
    const double kl = KlDivergence(DiscreteDistribution(outcomes, m),
                                   DiscreteDistribution(outcomes, mp));
    if (kl > result.kl_max_found) {
      result.kl_max_found = kl;
      result.achieving_positive_mass = p;
    }
  }
  result.gap = result.kl_bound - result.kl_max_found;
  return result;
}

}  // namespace cdp
