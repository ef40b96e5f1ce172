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
#ifndef CDP_VERIFY_H_
#define CDP_VERIFY_H_

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cdp/distribution.h"

namespace cdp {

// One property check inside a suite. On failure `counterexample` holds a
// JSON dump of the offending inputs.
struct CheckResult {
  std::string name;
  bool passed = true;
  std::int64_t cases = 0;
  std::string counterexample;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  std::vector<CheckResult> checks;

  bool Passed() const;
};

// Dirichlet(1,...,1) pair over a shared support of size in
// [min_support, max_support], rejection-sampled to symmetric max divergence
// at most max_epsilon. Generator parameters are part of the report so test
// logs stay reproducible.
std::pair<DiscreteDistribution, DiscreteDistribution> RandomEqualSupportPair(
    std::mt19937_64& rng, int min_support, int max_support,
    double max_epsilon);

// Property suites behind the CLI `verify` subcommand. Deterministic given
// (seed, trials).
SuiteReport RunReductionSuite(std::uint64_t seed, std::int64_t trials);
SuiteReport RunCompositionSuite(std::uint64_t seed, std::int64_t trials);
SuiteReport RunGaussianSuite(std::uint64_t seed, std::int64_t trials);
SuiteReport RunGroupSuite(std::uint64_t seed, std::int64_t trials);

// Dispatch by name: reduction | composition | gaussian | group.
SuiteReport RunSuite(const std::string& name, std::uint64_t seed,
                     std::int64_t trials);

}  // namespace cdp

#endif  // CDP_VERIFY_H_
