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
#ifndef CDP_LEDGER_H_
#define CDP_LEDGER_H_

#include <optional>
#include <string>
#include <vector>

#include "cdp/mechanisms.h"

namespace cdp {

struct LedgerEntry {
  std::string label;
  CdpBound bound;
  std::optional<std::string> timestamp;  // ISO-8601; never affects totals
};

// An immutable record of mechanism invocations with a running CDP total.
// The total is recomputed from the entries on every construction; it is
// never trusted from serialized input.
class Ledger {
 public:
  Ledger() = default;
  explicit Ledger(std::vector<LedgerEntry> entries);

  // Returns a new ledger with the entry appended; *this is unmodified.
  Ledger Record(const std::string& label, const CdpBound& bound,
                std::optional<std::string> timestamp = std::nullopt) const;

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  const CdpBound& total() const { return total_; }

 private:
  std::vector<LedgerEntry> entries_;
  CdpBound total_;
};

// Subgaussian tail bound on the cumulative loss exceeding the threshold:
// exp(-t^2/2) with t = (threshold - mu)/tau. Vacuous (1) at or below the
// mean; for tau = 0 the loss equals its mean, so the result is 1 at or
// below mu and 0 above.
double ExceedanceProbability(const Ledger& ledger, double loss_threshold);

// Smallest (epsilon, delta)-DP bound implied by the tail bound: epsilon =
// mu + tau sqrt(2 ln(1/delta)).
DpBound ToApproxDp(const CdpBound& total, double delta);

}  // namespace cdp

#endif  // CDP_LEDGER_H_
