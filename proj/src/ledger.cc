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
#include "cdp/ledger.h"

#include <cmath>
#include <stdexcept>

#include "cdp/composition.h"
#include "cdp/subgaussian.h"

namespace cdp {
namespace {

CdpBound TotalOf(const std::vector<LedgerEntry>& entries) {
  std::vector<CdpBound> bounds;
  bounds.reserve(entries.size());
  for (const LedgerEntry& entry : entries) bounds.push_back(entry.bound);
  return ComposeCdp(bounds);
}

}  // namespace

Ledger::Ledger(std::vector<LedgerEntry> entries)
    : entries_(std::move(entries)), total_(TotalOf(entries_)) {}

Ledger Ledger::Record(const std::string& label, const CdpBound& bound,
                      std::optional<std::string> timestamp) const {
  std::vector<LedgerEntry> extended = entries_;
  extended.push_back({label, bound, std::move(timestamp)});
  return Ledger(std::move(extended));
}

double ExceedanceProbability(const Ledger& ledger, double loss_threshold) {
  const CdpBound& total = ledger.total();
  if (loss_threshold <= total.mu) return 1.0;  // bound is vacuous here
  if (total.tau == 0) return 0.0;  // the loss equals its mean
  const double t = (loss_threshold - total.mu) / total.tau;
  return TailBound(total.tau, t);
}

DpBound ToApproxDp(const CdpBound& total, double delta) {
  if (!(delta > 0) || delta >= 1) {
    throw std::domain_error("delta must lie in (0, 1)");
  }
  if (!(total.mu >= 0) || !(total.tau >= 0)) {
    throw std::domain_error("cdp bound components must be >= 0");
  }
  return {total.mu + total.tau * std::sqrt(2.0 * std::log(1.0 / delta)),
          delta};
}

}  // namespace cdp
