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
#ifndef CDP_SERIALIZATION_H_
#define CDP_SERIALIZATION_H_

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "cdp/distribution.h"
#include "cdp/group_privacy.h"
#include "cdp/ledger.h"
#include "cdp/mechanisms.h"
#include "cdp/reduction.h"
#include "cdp/subgaussian.h"

namespace cdp {

// {"outcomes": [...], "probs": [...]}
nlohmann::json DistributionToJson(const DiscreteDistribution& d);
DiscreteDistribution DistributionFromJson(const nlohmann::json& j);

// {"mu": ..., "tau": ...}
nlohmann::json CdpBoundToJson(const CdpBound& b);
CdpBound CdpBoundFromJson(const nlohmann::json& j);

// {"epsilon": ..., "delta": ...}
nlohmann::json DpBoundToJson(const DpBound& b);

// {"kind": "gaussian", "sensitivity": ..., "sigma": ...}
nlohmann::json MechanismSpecToJson(const GaussianMechanismSpec& spec);
GaussianMechanismSpec MechanismSpecFromJson(const nlohmann::json& j);

nlohmann::json CertificateToJson(const SubgaussianCertificate& cert);

// Includes the split map and the source pair.
nlohmann::json AntipodalPairToJson(const AntipodalPair& pair);

// Includes the per-level steps table and all flags.
nlohmann::json GroupBoundResultToJson(const GroupBoundResult& result);

// {"entries": [{"label": ..., "mu": ..., "tau": ..., "timestamp"?: ...}]}.
// Totals are recomputed on load, never read from the file.
nlohmann::json LedgerToJson(const Ledger& ledger);
Ledger LedgerFromJson(const nlohmann::json& j);
Ledger LoadLedgerFile(const std::string& path);
void SaveLedgerFile(const Ledger& ledger, const std::string& path);

}  // namespace cdp

#endif  // CDP_SERIALIZATION_H_
