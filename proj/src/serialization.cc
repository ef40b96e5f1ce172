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
#include "cdp/serialization.h"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cdp {

using nlohmann::json;

json DistributionToJson(const DiscreteDistribution& d) {
  return json{{"outcomes", d.outcomes()}, {"probs", d.probs()}};
}

DiscreteDistribution DistributionFromJson(const json& j) {
  return DiscreteDistribution(j.at("outcomes").get<std::vector<std::string>>(),
                              j.at("probs").get<std::vector<double>>());
}

json CdpBoundToJson(const CdpBound& b) {
  return json{{"mu", b.mu}, {"tau", b.tau}};
}

CdpBound CdpBoundFromJson(const json& j) {
  return {j.at("mu").get<double>(), j.at("tau").get<double>()};
}

json DpBoundToJson(const DpBound& b) {
  return json{{"epsilon", b.epsilon}, {"delta", b.delta}};
}

json MechanismSpecToJson(const GaussianMechanismSpec& spec) {
  return json{{"kind", "gaussian"},
              {"sensitivity", spec.sensitivity},
              {"sigma", spec.sigma}};
}

GaussianMechanismSpec MechanismSpecFromJson(const json& j) {
  if (j.value("kind", "gaussian") != "gaussian") {
    throw std::invalid_argument("unsupported mechanism kind '" +
                                j.at("kind").get<std::string>() + "'");
  }
  return {j.at("sensitivity").get<double>(), j.at("sigma").get<double>()};
}

json CertificateToJson(const SubgaussianCertificate& cert) {
  return json{{"tau", cert.tau},
              {"lambda_grid", cert.lambda_grid},
              {"max_violation", cert.max_violation},
              {"passes", cert.Passes()}};
}

json AntipodalPairToJson(const AntipodalPair& pair) {
  json split = json::array();
  for (const SplitEntry& entry : pair.split_map) {
    split.push_back(json{{"original", entry.original},
                         {"split", entry.split},
                         {"split_mass_zero", entry.split_mass_zero}});
  }
  return json{{"epsilon", pair.epsilon},
              {"m", DistributionToJson(pair.m)},
              {"m_prime", DistributionToJson(pair.m_prime)},
              {"split_map", split},
              {"source", DistributionToJson(pair.source)},
              {"source_prime", DistributionToJson(pair.source_prime)}};
}

json GroupBoundResultToJson(const GroupBoundResult& result) {
  json steps = json::array();
  for (const CdpBound& step : result.steps) steps.push_back(CdpBoundToJson(step));
  json out{{"s", result.s},
           {"effective_s", result.effective_s},
           {"method", GroupMethodName(result.method)},
           {"bound", CdpBoundToJson(result.bound)},
           {"steps", steps},
           {"rounded_up", result.rounded_up},
           {"smallness_condition_violated",
            result.smallness_condition_violated},
           {"inflated", result.inflated}};
  if (result.inflated) out["original_tau"] = result.original_tau;
  return out;
}

json LedgerToJson(const Ledger& ledger) {
  json entries = json::array();
  for (const LedgerEntry& entry : ledger.entries()) {
    json e{{"label", entry.label},
           {"mu", entry.bound.mu},
           {"tau", entry.bound.tau}};
    if (entry.timestamp.has_value()) e["timestamp"] = *entry.timestamp;
    entries.push_back(std::move(e));
  }
  return json{{"entries", entries}};
}

Ledger LedgerFromJson(const json& j) {
  std::vector<LedgerEntry> entries;
  for (const json& e : j.at("entries")) {
    LedgerEntry entry;
    entry.label = e.value("label", "");
    entry.bound = {e.at("mu").get<double>(), e.at("tau").get<double>()};
    if (e.contains("timestamp")) {
      entry.timestamp = e.at("timestamp").get<std::string>();
    }
    entries.push_back(std::move(entry));
  }
  // The Ledger constructor recomputes the total; nothing from the file is
  // trusted beyond the entries themselves.
  return Ledger(std::move(entries));
}

Ledger LoadLedgerFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ledger file '" + path + "'");
  json j;
  in >> j;
  return LedgerFromJson(j);
}

void SaveLedgerFile(const Ledger& ledger, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ledger file '" + path + "'");
  out << LedgerToJson(ledger).dump(2) << "\n";
}

}  // namespace cdp
