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
//
// cdp_accountant: concentrated-differential-privacy accounting at the
// command line. JSON to stdout (machine-first); --pretty for a table.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "cdp/composition.h"
#include "cdp/group_privacy.h"
#include "cdp/ledger.h"
#include "cdp/mechanisms.h"
#include "cdp/reduction.h"
#include "cdp/serialization.h"
#include "cdp/verify.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSuiteFailure = 2;

struct OutputOptions {
  bool pretty = false;
  bool full_precision = false;
};

// Rounds every float in the tree to 9 significant digits unless
// --full-precision asked for shortest round-trip output.
json RoundForOutput(const json& j, const OutputOptions& opts) {
  if (opts.full_precision) return j;
  if (j.is_number_float()) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.9g", j.get<double>());
    return json(std::strtod(buffer, nullptr));
  }
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [key, value] : j.items()) {
      out[key] = RoundForOutput(value, opts);
    }
    return out;
  }
  if (j.is_array()) {
    json out = json::array();
    for (const json& value : j) out.push_back(RoundForOutput(value, opts));
    return out;
  }
  return j;
}

void RenderPretty(const json& j, const std::string& prefix) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object() || value.is_array()) {
        std::cout << prefix << key << ":\n";
        RenderPretty(value, prefix + "  ");
      } else {
        std::cout << prefix << key << ": " << value.dump() << "\n";
      }
    }
  } else if (j.is_array()) {
    int index = 0;
    for (const json& value : j) {
      if (value.is_object() || value.is_array()) {
        std::cout << prefix << "- [" << index << "]\n";
        RenderPretty(value, prefix + "  ");
      } else {
        std::cout << prefix << "- " << value.dump() << "\n";
      }
      ++index;
    }
  } else {
    std::cout << prefix << j.dump() << "\n";
  }
}

void EmitResult(const std::string& command, const json& inputs,
                const json& outputs, const std::vector<std::string>& warnings,
                const OutputOptions& opts) {
  json result{{"command", command},
              {"inputs", inputs},
              {"outputs", outputs},
              {"warnings", warnings}};
  result = RoundForOutput(result, opts);
  if (opts.pretty) {
    RenderPretty(result, "");
  } else {
    std::cout << result.dump() << "\n";
  }
}

// Parses "a,b" into two doubles.
std::pair<double, double> ParsePair(const std::string& text,
                                    const std::string& flag) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw CLI::ValidationError(flag, "expected two comma-separated numbers");
  }
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError(flag, "expected two comma-separated numbers");
  }
}

json SuiteReportToJson(const cdp::SuiteReport& report) {
  json checks = json::array();
  for (const cdp::CheckResult& check : report.checks) {
    json c{{"name", check.name},
           {"passed", check.passed},
           {"cases", check.cases}};
    if (!check.passed) c["counterexample"] = json::parse(check.counterexample);
    checks.push_back(std::move(c));
  }
  return json{{"suite", report.suite},
              {"seed", report.seed},
              {"trials", report.trials},
              {"passed", report.Passed()},
              {"checks", checks}};
}

}  // namespace

int main(int argc, char** argv) {
  // Reproducibility must be visible in the command line; a seed smuggled in
  // through the environment is rejected, not honored.
  if (std::getenv("CDP_ACCOUNTANT_SEED") != nullptr) {
    std::cerr << "CDP_ACCOUNTANT_SEED is not supported; pass --seed "
                 "explicitly\n";
    return kExitUsage;
  }

  CLI::App app{"Concentrated differential privacy accounting"};
  app.require_subcommand(1);
  OutputOptions opts;
  app.add_flag("--pretty", opts.pretty, "Human-readable table output");
  app.add_flag("--full-precision", opts.full_precision,
               "Shortest round-trip floats instead of 9 significant digits");

  // calibrate
  auto* calibrate = app.add_subcommand(
      "calibrate", "Noise scale for a Gaussian mechanism from a CDP or DP "
                   "target");
  std::string mechanism = "gaussian";
  double sensitivity = 0;
  std::string cdp_target, dp_target;
  calibrate->add_option("--mechanism", mechanism, "Mechanism kind")
      ->check(CLI::IsMember({"gaussian"}));
  calibrate->add_option("--sensitivity", sensitivity, "Query sensitivity")
      ->required();
  auto* cdp_opt =
      calibrate->add_option("--cdp", cdp_target, "Target bound as mu,tau");
  auto* dp_opt = calibrate->add_option("--dp", dp_target,
                                       "Target bound as epsilon,delta");
  cdp_opt->excludes(dp_opt);

  // convert
  auto* convert =
      app.add_subcommand("convert", "Pure-DP epsilon to a CDP (mu, tau) bound");
  double convert_epsilon = 0;
  bool search_extremal = false;
  convert->add_option("--epsilon", convert_epsilon, "Pure-DP epsilon")
      ->required();
  convert->add_flag("--search-extremal", search_extremal,
                    "Numerically maximize KL at this max divergence and "
                    "report the gap to the bound");

  // compose
  auto* compose = app.add_subcommand(
      "compose", "Compose a JSON array of {mu,tau} or {epsilon} entries");
  std::string compose_in;
  double compose_delta = 0;
  compose->add_option("--in", compose_in, "Path to bounds JSON")->required();
  auto* to_dp = compose->add_option(
      "--to-dp", compose_delta, "Also convert the total to (epsilon, delta)");

  // advanced
  auto* advanced = app.add_subcommand(
      "advanced", "Advanced composition of k (epsilon, delta') mechanisms");
  int adv_k = 1;
  double adv_epsilon = 0, adv_delta = 0, adv_delta_prime = 0;
  advanced->add_option("--k", adv_k, "Number of mechanisms")->required();
  advanced->add_option("--epsilon", adv_epsilon, "Per-mechanism epsilon")
      ->required();
  advanced->add_option("--delta", adv_delta, "Composition slack delta")
      ->required();
  advanced->add_option("--delta-prime", adv_delta_prime,
                       "Per-mechanism delta'");

  // group
  auto* group = app.add_subcommand("group", "Group-privacy bound");
  double group_mu = 0, group_tau = 0;
  int group_s = 1;
  int group_compose_k = 0;
  std::string group_method = "recursion";
  bool group_inflate = false;
  group->add_option("--mu", group_mu, "Input mu")->required();
  group->add_option("--tau", group_tau, "Input tau")->required();
  group->add_option("--s", group_s, "Group size")->required();
  group->add_option("--method", group_method, "recursion or closed-form")
      ->check(CLI::IsMember({"recursion", "closed-form"}));
  group->add_flag("--inflate", group_inflate,
                  "Raise tau to sqrt(2 mu) when mu > tau^2/2");
  group->add_option("--compose-k", group_compose_k,
                    "Also report both orders of composing k copies and "
                    "taking the group bound")
      ->check(CLI::PositiveNumber);

  // tail
  auto* tail =
      app.add_subcommand("tail", "Exceedance probability from a ledger file");
  std::string tail_ledger;
  double tail_threshold = 0;
  tail->add_option("--ledger", tail_ledger, "Ledger JSON path")->required();
  tail->add_option("--threshold", tail_threshold, "Loss threshold")
      ->required();

  // verify
  auto* verify = app.add_subcommand("verify", "Run a property suite");
  std::string verify_suite;
  std::uint64_t verify_seed = 20260810;
  std::int64_t verify_trials = 200;
  verify->add_option("--suite", verify_suite,
                     "reduction|composition|gaussian|group")
      ->required()
      ->check(CLI::IsMember({"reduction", "composition", "gaussian", "group"}));
  verify->add_option("--seed", verify_seed, "Generator seed");
  verify->add_option("--trials", verify_trials, "Cases per check");

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo privacy-loss samples for a Gaussian mechanism");
  double sim_sensitivity = 0, sim_sigma = 1;
  std::int64_t sim_n = 0;
  std::uint64_t sim_seed = 0;
  std::string sim_out;
  simulate->add_option("--sensitivity", sim_sensitivity, "Query sensitivity")
      ->required();
  simulate->add_option("--sigma", sim_sigma, "Noise standard deviation")
      ->required();
  simulate->add_option("--n", sim_n, "Sample count")->required();
  simulate->add_option("--seed", sim_seed, "Generator seed (required)")
      ->required();
  simulate->add_option("--out", sim_out, "CSV output path")->required();

  try {
    app.parse(argc, argv);

    std::vector<std::string> warnings;

    if (calibrate->parsed()) {
      json inputs{{"mechanism", mechanism}, {"sensitivity", sensitivity}};
      double sigma = 0;
      if (cdp_opt->count() > 0) {
        const auto [mu, tau] = ParsePair(cdp_target, "--cdp");
        inputs["target"] = json{{"mu", mu}, {"tau", tau}};
        sigma = cdp::CalibrateGaussianForCdp(sensitivity, {mu, tau});
      } else if (dp_opt->count() > 0) {
        const auto [eps, delta] = ParsePair(dp_target, "--dp");
        inputs["target"] = json{{"epsilon", eps}, {"delta", delta}};
        sigma = cdp::CalibrateGaussianForDp(sensitivity, {eps, delta});
      } else {
        std::cerr << "calibrate: pass one of --cdp mu,tau or --dp "
                     "epsilon,delta\n";
        return kExitUsage;
      }
      EmitResult("calibrate", inputs, json{{"sigma", sigma}}, warnings, opts);
      return kExitOk;
    }

    if (convert->parsed()) {
      const cdp::CdpBound bound = cdp::DpToCdp(convert_epsilon);
      json outputs{{"mu", bound.mu}, {"tau", bound.tau}};
      if (search_extremal) {
        const cdp::ExtremalSearchResult found =
            cdp::SearchExtremalKl(convert_epsilon);
        outputs["extremal_search"] =
            json{{"kl_max_found", found.kl_max_found},
                 {"kl_bound", found.kl_bound},
                 {"gap", found.gap},
                 {"achieving_positive_mass", found.achieving_positive_mass}};
        warnings.push_back(
            "extremal search reports the best KL found, not a tightness "
            "claim");
      }
      EmitResult("convert", json{{"epsilon", convert_epsilon}}, outputs,
                 warnings, opts);
      return kExitOk;
    }

    if (compose->parsed()) {
      std::ifstream in(compose_in);
      if (!in) {
        std::cerr << "cannot open bounds file '" << compose_in << "'\n";
        return kExitUsage;
      }
      json entries;
      in >> entries;
      if (!entries.is_array()) {
        std::cerr << "bounds file must hold a JSON array\n";
        return kExitUsage;
      }
      std::vector<cdp::CdpBound> bounds;
      for (const json& entry : entries) {
        if (entry.contains("epsilon")) {
          bounds.push_back(cdp::DpToCdp(entry.at("epsilon").get<double>()));
        } else {
          bounds.push_back(cdp::CdpBoundFromJson(entry));
        }
      }
      const cdp::CdpBound total = cdp::ComposeCdp(bounds);
      json outputs{{"composed", cdp::CdpBoundToJson(total)},
                   {"count", bounds.size()}};
      if (to_dp->count() > 0) {
        outputs["dp"] =
            cdp::DpBoundToJson(cdp::ToApproxDp(total, compose_delta));
      }
      EmitResult("compose",
                 json{{"in", compose_in},
                      {"to_dp_delta",
                       to_dp->count() > 0 ? json(compose_delta) : json()}},
                 outputs, warnings, opts);
      return kExitOk;
    }

    if (advanced->parsed()) {
      const cdp::DpBound bound = cdp::AdvancedComposition(
          adv_k, adv_epsilon, adv_delta_prime, adv_delta);
      EmitResult("advanced",
                 json{{"k", adv_k},
                      {"epsilon", adv_epsilon},
                      {"delta", adv_delta},
                      {"delta_prime", adv_delta_prime}},
                 cdp::DpBoundToJson(bound), warnings, opts);
      return kExitOk;
    }

    if (group->parsed()) {
      const cdp::CdpBound input{group_mu, group_tau};
      const auto run_group = [&](const cdp::CdpBound& bound) {
        return group_method == "closed-form"
                   ? cdp::GroupCdpClosedForm(bound, group_s, group_inflate)
                   : cdp::GroupCdpRecursion(bound, group_s, group_inflate);
      };
      const cdp::GroupBoundResult result = run_group(input);
      if (result.rounded_up) {
        warnings.push_back("group size rounded up to the next power of two: " +
                           std::to_string(result.s) + " -> " +
                           std::to_string(result.effective_s));
      }
      if (result.smallness_condition_violated) {
        warnings.push_back(
            "smallness condition tau*s*(log2 s)^3*34^3 <= 1/2 does not hold; "
            "the recursion bound is reported but the closed-form analysis "
            "does not apply");
      }
      if (result.inflated) {
        warnings.push_back("tau inflated to sqrt(2 mu) before iterating");
      }
      json outputs = cdp::GroupBoundResultToJson(result);
      if (group_compose_k > 0) {
        // Both orders of "group of size s" and "compose k copies"; whether
        // they agree is an open question, so both numbers are reported and
        // no equality is asserted.
        const int k = group_compose_k;
        const cdp::CdpBound grouped_then_composed = cdp::ComposeCdp(
            std::vector<cdp::CdpBound>(std::size_t(k), result.bound));
        const cdp::CdpBound composed = cdp::ComposeCdp(
            std::vector<cdp::CdpBound>(std::size_t(k), input));
        const cdp::CdpBound composed_then_grouped = run_group(composed).bound;
        outputs["order_comparison"] =
            json{{"k", k},
                 {"group_then_compose",
                  cdp::CdpBoundToJson(grouped_then_composed)},
                 {"compose_then_group",
                  cdp::CdpBoundToJson(composed_then_grouped)}};
        warnings.push_back(
            "order comparison reports both numbers; no equality is claimed");
      }
      EmitResult("group",
                 json{{"mu", group_mu},
                      {"tau", group_tau},
                      {"s", group_s},
                      {"method", group_method},
                      {"inflate", group_inflate},
                      {"compose_k", group_compose_k}},
                 outputs, warnings, opts);
      return kExitOk;
    }

    if (tail->parsed()) {
      const cdp::Ledger ledger = cdp::LoadLedgerFile(tail_ledger);
      const double probability =
          cdp::ExceedanceProbability(ledger, tail_threshold);
      EmitResult("tail",
                 json{{"ledger", tail_ledger}, {"threshold", tail_threshold}},
                 json{{"exceedance_probability", probability},
                      {"total", cdp::CdpBoundToJson(ledger.total())},
                      {"entries", ledger.entries().size()}},
                 warnings, opts);
      return kExitOk;
    }

    if (verify->parsed()) {
      const cdp::SuiteReport report =
          cdp::RunSuite(verify_suite, verify_seed, verify_trials);
      EmitResult("verify",
                 json{{"suite", verify_suite},
                      {"seed", verify_seed},
                      {"trials", verify_trials}},
                 SuiteReportToJson(report), warnings, opts);
      return report.Passed() ? kExitOk : kExitSuiteFailure;
    }

    if (simulate->parsed()) {
      const cdp::GaussianMechanismSpec spec{sim_sensitivity, sim_sigma};
      const std::vector<double> losses =
          cdp::SampleGaussianLoss(spec, sim_n, sim_seed);
      std::ofstream out(sim_out);
      if (!out) {
        std::cerr << "cannot write '" << sim_out << "'\n";
        return kExitUsage;
      }
      out << "loss\n";
      char line[40];
      double mean = 0, lo = losses.front(), hi = losses.front();
      for (double x : losses) {
        std::snprintf(line, sizeof(line), "%.17g\n", x);
        out << line;
        mean += x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      mean /= double(losses.size());
      double var = 0;
      for (double x : losses) var += (x - mean) * (x - mean);
      const double sd =
          losses.size() > 1 ? std::sqrt(var / double(losses.size() - 1)) : 0.0;
      const auto law = cdp::GaussianLossParams(spec);
      EmitResult("simulate",
                 json{{"mechanism", cdp::MechanismSpecToJson(spec)},
                      {"n", sim_n},
                      {"seed", sim_seed},
                      {"out", sim_out}},
                 json{{"generator", cdp::kGaussianSamplerName},
                      {"mean", mean},
                      {"stddev", sd},
                      {"min", lo},
                      {"max", hi},
                      {"loss_law", json{{"mean", law.mean}, {"std", law.std}}}},
                 warnings, opts);
      return kExitOk;
    }

    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
