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
// Drives the cdp_accountant binary end to end. The binary path arrives in
// CDP_CLI_PATH (set by ctest).
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "gtest/gtest.h"

namespace {

using nlohmann::json;

struct CliResult {
  int exit_code = -1;
  std::string stdout_text;
};

std::string CliPath() {
  const char* path = std::getenv("CDP_CLI_PATH");
  EXPECT_NE(path, nullptr) << "CDP_CLI_PATH not set";
  return path == nullptr ? "" : path;
}

CliResult RunCli(const std::string& args, const std::string& env = "") {
  const std::string command =
      env + " '" + CliPath() + "' " + args + " 2>/dev/null";
  CliResult result;
  std::FILE* pipe = popen(command.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  if (pipe == nullptr) return result;
  char buffer[4096];
  std::size_t got;
  while ((got = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.stdout_text.append(buffer, got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

json OutputsOf(const CliResult& result) {
  const json root = json::parse(result.stdout_text);
  EXPECT_TRUE(root.contains("command"));
  EXPECT_TRUE(root.contains("inputs"));
  EXPECT_TRUE(root.contains("warnings"));
  return root.at("outputs");
}

std::string TempPath(const std::string& name) {
  return ::testing::TempDir() + "/" + name;
}

TEST(CliTest, ConvertMatchesDpToCdp) {
  const CliResult result = RunCli("convert --epsilon 1");
  ASSERT_EQ(result.exit_code, 0);
  const json outputs = OutputsOf(result);
  // Default output carries 9 significant digits.
  EXPECT_DOUBLE_EQ(outputs.at("mu").get<double>(), 0.859140914);
  EXPECT_DOUBLE_EQ(outputs.at("tau").get<double>(), 1.0);
}

TEST(CliTest, ConvertFullPrecision) {
  const CliResult result = RunCli("--full-precision convert --epsilon 1");
  ASSERT_EQ(result.exit_code, 0);
  EXPECT_DOUBLE_EQ(OutputsOf(result).at("mu").get<double>(),
                   0.8591409142295225);
}

TEST(CliTest, ConvertSearchExtremal) {
  const CliResult result = RunCli("convert --epsilon 1 --search-extremal");
  ASSERT_EQ(result.exit_code, 0);
  const json search = OutputsOf(result).at("extremal_search");
  EXPECT_NEAR(search.at("kl_max_found").get<double>(), 0.462117157, 1e-6);
  EXPECT_GT(search.at("gap").get<double>(), 0.39);
}

TEST(CliTest, AdvancedComposition) {
  const CliResult result =
      RunCli("advanced --k 100 --epsilon 0.1 --delta 1e-6");
  ASSERT_EQ(result.exit_code, 0);
  const json outputs = OutputsOf(result);
  EXPECT_NEAR(outputs.at("epsilon").get<double>(), 5.78237636, 1e-7);
  EXPECT_DOUBLE_EQ(outputs.at("delta").get<double>(), 1e-6);
}

TEST(CliTest, ComposeWithFileAndToDp) {
  const std::string path = TempPath("bounds.json");
  {
    std::ofstream out(path);
    out << R"([{"mu":0.5,"tau":1.0},{"epsilon":1.0}])";
  }
  const CliResult result =
      RunCli("compose --in '" + path + "' --to-dp 0.01");
  ASSERT_EQ(result.exit_code, 0);
  const json outputs = OutputsOf(result);
  EXPECT_NEAR(outputs.at("composed").at("mu").get<double>(), 1.359140914,
              1e-8);
  EXPECT_NEAR(outputs.at("composed").at("tau").get<double>(), 1.41421356,
              1e-8);
  EXPECT_GT(outputs.at("dp").at("epsilon").get<double>(), 0.0);
  std::remove(path.c_str());
}

TEST(CliTest, GroupRecursionWithWarnings) {
  const CliResult result =
      RunCli("group --mu 5e-13 --tau 1e-6 --s 5 --method recursion");
  ASSERT_EQ(result.exit_code, 0);
  const json root = json::parse(result.stdout_text);
  EXPECT_EQ(root.at("outputs").at("effective_s").get<int>(), 8);
  EXPECT_NEAR(root.at("outputs").at("bound").at("tau").get<double>(),
              8.6224303e-6, 1e-12);
  bool saw_roundup = false;
  for (const auto& warning : root.at("warnings")) {
    if (warning.get<std::string>().find("rounded up") != std::string::npos) {
      saw_roundup = true;
    }
  }
  EXPECT_TRUE(saw_roundup);
}

TEST(CliTest, GroupTrivialInput) {
  const CliResult result = RunCli("group --mu 0 --tau 0 --s 4");
  ASSERT_EQ(result.exit_code, 0);
  const json outputs = OutputsOf(result);
  EXPECT_EQ(outputs.at("bound").at("mu").get<double>(), 0.0);
  EXPECT_EQ(outputs.at("bound").at("tau").get<double>(), 0.0);
}

TEST(CliTest, GroupOrderComparisonReportsBothNumbers) {
  const CliResult result =
      RunCli("group --mu 5e-13 --tau 1e-6 --s 2 --compose-k 4");
  ASSERT_EQ(result.exit_code, 0);
  const json comparison = OutputsOf(result).at("order_comparison");
  const double a = comparison.at("group_then_compose").at("tau").get<double>();
  const double b = comparison.at("compose_then_group").at("tau").get<double>();
  EXPECT_GT(a, 0.0);
  EXPECT_GT(b, 0.0);
}

TEST(CliTest, GroupClosedFormMethod) {
  const CliResult result =
      RunCli("group --mu 5e-19 --tau 1e-9 --s 8 --method closed-form");
  ASSERT_EQ(result.exit_code, 0);
  const json outputs = OutputsOf(result);
  EXPECT_EQ(outputs.at("method").get<std::string>(), "closed-form");
  EXPECT_NEAR(outputs.at("bound").at("mu").get<double>(), 1.2515749e-11,
              1e-17);
  EXPECT_TRUE(outputs.at("steps").empty());
}

TEST(CliTest, TailFromLedgerFile) {
  const std::string path = TempPath("ledger.json");
  {
    json entries = json::array();
    for (int i = 0; i < 100; ++i) {
      entries.push_back(json{{"label", "q" + std::to_string(i)},
                             {"mu", 0.005},
                             {"tau", 0.1}});
    }
    std::ofstream out(path);
    out << json{{"entries", entries}}.dump();
  }
  const CliResult result =
      RunCli("tail --ledger '" + path + "' --threshold 2.5");
  ASSERT_EQ(result.exit_code, 0);
  const json outputs = OutputsOf(result);
  EXPECT_NEAR(outputs.at("exceedance_probability").get<double>(), 0.135335283,
              1e-8);
  EXPECT_NEAR(outputs.at("total").at("mu").get<double>(), 0.5, 1e-9);
  std::remove(path.c_str());
}

TEST(CliTest, CalibrateCdpAndDp) {
  const CliResult cdp_result =
      RunCli("calibrate --mechanism gaussian --sensitivity 1 --cdp 0.5,1");
  ASSERT_EQ(cdp_result.exit_code, 0);
  EXPECT_DOUBLE_EQ(OutputsOf(cdp_result).at("sigma").get<double>(), 1.0);

  const CliResult dp_result = RunCli(
      "calibrate --mechanism gaussian --sensitivity 1 --dp 1,0.36787944117");
  ASSERT_EQ(dp_result.exit_code, 0);
  EXPECT_NEAR(OutputsOf(dp_result).at("sigma").get<double>(), 1.41421356,
              1e-7);
}

TEST(CliTest, SimulateIsSeededAndWritesCsv) {
  const std::string path = TempPath("losses.csv");
  const std::string args = "simulate --sensitivity 1 --sigma 1 --n 1000 "
                           "--seed 7 --out '" + path + "'";
  const CliResult first = RunCli(args);
  ASSERT_EQ(first.exit_code, 0);
  const double mean1 = OutputsOf(first).at("mean").get<double>();
  EXPECT_EQ(OutputsOf(first).at("generator").get<std::string>(),
            "mt19937_64/normal_distribution");

  std::ifstream csv(path);
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "loss");
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  EXPECT_EQ(lines, 1000);

  const CliResult second = RunCli(args);
  EXPECT_DOUBLE_EQ(OutputsOf(second).at("mean").get<double>(), mean1);
  std::remove(path.c_str());
}

TEST(CliTest, SimulateRequiresSeed) {
  const CliResult result =
      RunCli("simulate --sensitivity 1 --sigma 1 --n 10 --out /tmp/x.csv");
  EXPECT_NE(result.exit_code, 0);
}

TEST(CliTest, VerifySuitePasses) {
  const CliResult result =
      RunCli("verify --suite reduction --seed 3 --trials 25");
  ASSERT_EQ(result.exit_code, 0);
  const json outputs = OutputsOf(result);
  EXPECT_TRUE(outputs.at("passed").get<bool>());
  EXPECT_GT(outputs.at("checks").size(), 3u);
}

TEST(CliTest, DomainErrorsExitOne) {
  EXPECT_EQ(RunCli("advanced --k 100 --epsilon 0.1 --delta 2").exit_code, 1);
  EXPECT_EQ(RunCli("group --mu 1 --tau 0.1 --s 2").exit_code, 1);
}

TEST(CliTest, EnvironmentSeedIsRejected) {
  const CliResult result =
      RunCli("convert --epsilon 1", "CDP_ACCOUNTANT_SEED=5");
  EXPECT_EQ(result.exit_code, 1);
}

TEST(CliTest, PrettyOutputIsHumanReadable) {
  const CliResult result = RunCli("--pretty convert --epsilon 1");
  ASSERT_EQ(result.exit_code, 0);
  EXPECT_NE(result.stdout_text.find("mu: 0.859140914"), std::string::npos);
}

TEST(CliTest, OutputJsonRoundTrips) {
  const CliResult result = RunCli("convert --epsilon 0.25");
  const json parsed = json::parse(result.stdout_text);
  EXPECT_EQ(json::parse(parsed.dump()), parsed);
}

}  // namespace
