//
// Copyright 2026 The unlearnaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result Cli(const std::string& args) {
  const std::string cmd =
      std::string(UNLEARNAUDIT_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("ua_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

const std::string kMinimal =
    std::string(UNLEARNAUDIT_SOURCE_DIR) + "/configs/minimal.ini";

TEST_F(CliTest, Version) {
  Result r = Cli("version");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("unlearnaudit"), std::string::npos);
}

TEST_F(CliTest, RunWritesReport) {
  Result r = Cli("run --config " + kMinimal + " --trials 20 --output " +
                 dir_.string());
  ASSERT_EQ(r.code, 0) << r.out;
  auto doc = nlohmann::json::parse(Slurp(dir_ / "report.json"));
  EXPECT_EQ(doc["config"]["game"]["trials"], "20");
  EXPECT_EQ(doc["seed"], 1);
  EXPECT_EQ(doc["result"]["trials"], 20);
  EXPECT_EQ(nlohmann::json::parse(r.out)["result"], doc["result"]);
}

TEST_F(CliTest, SameSeedByteIdenticalResult) {
  Result a = Cli("run --config " + kMinimal +
                 " --trials 30 --format "
                 "flat-table --output " +
                 dir_.string() + "/a");
  Result b = Cli("run --config " + kMinimal +
                 " --trials 30 --format "
                 "flat-table --output " +
                 dir_.string() + "/b");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto ra = nlohmann::json::parse(Slurp(dir_ / "a/report.json"));
  auto rb = nlohmann::json::parse(Slurp(dir_ / "b/report.json"));
  EXPECT_EQ(ra["result"].dump(), rb["result"].dump());
  EXPECT_EQ(Slurp(dir_ / "a/table.csv"), a.out);
}

TEST_F(CliTest, ReportIsRerunnable) {
  ASSERT_EQ(Cli("run --config " + kMinimal + " --trials 25 --output " +
                dir_.string() + "/a")
                .code,
            0);
  auto doc = nlohmann::json::parse(Slurp(dir_ / "a/report.json"));
  std::ofstream(dir_ / "embedded.ini") << doc["config_ini"].get<std::string>();
  ASSERT_EQ(Cli("run --config " + (dir_ / "embedded.ini").string() +
                " --output " + dir_.string() + "/b")
                .code,
            0);
  auto again = nlohmann::json::parse(Slurp(dir_ / "b/report.json"));
  EXPECT_EQ(doc["result"].dump(), again["result"].dump());
}

TEST_F(CliTest, UnknownKeyExitsTwo) {
  std::filesystem::create_directories(dir_);
  std::ofstream(dir_ / "bad.ini") << "[learner]\nlerner = ols\n";
  Result r = Cli("run --config " + (dir_ / "bad.ini").string());
  EXPECT_EQ(r.code, 2);
  Result s = Cli("run --set learner.lerner=ols --output " + dir_.string());
  EXPECT_EQ(s.code, 2);
}

TEST_F(CliTest, MissingConfigExitsTwo) {
  EXPECT_EQ(Cli("run --config /nonexistent.ini").code, 2);
}

TEST_F(CliTest, FailedAssertionExitsOne) {
  Result r =
      Cli("run --config " + kMinimal +
          " --trials 20 --set game.assert_min=1.01 --output " + dir_.string());
  EXPECT_EQ(r.code, 1);
  auto doc = nlohmann::json::parse(Slurp(dir_ / "report.json"));
  EXPECT_FALSE(doc["assertions_passed"].get<bool>());
}

TEST_F(CliTest, OutputDirFromEnvironment) {
  Result r = Cli("version");
  ASSERT_EQ(r.code, 0);
  const std::string cmd = "UNLEARNAUDIT_OUTPUT_DIR=" + dir_.string() + " " +
                          UNLEARNAUDIT_CLI + " run --config " + kMinimal +
                          " --trials 5 >/dev/null 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "report.json"));
}

TEST_F(CliTest, Presets) {
  Result list = Cli("list-presets");
  EXPECT_EQ(list.code, 0);
  for (const char* name : {"table2", "table3", "table4", "table5", "table6",
                           "lemma34", "lemma44", "thm42", "thm52"}) {
    EXPECT_NE(list.out.find(name), std::string::npos) << name;
  }
  EXPECT_EQ(Cli("reproduce nosuch --output " + dir_.string()).code, 2);
  Result lemma = Cli("reproduce lemma44 --output " + dir_.string());
  EXPECT_EQ(lemma.code, 0);
  EXPECT_EQ(lemma.out.rfind("PASS [ 4]", 0), 0u) << lemma.out;
  EXPECT_TRUE(std::filesystem::exists(dir_ / "reproduce-lemma44.json"));
}

TEST_F(CliTest, BadFlagsExitTwo) {
  EXPECT_EQ(Cli("run --format xml").code, 2);
  EXPECT_EQ(Cli("frobnicate").code, 2);
}

}  // namespace
