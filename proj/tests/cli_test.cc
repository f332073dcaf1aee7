// Copyright 2026 The Tabaudit Authors
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

#include "tabaudit/cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tabaudit {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tabaudit_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int Run(std::vector<std::string> args) {
    args.insert(args.begin(), "tabaudit");
    out_.str("");
    err_.str("");
    return RunCli(args, out_, err_);
  }

  std::string P(const std::string& name) const { return (dir_ / name).string(); }

  static std::string Slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void Fixture(const std::string& name, const std::string& n = "60") {
    ASSERT_EQ(Run({"fixtures", "--fixture", name, "--n", n, "--d", "4", "--seed",
                   "3", "--out-dir", dir_.string()}),
              kExitOk)
        << err_.str();
  }

  std::vector<std::string> AuditArgs(bool with_ref, const std::string& out) {
    std::vector<std::string> a = {"audit", "--train", P("train.csv"), "--holdout",
                                  P("holdout.csv"), "--synthetic", P("synthetic.csv"),
                                  "--seed", "42", "--out", out};
    if (with_ref) {
      a.push_back("--reference");
      a.push_back(P("reference.csv"));
    }
    return a;
  }

  fs::path dir_;
  std::stringstream out_, err_;
};

TEST_F(CliTest, FullAuditHasTwentyInstances) {
  Fixture("noisy-0.1", "120");
  ASSERT_EQ(Run(AuditArgs(true, P("r.json"))), kExitOk) << err_.str();
  const auto j = nlohmann::json::parse(Slurp(P("r.json")));
  EXPECT_EQ(j["instances"].size(), 20u);
  EXPECT_TRUE(j.contains("max_mia"));
  EXPECT_EQ(j["max_mia"]["auc"].size(), 2u);
}

TEST_F(CliTest, NoReferenceWarnsAndRunsFour) {
  Fixture("noisy-0.1");
  ASSERT_EQ(Run(AuditArgs(false, P("r.json"))), kExitOk);
  const auto j = nlohmann::json::parse(Slurp(P("r.json")));
  EXPECT_EQ(j["instances"].size(), 4u);
  EXPECT_NE(err_.str().find("warning: dropped calibrated attack family domias"),
            std::string::npos);
}

TEST_F(CliTest, MissingTrainExitsTwoWithoutReport) {
  Fixture("leaky");
  fs::remove(P("train.csv"));
  EXPECT_EQ(Run(AuditArgs(true, P("r.json"))), kExitValidation);
  EXPECT_FALSE(fs::exists(P("r.json")));
  EXPECT_EQ(Run({"audit", "--train", "x"}), kExitValidation);  // missing flags
}

TEST_F(CliTest, FailedInstanceExitsThreeButWritesReport) {
  Fixture("noisy-0.1", "20");
  auto args = AuditArgs(true, P("r.json"));
  args.push_back("--attacks");
  args.push_back("dcr,dpi:k=100000");
  EXPECT_EQ(Run(args), kExitAttackFailed);
  EXPECT_TRUE(fs::exists(P("r.json")));
  args.back() = "dpi:k=100000";
  fs::remove(P("r.json"));
  EXPECT_EQ(Run(args), kExitAttackFailed);
  EXPECT_FALSE(fs::exists(P("r.json")));
}

TEST_F(CliTest, SameFlagsSameBytes) {
  Fixture("noisy-0.2", "120");
  auto a = AuditArgs(true, P("a.json"));
  a.insert(a.end(), {"--jobs", "1", "--md", P("a.md")});
  auto b = AuditArgs(true, P("b.json"));
  b.insert(b.end(), {"--jobs", "8"});
  ASSERT_EQ(Run(a), kExitOk);
  ASSERT_EQ(Run(b), kExitOk);
  EXPECT_EQ(Slurp(P("a.json")), Slurp(P("b.json")));
  EXPECT_FALSE(Slurp(P("a.md")).empty());
}

TEST_F(CliTest, SplitSizes) {
  std::ofstream csv(P("data.csv"));
  csv << "a,b\n";
  for (int i = 0; i < 100; ++i) csv << i << "," << (i % 3 ? "x" : "y") << "\n";
  csv.close();
  ASSERT_EQ(Run({"split", "--input", P("data.csv"), "--out-dir", P("s"), "--seed", "1"}),
            kExitOk);
  EXPECT_EQ(out_.str(), "train=80 holdout=10 reference=10\n");
  ASSERT_EQ(Run({"split", "--input", P("data.csv"), "--out-dir", P("s"), "--seed",
                 "1", "--test-fraction", "0.5"}),
            kExitOk);
  EXPECT_EQ(out_.str(), "train=50 holdout=25 reference=25\n");
  EXPECT_TRUE(fs::exists(P("s/reference.csv")));

  std::ofstream tiny(P("tiny.csv"));
  tiny << "a\n1\n2\n3\n4\n";
  tiny.close();
  EXPECT_EQ(Run({"split", "--input", P("tiny.csv"), "--out-dir", P("t"), "--seed", "1"}),
            kExitValidation);
}

TEST_F(CliTest, ReportRenderCompareAndVersion) {
  Fixture("leaky");
  ASSERT_EQ(Run(AuditArgs(false, P("r.json"))), kExitOk);
  ASSERT_EQ(Run({"report", "--in", P("r.json"), "--format", "json"}), kExitOk);
  EXPECT_EQ(nlohmann::json::parse(out_.str()), nlohmann::json::parse(Slurp(P("r.json"))));
  ASSERT_EQ(Run({"report", "--in", P("r.json"), "--compare", P("r.json"),
                 "--format", "json"}),
            kExitOk);
  const auto cmp = nlohmann::json::parse(out_.str());
  for (const auto& [k, v] : cmp["max_mia"].items()) EXPECT_EQ(v["delta"], 0.0) << k;
  ASSERT_EQ(Run({"report", "--in", P("r.json")}), kExitOk);
  EXPECT_NE(out_.str().find("| dcr |"), std::string::npos);

  auto j = nlohmann::json::parse(Slurp(P("r.json")));
  j["version"] = "7";
  std::ofstream(P("bad.json")) << j.dump();
  EXPECT_EQ(Run({"report", "--in", P("bad.json")}), kExitValidation);
  EXPECT_NE(err_.str().find("version"), std::string::npos);
  std::ofstream(P("junk.json")) << "{not json";
  EXPECT_EQ(Run({"report", "--in", P("junk.json")}), kExitValidation);
}

TEST_F(CliTest, FixturesDeterministic) {
  Fixture("leaky", "200");
  const std::string first = Slurp(P("synthetic.csv"));
  Fixture("leaky", "200");
  EXPECT_EQ(Slurp(P("synthetic.csv")), first);
  EXPECT_TRUE(fs::exists(P("holdout.csv")));
  EXPECT_EQ(Run({"fixtures", "--fixture", "nope", "--seed", "1", "--out-dir", P("x")}),
            kExitValidation);
}

}  // namespace
}  // namespace tabaudit
