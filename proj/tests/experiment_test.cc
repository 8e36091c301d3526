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

#include "unlearnaudit/experiment.h"

#include <string>

#include "gtest/gtest.h"

namespace unlearnaudit {
namespace {

ExperimentConfig Make(std::initializer_list<const char*> sets) {
  ExperimentConfig c;
  for (const char* s : sets) {
    absl::Status st = c.Apply(s);
    EXPECT_TRUE(st.ok()) << st;
  }
  return c;
}

TEST(ExperimentTest, InferenceReport) {
  auto r = RunExperiment(
      Make({"game.trials=40", "learner.kind=ols", "data.kind=linear_regression",
            "data.n=60", "data.d=3", "game.assert_min=0.5"}));
  ASSERT_TRUE(r.ok()) << r.status();
  const auto& doc = r->document;
  EXPECT_EQ(doc["schema_version"], kReportSchemaVersion);
  EXPECT_EQ(doc["config"]["learner"]["kind"], "ols");
  EXPECT_EQ(doc["result"]["trials"], 40);
  EXPECT_EQ(doc["headline"]["metric"], "estimate");
  EXPECT_TRUE(r->assertions_passed);
  EXPECT_EQ(doc["assertions"].size(), 1u);
  EXPECT_EQ(r->table_csv.substr(0, r->table_csv.find('\n')),
            "trial,i,j,bit,guess,win,tie_broken,collision");
  EXPECT_EQ(std::count(r->table_csv.begin(), r->table_csv.end(), '\n'), 41);
}

TEST(ExperimentTest, SameSeedSameResult) {
  auto c = Make(
      {"game.trials=30", "learner.kind=knn", "data.n=30", "game.workers=2"});
  auto a = RunExperiment(c);
  ASSERT_TRUE(c.Apply("game.workers=1").ok());
  auto b = RunExperiment(c);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->document["result"].dump(), b->document["result"].dump());
  EXPECT_EQ(a->table_csv, b->table_csv);
  ASSERT_TRUE(c.Apply("game.seed=1").ok());
  auto d = RunExperiment(c);
  ASSERT_TRUE(d.ok());
  EXPECT_NE(a->table_csv, d->table_csv);
}

TEST(ExperimentTest, FailedAssertion) {
  auto r =
      RunExperiment(Make({"game.trials=20", "learner.kind=constant",
                          "attacker.kind=constant", "game.assert_min=0.99"}));
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_FALSE(r->assertions_passed);
  EXPECT_FALSE(r->document["assertions"][0]["passed"].get<bool>());
}

TEST(ExperimentTest, Reconstruction) {
  auto r = RunExperiment(Make(
      {"game.type=reconstruction", "game.trials=10", "learner.kind=knn",
       "learner.k=1", "data.kind=hypercube", "data.n=16", "data.d=12",
       "data.classes=0", "attacker.kind=del_ins_rec", "attacker.aux=500",
       "game.metric=hamming", "game.metric_scope=instance", "game.eps=1"}));
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->document["headline"]["metric"], "rho_at_eps");
  EXPECT_GT(r->document["result"]["rho_at_eps"].get<double>(), 0.8);
}

TEST(ExperimentTest, CorpusReconstruction) {
  auto r = RunExperiment(
      Make({"game.type=reconstruction", "game.trials=5", "learner.kind=ngram",
            "learner.order=2", "data.kind=corpus", "attacker.kind=ngram_rec"}));
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->document["headline"]["metric"], "mean_f1");
}

TEST(ExperimentTest, KnownInstance) {
  auto r = RunExperiment(
      Make({"game.type=known_instance", "game.trials=20", "learner.kind=ols",
            "data.kind=linear_regression", "data.n=50", "data.d=3",
            "attacker.kind=ins_rev_lbl_rec", "attacker.lambda=0"}));
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_NEAR(r->document["result"]["ratio"].get<double>(), 1.0, 1e-9);
}

TEST(ExperimentTest, Compliance) {
  auto r = RunExperiment(
      Make({"game.type=compliance", "game.trials=40", "data.n=20",
            "game.collector=leaky", "attacker.kind=echo_reader"}));
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->document["result"]["advantage"].get<double>(), 1.0);
  EXPECT_EQ(r->table_csv.substr(0, r->table_csv.find('\n')),
            "session,world,guess,trigger_step");
}

TEST(ExperimentTest, ConfigErrors) {
  for (const char* bad :
       {"game.type=poker", "learner.kind=svm", "data.kind=mnist",
        "attacker.kind=del_ins_rec", "game.trials=0", "attacker.loss=hinge"}) {
    auto r = RunExperiment(Make({bad}));
    ASSERT_FALSE(r.ok()) << bad;
    EXPECT_NE(r.status().message().find("ConfigInvalid"), std::string::npos)
        << bad << ": " << r.status();
  }
}

}  // namespace
}  // namespace unlearnaudit
