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

#include "unlearnaudit/games.h"

#include <cmath>

#include "gtest/gtest.h"

namespace unlearnaudit {
namespace {

InferenceAttackerFactory Exm(LossKind loss) {
  return
      [loss](uint64_t) -> absl::StatusOr<std::unique_ptr<InferenceAttacker>> {
        return MakeDelInfExm(loss);
      };
}

InferenceAttackerFactory AlwaysZero() {
  return [](uint64_t) -> absl::StatusOr<std::unique_ptr<InferenceAttacker>> {
    return MakeConstantGuess(0);
  };
}

// Keeps the before-oracle and queries it again after the switch.
class Lingering : public InferenceAttacker {
 public:
  std::string name() const override { return "lingering"; }
  absl::Status ObserveBefore(const Challenge& c, Oracle& before,
                             Rng&) override {
    before_ = &before;
    x_ = c.e0.instance;
    return before.Query(x_).status();
  }
  absl::StatusOr<GuessBit> GuessAfter(Oracle&, Rng&) override {
    auto p = before_->Query(x_);
    if (!p.ok()) return p.status();
    return GuessBit{0, false};
  }

 private:
  Oracle* before_ = nullptr;
  Instance x_;
};

InferenceGameConfig Small(InferenceAttackerFactory attacker) {
  InferenceGameConfig c;
  c.learner = LearnerSpec::Ols();
  c.data = LinearRegressionData(60, 3, 0.1);
  c.attacker = std::move(attacker);
  c.trials = 50;
  c.seed = 11;
  return c;
}

TEST(WilsonTest, ZeroOfOne) {
  auto [lo, hi] = WilsonInterval(0, 1);
  EXPECT_EQ(lo, 0.0);
  EXPECT_GT(hi, 0.5);
}

TEST(WilsonTest, HalfIsSymmetric) {
  auto [lo, hi] = WilsonInterval(50, 100);
  EXPECT_LT(lo, 0.5);
  EXPECT_GT(hi, 0.5);
  EXPECT_NEAR(0.5 - lo, hi - 0.5, 1e-12);
}

TEST(WilsonTest, NinetyFiveOfHundred) {
  auto [lo, hi] = WilsonInterval(95, 100);
  EXPECT_NEAR(lo, 0.887, 2e-3);
  EXPECT_NEAR(hi, 0.977, 2e-3);
  EXPECT_NEAR(lo, 0.8882495307680808, 1e-12);
  EXPECT_NEAR(hi, 0.9784563208456319, 1e-12);
}

TEST(MultisetF1Test, Examples) {
  std::vector<TokenId> abc = {2, 3, 4}, abd = {2, 3, 5}, aab = {2, 2, 3},
                       ab = {2, 3};
  EXPECT_DOUBLE_EQ(MultisetF1(abc, abc), 1.0);
  EXPECT_NEAR(MultisetF1(abc, abd), 4.0 / 6.0, 1e-12);
  EXPECT_NEAR(MultisetF1(aab, ab), 0.8, 1e-12);
  EXPECT_DOUBLE_EQ(MultisetF1({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(MultisetF1(ab, {}), 0.0);
}

TEST(InferenceGameTest, AlwaysZeroIsChance) {
  InferenceGameConfig c = Small(AlwaysZero());
  c.learner = LearnerSpec::Constant();
  c.trials = 2000;
  auto s = RunDeletionInference(c);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_LE(s->ci_low, 0.5);
  EXPECT_GE(s->ci_high, 0.5);
  EXPECT_LE(s->ci_low, s->estimate);
  EXPECT_LE(s->estimate, s->ci_high);
  // Two-sided binomial check on b at p = 0.01.
  EXPECT_LT(std::abs(s->ones - 1000), 2.576 * std::sqrt(500.0));
}

TEST(InferenceGameTest, OlsExmOnLinearData) {
  InferenceGameConfig c = Small(Exm(LossKind::kSquared));
  c.data = LinearRegressionData(450, 13, 0.1);
  c.trials = 200;
  auto s = RunDeletionInference(c);
  ASSERT_TRUE(s.ok()) << s.status();
  // Retained-example loss changes of the same order decide ~7% of trials.
  EXPECT_GE(s->estimate, 0.90);
  EXPECT_EQ(s->trials, 200);
  EXPECT_EQ(s->attacker, "del_inf_exm");
}

TEST(InferenceGameTest, OlsInsOnLinearData) {
  InferenceGameConfig c =
      Small([](uint64_t) -> absl::StatusOr<std::unique_ptr<InferenceAttacker>> {
        return MakeDelInfIns(MetricKind::kAbsDiff);
      });
  c.data = LinearRegressionData(450, 13, 0.1);
  c.trials = 200;
  auto s = RunDeletionInference(c);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_GE(s->estimate, 0.99);
}

TEST(InferenceGameTest, RegressionTreeExm) {
  InferenceGameConfig c = Small(Exm(LossKind::kSquared));
  c.learner = LearnerSpec::DecisionTree();
  c.trials = 100;
  auto s = RunDeletionInference(c);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_GE(s->estimate, 0.95);
}

TEST(InferenceGameTest, ReplayableAcrossWorkers) {
  InferenceGameConfig c = Small(Exm(LossKind::kSquared));
  auto one = RunDeletionInference(c);
  c.workers = 3;
  auto three = RunDeletionInference(c);
  ASSERT_TRUE(one.ok() && three.ok());
  EXPECT_EQ(one->wins, three->wins);
  ASSERT_EQ(one->rows.size(), three->rows.size());
  for (size_t r = 0; r < one->rows.size(); ++r) {
    EXPECT_EQ(one->rows[r].i, three->rows[r].i);
    EXPECT_EQ(one->rows[r].j, three->rows[r].j);
    EXPECT_EQ(one->rows[r].bit, three->rows[r].bit);
    EXPECT_EQ(one->rows[r].guess, three->rows[r].guess);
  }
}

TEST(InferenceGameTest, BeforeOracleClosesAfterSwitch) {
  InferenceGameConfig c =
      Small([](uint64_t) -> absl::StatusOr<std::unique_ptr<InferenceAttacker>> {
        return std::make_unique<Lingering>();
      });
  auto s = RunDeletionInference(c);
  ASSERT_FALSE(s.ok());
  EXPECT_TRUE(IsPhaseClosed(s.status())) << s.status();
}

TEST(InferenceGameTest, InstanceOnlyRejectsLabelAttacker) {
  InferenceGameConfig c = Small(Exm(LossKind::kSquared));
  c.variant.instance_only = true;
  auto s = RunDeletionInference(c);
  ASSERT_FALSE(s.ok());
  EXPECT_NE(s.status().message().find("ConfigInvalid"), std::string::npos);
  c.attacker =
      [](uint64_t) -> absl::StatusOr<std::unique_ptr<InferenceAttacker>> {
    return MakeDelInfIns(MetricKind::kAbsDiff);
  };
  EXPECT_TRUE(RunDeletionInference(c).ok());
}

TEST(InferenceGameTest, ExclusiveVariants) {
  InferenceGameConfig c = Small(AlwaysZero());
  c.variant.instance_only = true;
  c.variant.label_only = true;
  EXPECT_FALSE(RunDeletionInference(c).ok());
  c = Small(AlwaysZero());
  c.trials = 0;
  EXPECT_FALSE(RunDeletionInference(c).ok());
}

TEST(InferenceGameTest, BatchScoresAllPairs) {
  InferenceGameConfig c = Small(Exm(LossKind::kSquared));
  c.variant.batch_size = 3;
  c.trials = 10;
  auto s = RunDeletionInference(c);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_EQ(s->trials, 90);
  EXPECT_EQ(s->rows.size(), 90u);
}

TEST(InferenceGameTest, DeletionHidingRecordsCollisions) {
  InferenceGameConfig c = Small(AlwaysZero());
  c.learner = LearnerSpec::Constant();
  c.data = UniformKClasses(16, 2, 2);
  c.variant.deletion_hiding = true;
  c.trials = 100;
  auto s = RunDeletionInference(c);
  ASSERT_TRUE(s.ok()) << s.status();
  // 16 draws from {0,1}^2 always cover some point twice over 100 trials.
  EXPECT_GT(s->collisions, 0);
  for (const auto& r : s->rows) EXPECT_EQ(r.j, -1);
}

TEST(ReconstructionGameTest, ConstantLearnerIsBlind) {
  ReconstructionGameConfig c;
  c.learner = LearnerSpec::Constant();
  c.data = UniformSingletons(16, 20);
  c.metric = {MetricKind::kHamming, MetricScope::kInstance};
  c.trials = 200;
  c.seed = 3;
  c.attacker = [](uint64_t seed)
      -> absl::StatusOr<std::unique_ptr<ReconstructionAttacker>> {
    auto aux = GenUniformHypercube(500, 20, 0, seed);
    if (!aux.ok()) return aux.status();
    std::vector<Instance> xs;
    for (auto& e : aux->examples) xs.push_back(e.instance);
    return MakeDelInsRec(std::move(xs));
  };
  auto r = RunReconstruction(c);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_NEAR(r->expected_accuracy, 0.5, 0.05);
  EXPECT_EQ(r->distances.size(), 200u);
}

TEST(KnownInstanceTest, ZeroLambdaIsPlainPrediction) {
  KnownInstanceConfig c;
  c.learner = LearnerSpec::Ols();
  c.data = LinearRegressionData(40, 3, 0.5);
  c.lambda = 0.0;
  c.trials = 30;
  c.seed = 5;
  auto s = RunKnownInstance(c);
  ASSERT_TRUE(s.ok()) << s.status();
  // The deleted point fits worse after deletion, so min picks h(x).
  for (const auto& r : s->rows) {
    EXPECT_NEAR(r.attacker_distance, r.baseline_distance, 1e-9);
  }
}

TEST(KnownInstanceTest, NoiselessBothZero) {
  KnownInstanceConfig c;
  c.learner = LearnerSpec::Ols();
  c.data = LinearRegressionData(40, 3, 0.0);
  c.lambda = 1.0;
  c.trials = 20;
  auto s = RunKnownInstance(c);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_NEAR(s->mean_attacker, 0.0, 1e-8);
  EXPECT_NEAR(s->mean_baseline, 0.0, 1e-8);
}

}  // namespace
}  // namespace unlearnaudit
