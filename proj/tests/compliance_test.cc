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

#include "unlearnaudit/compliance.h"

#include <sstream>

#include "gtest/gtest.h"
#include "unlearnaudit/games.h"

namespace unlearnaudit {
namespace {

InferenceAttackerFactory Exm(LossKind loss) {
  return
      [loss](uint64_t) -> absl::StatusOr<std::unique_ptr<InferenceAttacker>> {
        return MakeDelInfExm(loss);
      };
}

TEST(ProtocolTest, RoundTrip) {
  std::vector<ProtocolMessage> msgs = {
      ProtocolMessage::Add(
          {Instance::Dense({0.1, -2.5e-300, 3.0}), Label::Real(1.0 / 3.0)}),
      ProtocolMessage::Del(
          {Instance::BinaryUnchecked({0, 1, 1}), Label::Class(7)}),
      ProtocolMessage::Add(
          {Instance::Sentence({0, 5, 9, 1}), Label::SequenceProb(0.25)}),
      ProtocolMessage::Eval(Instance::Fragment({4, 5})),
      ProtocolMessage::Eval(Instance::Dense({})),
      ProtocolMessage::Ack(),
      ProtocolMessage::Refused(RefusalReason::kBudgetExhausted),
      ProtocolMessage::Predicted(Prediction::Distribution({0.2, 0.8})),
      ProtocolMessage::Predicted(Prediction::RealValue(-0.1)),
      ProtocolMessage::Predicted(Prediction::SequenceProb(1e-9)),
  };
  for (const auto& m : msgs) {
    const std::string line = EncodeMessage(m);
    auto back = DecodeMessage(line);
    ASSERT_TRUE(back.ok()) << line << ": " << back.status();
    EXPECT_TRUE(*back == m) << line;
    EXPECT_EQ(EncodeMessage(*back), line);
  }
}

TEST(ProtocolTest, CanonicalText) {
  EXPECT_EQ(EncodeMessage(ProtocolMessage::Add(
                {Instance::Dense({0.5, 2.0}), Label::Class(1)})),
            "UA1 ADD dense 2 0.5 2 class 1");
  EXPECT_EQ(EncodeMessage(ProtocolMessage::Refused(RefusalReason::kNotServing)),
            "UA1 REFUSED not_serving");
  EXPECT_EQ(EncodeMessage(ProtocolMessage::Eval(Instance::Sentence({0, 1}))),
            "UA1 EVAL sentence 2 0 1");
}

TEST(ProtocolTest, RejectsBadLines) {
  for (const char* line :
       {"", "UA2 ACK", "UA1 FOO", "UA1 ADD dense 2 0.5", "UA1 ACK extra",
        "UA1 EVAL binary 1 0.5", "UA1 EVAL dense x", "UA1 REFUSED nope",
        "UA1 PRED dist 3 0.5 0.5"}) {
    EXPECT_FALSE(DecodeMessage(line).ok()) << line;
  }
}

Dataset Points(int n) { return GenLinearRegression(n, 2, 0.3, 4); }

TEST(DatColTest, RefusesBeforeCollectionEnds) {
  const LearnerSpec spec = LearnerSpec::Ols();
  DatColState st = NewDatCol(3, 1);
  Dataset s = Points(3);
  auto r = DatColStep(st, ProtocolMessage::Eval(s[0].instance), spec, 1);
  EXPECT_EQ(r.kind, MessageKind::kRefused);
  EXPECT_EQ(r.reason, RefusalReason::kNotServing);
  r = DatColStep(st, ProtocolMessage::Del(s[0]), spec, 1);
  EXPECT_EQ(r.reason, RefusalReason::kNotServing);
  EXPECT_EQ(st.deletions_used, 0);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(st.phase, DatColPhase::kCollecting);
    EXPECT_EQ(DatColStep(st, ProtocolMessage::Add(s[i]), spec, 1).kind,
              MessageKind::kAck);
  }
  EXPECT_EQ(st.phase, DatColPhase::kServing);
  r = DatColStep(st, ProtocolMessage::Eval(s[0].instance), spec, 1);
  EXPECT_EQ(r.kind, MessageKind::kPrediction);
  r = DatColStep(st, ProtocolMessage::Add(s[0]), spec, 1);
  EXPECT_EQ(r.reason, RefusalReason::kCollectionClosed);
}

TEST(DatColTest, BudgetAndResponsesAsRequests) {
  const LearnerSpec spec = LearnerSpec::Ols();
  DatColState st = NewDatCol(4, 1);
  Dataset s = Points(4);
  for (int i = 0; i < 4; ++i)
    DatColStep(st, ProtocolMessage::Add(s[i]), spec, 1);
  EXPECT_EQ(DatColStep(st, ProtocolMessage::Del(s[0]), spec, 1).kind,
            MessageKind::kAck);
  EXPECT_EQ(st.phase, DatColPhase::kPostDeletion);
  auto r = DatColStep(st, ProtocolMessage::Del(s[1]), spec, 1);
  EXPECT_EQ(r.reason, RefusalReason::kBudgetExhausted);
  EXPECT_EQ(st.deletions_used, 1);
  EXPECT_EQ(st.stored.size(), 3u);
  r = DatColStep(st, ProtocolMessage::Ack(), spec, 1);
  EXPECT_EQ(r.reason, RefusalReason::kNotARequest);
  r = DatColStep(st, ProtocolMessage::Eval(Instance::Sentence({0, 1})), spec,
                 1);
  EXPECT_EQ(r.reason, RefusalReason::kKindMismatch);
}

TEST(DatColTest, DeleteMatchesFreshRetrain) {
  Dataset s = Points(20);
  for (const LearnerSpec& spec :
       {LearnerSpec::Ols(), LearnerSpec::DecisionTree(), LearnerSpec::Knn(3)}) {
    DatColState st = NewDatCol(20, 2);
    for (const auto& e : s.examples) {
      DatColStep(st, ProtocolMessage::Add(e), spec, 9);
    }
    DatColStep(st, ProtocolMessage::Del(s[6]), spec, 9);
    Dataset rest;
    for (size_t i = 0; i < s.size(); ++i) {
      if (i != 6) rest.examples.push_back(s[i]);
    }
    auto direct = Train(spec, rest, DatColTrainSeed(9, 1));
    ASSERT_TRUE(direct.ok());
    Dataset probes = GenLinearRegression(10, 2, 0.3, 77);
    for (const auto& e : probes.examples) {
      auto r = DatColStep(st, ProtocolMessage::Eval(e.instance), spec, 9);
      ASSERT_EQ(r.kind, MessageKind::kPrediction);
      EXPECT_NEAR(r.prediction.value, (*direct)->Predict(e.instance)->value,
                  1e-9);
    }
  }
}

TEST(DatColTest, DeleteByValueRemovesLowestCopy) {
  const LearnerSpec spec = LearnerSpec::Ols();
  Dataset s = Points(3);
  DatColState st = NewDatCol(4, 2);
  for (const Example& e : {s[0], s[1], s[0], s[2]}) {
    DatColStep(st, ProtocolMessage::Add(e), spec, 1);
  }
  DatColStep(st, ProtocolMessage::Del(s[0]), spec, 1);
  ASSERT_EQ(st.stored.size(), 3u);
  EXPECT_EQ(st.stored[0], s[1]);
  EXPECT_EQ(st.stored[1], s[0]);
  // Absent example: unchanged set, budget still consumed.
  Example absent = {Instance::Dense({9.0, 9.0}), Label::Real(0.0)};
  EXPECT_EQ(DatColStep(st, ProtocolMessage::Del(absent), spec, 1).kind,
            MessageKind::kAck);
  EXPECT_EQ(st.stored.size(), 3u);
  EXPECT_EQ(st.deletions_used, 2);
}

TEST(DatColTest, ServeStream) {
  auto c = MakeHonestCollector(LearnerSpec::Ols(), 2, 1, 3);
  std::istringstream in(
      "UA1 EVAL dense 1 0\n"
      "UA1 ADD dense 1 0 real 0\n"
      "UA1 ADD dense 1 1 real 2\n"
      "UA1 EVAL dense 1 0.5\n"
      "garbage\n");
  std::ostringstream out;
  ASSERT_TRUE(ServeStream(*c, in, out).ok());
  std::vector<std::string> lines;
  std::istringstream res(out.str());
  for (std::string l; std::getline(res, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "UA1 REFUSED not_serving");
  EXPECT_EQ(lines[1], "UA1 ACK");
  EXPECT_EQ(lines[3], "UA1 PRED real 1");
  EXPECT_EQ(lines[4].rfind("UA1 ERROR MalformedMessage", 0), 0u);
}

TEST(DatColTest, DocumentedSession) {
  auto c = MakeHonestCollector(LearnerSpec::Knn(1), 2, 1, 0);
  std::istringstream in(
      "UA1 ADD dense 1 0 real 1\n"
      "UA1 EVAL dense 1 0.5\n"
      "UA1 ADD dense 1 1 real 3\n"
      "UA1 EVAL dense 1 0.8\n"
      "UA1 DEL dense 1 1 real 3\n"
      "UA1 DEL dense 1 0 real 1\n"
      "UA1 ADD dense 1\n");
  std::ostringstream out;
  ASSERT_TRUE(ServeStream(*c, in, out).ok());
  EXPECT_EQ(out.str(),
            "UA1 ACK\n"
            "UA1 REFUSED not_serving\n"
            "UA1 ACK\n"
            "UA1 PRED real 3\n"
            "UA1 ACK\n"
            "UA1 REFUSED budget_exhausted\n"
            "UA1 ERROR MalformedMessage: bad length\n");
}

ComplianceConfig Blobs(int64_t sessions) {
  ComplianceConfig c;
  c.learner = LearnerSpec::DecisionTree();
  c.learner.num_classes = 3;
  c.capacity = 60;
  c.budget = 1;
  c.sessions = sessions;
  c.seed = 21;
  return c;
}

TEST(ComplianceTest, CoinEnvHasNoAdvantage) {
  ComplianceConfig c = Blobs(2000);
  auto s = RunCompliance(c, MakeCoinEnv());
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_EQ(s->world0, 1000);
  EXPECT_EQ(s->world1, 1000);
  EXPECT_LE(s->advantage, s->ci_width);
}

TEST(ComplianceTest, IgnoringCollectorHidesDeletion) {
  ComplianceConfig c = Blobs(400);
  c.collector = MakeIgnoringCollector;
  auto s = RunCompliance(c, MakeDiEnvAdapter(Exm(LossKind::kNegLogLikelihood),
                                             BlobsData(60, 4, 3, 0.8)));
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_LE(s->advantage, s->ci_width);
}

TEST(ComplianceTest, LeakyCollectorIsCaught) {
  ComplianceConfig c = Blobs(200);
  c.collector = MakeLeakyCollector;
  auto s = RunCompliance(c, MakeEchoReaderEnv(BlobsData(60, 4, 3, 0.8)));
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_DOUBLE_EQ(s->advantage, 1.0);
  for (const auto& r : s->rows) EXPECT_GE(r.trigger_step, 0);
}

TEST(ComplianceTest, AlwaysZeroAdapterHasNoAdvantage) {
  ComplianceConfig c = Blobs(200);
  auto s = RunCompliance(
      c,
      MakeDiEnvAdapter(
          [](uint64_t) -> absl::StatusOr<std::unique_ptr<InferenceAttacker>> {
            return MakeConstantGuess(0);
          },
          BlobsData(60, 4, 3, 0.8)));
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_DOUBLE_EQ(s->advantage, 0.0);
}

TEST(ComplianceTest, AdapterTracksInferenceSuccess) {
  const DatasetDistribution data = BlobsData(60, 4, 3, 0.8);
  ComplianceConfig c = Blobs(400);
  auto adv = RunCompliance(
      c, MakeDiEnvAdapter(Exm(LossKind::kNegLogLikelihood), data));
  ASSERT_TRUE(adv.ok()) << adv.status();
  InferenceGameConfig g;
  g.learner = LearnerSpec::DecisionTree();
  g.data = data;
  g.attacker = Exm(LossKind::kNegLogLikelihood);
  g.trials = 400;
  g.seed = 21;
  auto di = RunDeletionInference(g);
  ASSERT_TRUE(di.ok());
  const double eps = 2.0 * (di->estimate - 0.5);
  const double se = std::sqrt(adv->standard_error * adv->standard_error +
                              4.0 * di->standard_error * di->standard_error);
  EXPECT_GE(adv->signed_advantage, eps - 3.0 * se);
  EXPECT_LE(adv->signed_advantage, eps + 3.0 * se);
}

TEST(ComplianceTest, OwnDeletionsBeyondBudgetFail) {
  ComplianceConfig c = Blobs(2);
  Environment greedy = [](Session& s, uint64_t) -> absl::StatusOr<int> {
    auto r = s.Send(
        ProtocolMessage::Del({Instance::Dense({0, 0, 0, 0}), Label::Class(0)}));
    if (!r.ok()) return r.status();
    return 0;
  };
  auto s = RunCompliance(c, greedy);
  ASSERT_FALSE(s.ok());
  EXPECT_NE(s.status().message().find("BudgetViolation"), std::string::npos);
}

TEST(ComplianceTest, WorldSymmetry) {
  // Swapping the pair and flipping the guess leaves the advantage unchanged.
  const DatasetDistribution data = BlobsData(60, 4, 3, 0.8);
  ComplianceConfig c = Blobs(200);
  auto plain = RunCompliance(
      c, MakeDiEnvAdapter(Exm(LossKind::kNegLogLikelihood), data));
  InferenceAttackerFactory swapped =
      [](uint64_t) -> absl::StatusOr<std::unique_ptr<InferenceAttacker>> {
    class Swap : public InferenceAttacker {
     public:
      std::string name() const override { return "swap"; }
      absl::Status ObserveBefore(const Challenge& c, Oracle& before,
                                 Rng& rng) override {
        Challenge flipped{c.e1, c.e0};
        return inner_->ObserveBefore(flipped, before, rng);
      }
      absl::StatusOr<GuessBit> GuessAfter(Oracle& after, Rng& rng) override {
        auto g = inner_->GuessAfter(after, rng);
        if (!g.ok()) return g.status();
        return GuessBit{1 - g->value, g->tie_broken};
      }

     private:
      std::unique_ptr<InferenceAttacker> inner_ =
          MakeDelInfExm(LossKind::kNegLogLikelihood);
    };
    return std::make_unique<Swap>();
  };
  auto flipped = RunCompliance(c, MakeDiEnvAdapter(swapped, data));
  ASSERT_TRUE(plain.ok() && flipped.ok());
  EXPECT_NEAR(plain->advantage, flipped->advantage,
              plain->ci_width + flipped->ci_width);
}

TEST(ComplianceTest, RejectsBadConfig) {
  ComplianceConfig c = Blobs(10);
  c.budget = 0;
  EXPECT_FALSE(RunCompliance(c, MakeCoinEnv()).ok());
  c = Blobs(10);
  EXPECT_FALSE(RunCompliance(c, Environment()).ok());
  // Env data size must match n.
  auto s = RunCompliance(c, MakeDiEnvAdapter(Exm(LossKind::kNegLogLikelihood),
                                             BlobsData(50, 4, 3, 0.8)));
  EXPECT_FALSE(s.ok());
}

}  // namespace
}  // namespace unlearnaudit
