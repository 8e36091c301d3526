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

#include "unlearnaudit/attacks.h"

#include <cmath>
#include <map>
#include <memory>

#include "absl/strings/str_join.h"
#include "gtest/gtest.h"
#include "unlearnaudit/data.h"
#include "unlearnaudit/unlearning.h"

namespace unlearnaudit {
namespace {

// Answers from a lookup table keyed by the instance's first coordinate.
class TableModel : public Model {
 public:
  explicit TableModel(std::map<double, Prediction> table,
                      Prediction fallback = Prediction::Distribution({1, 0}))
      : table_(std::move(table)), fallback_(std::move(fallback)) {}
  InstanceKind instance_kind() const override { return InstanceKind::kDense; }
  absl::StatusOr<Prediction> Predict(const Instance& x) const override {
    auto it = table_.find(x.coords()[0]);
    return it == table_.end() ? fallback_ : it->second;
  }
  std::string Describe() const override { return "table"; }

 private:
  std::map<double, Prediction> table_;
  Prediction fallback_;
};

ModelPtr Table(std::map<double, Prediction> t) {
  return std::make_shared<TableModel>(std::move(t));
}

Example RealExample(double x, double y) {
  return {Instance::Dense({x}), Label::Real(y)};
}

Dataset Sentences(const Dictionary& dict,
                  const std::vector<std::string>& lines) {
  Dataset d;
  for (const auto& line : lines) {
    d.examples.push_back(
        {Instance::Sentence(dict.Encode(line)), Label::SequenceProb(1.0)});
  }
  return d;
}

TEST(DelInfExmTest, LossIncreaseSign) {
  // Squared loss against label 0: prediction sqrt(l) gives loss l.
  auto before = Table({{0.0, Prediction::RealValue(std::sqrt(0.1))},
                       {1.0, Prediction::RealValue(std::sqrt(0.2))}});
  auto after = Table({{0.0, Prediction::RealValue(std::sqrt(0.9))},
                      {1.0, Prediction::RealValue(std::sqrt(0.1))}});
  Oracle h(before), hd(after, Phase::kAfterDeletion);
  Rng rng(1);
  auto g = DelInfExm(RealExample(0, 0), RealExample(1, 0), h, hd,
                     LossKind::kSquared, rng);
  ASSERT_TRUE(g.ok());
  EXPECT_EQ(g->value, 0);
  EXPECT_FALSE(g->tie_broken);
  EXPECT_EQ(h.query_count(), 2);
  EXPECT_EQ(hd.query_count(), 2);
}

TEST(DelInfExmTest, IdenticalChallengesTie) {
  auto m = Table({{0.0, Prediction::RealValue(1.0)}});
  Oracle h(m), hd(m, Phase::kAfterDeletion);
  Rng rng(2);
  auto g = DelInfExm(RealExample(0, 0), RealExample(0, 0), h, hd,
                     LossKind::kSquared, rng);
  EXPECT_TRUE(g->tie_broken);
}

TEST(DelInfExmTest, ScaleInvariant) {
  auto before = Table(
      {{0.0, Prediction::RealValue(0.3)}, {1.0, Prediction::RealValue(0.2)}});
  auto after = Table(
      {{0.0, Prediction::RealValue(0.5)}, {1.0, Prediction::RealValue(0.9)}});
  for (double scale : {1.0, 10.0}) {
    Oracle h(before), hd(after, Phase::kAfterDeletion);
    Rng rng(3);
    auto g = DelInfExm(RealExample(0, 0), RealExample(1, 0), h, hd,
                       LossKind::kSquared, rng);
    EXPECT_EQ(g->value, 1) << scale;
  }
}

TEST(DelInfExmTest, TreeDeletion) {
  Dataset d;
  for (int i = 0; i < 6; ++i) {
    d.examples.push_back(
        {Instance::Dense({static_cast<double>(i)}), Label::Class(i % 2)});
  }
  auto h = Train(LearnerSpec::DecisionTree(), d, 0);
  auto del = DeleteExamples(LearnerSpec::DecisionTree(), d, {{2}}, 0);
  Oracle before(*h), after(del->model, Phase::kAfterDeletion);
  Rng rng(4);
  auto g = DelInfExm(d[2], d[4], before, after, LossKind::kZeroOne, rng);
  EXPECT_EQ(g->value, 0);
  EXPECT_FALSE(g->tie_broken);
}

TEST(DelInfInsTest, AbsDiff) {
  auto before = Table(
      {{0.0, Prediction::RealValue(1.0)}, {1.0, Prediction::RealValue(2.0)}});
  auto after = Table(
      {{0.0, Prediction::RealValue(3.0)}, {1.0, Prediction::RealValue(2.1)}});
  Oracle h(before), hd(after, Phase::kAfterDeletion);
  Rng rng(5);
  auto g = DelInfIns(Instance::Dense({0}), Instance::Dense({1}), h, hd,
                     MetricKind::kAbsDiff, rng);
  EXPECT_EQ(g->value, 0);
}

TEST(DelInfInsTest, UnchangedTies) {
  auto m = Table(
      {{0.0, Prediction::RealValue(1.0)}, {1.0, Prediction::RealValue(4.0)}});
  Oracle h(m), hd(m, Phase::kAfterDeletion);
  Rng rng(6);
  auto g = DelInfIns(Instance::Dense({0}), Instance::Dense({1}), h, hd,
                     MetricKind::kAbsDiff, rng);
  EXPECT_TRUE(g->tie_broken);
}

TEST(DelInfInsTest, L1Confidence) {
  auto before = Table({{0.0, Prediction::Distribution({0.9, 0.1})},
                       {1.0, Prediction::Distribution({0.5, 0.5})}});
  auto after = Table({{0.0, Prediction::Distribution({0.4, 0.6})},
                      {1.0, Prediction::Distribution({0.5, 0.5})}});
  auto d = PredictionDistance(MetricKind::kL1Confidence,
                              Prediction::Distribution({0.9, 0.1}),
                              Prediction::Distribution({0.4, 0.6}));
  EXPECT_NEAR(*d, 1.0, 1e-12);
  Oracle h(before), hd(after, Phase::kAfterDeletion);
  Rng rng(7);
  auto g = DelInfIns(Instance::Dense({0}), Instance::Dense({1}), h, hd,
                     MetricKind::kL1Confidence, rng);
  EXPECT_EQ(g->value, 0);
}

TEST(CoinTest, TiesAreFair) {
  int zeros = 0;
  for (int i = 0; i < 10000; ++i) {
    Rng rng(DeriveSeed(99, i, "coin"));
    zeros += DecideBySign(0.0, rng).value == 0;
  }
  EXPECT_NEAR(zeros / 10000.0, 0.5, 0.02);
}

TEST(MiThresholdTest, LossAgainstTau) {
  Dataset d;
  for (int i = 0; i < 6; ++i) {
    d.examples.push_back(
        {Instance::Dense({static_cast<double>(i)}), Label::Class(i % 2)});
  }
  auto tree = Train(LearnerSpec::DecisionTree(), d, 0);
  Oracle o(*tree);
  EXPECT_EQ(*MiThreshold(d[3], o, 0.5, LossKind::kZeroOne), 1);
  auto far = Table({{0.0, Prediction::RealValue(std::sqrt(10.0))}});
  Oracle f(far);
  EXPECT_EQ(*MiThreshold(RealExample(0, 0), f, 0.5, LossKind::kSquared), 0);
}

TEST(MiThresholdTest, CalibratedMembersScoreHigher) {
  auto train = GenLinearRegression(30, 12, 1.0, 1, 5);
  auto holdout = GenLinearRegression(200, 12, 1.0, 2, 5);
  auto reference = GenLinearRegression(50, 12, 1.0, 3, 5);
  auto m = Train(LearnerSpec::Ols(), train, 0);
  Oracle o(*m);
  auto tau = CalibrateThreshold(reference, o, LossKind::kSquared);
  ASSERT_TRUE(tau.ok());
  auto rate = [&](const Dataset& d) {
    double members = 0;
    for (const Example& e : d.examples) {
      members += *MiThreshold(e, o, *tau, LossKind::kSquared);
    }
    return members / d.size();
  };
  EXPECT_GT(rate(train), rate(holdout));
}

// Membership answers fixed per example (keyed by the first coordinate).
class StubMi : public MembershipInference {
 public:
  explicit StubMi(std::map<double, int> member) : member_(member) {}
  absl::StatusOr<int> Member(const Example& e, Oracle& o) override {
    auto p = o.Query(e.instance);
    if (!p.ok()) return p.status();
    return member_[e.instance.coords()[0]];
  }
  absl::StatusOr<double> Confidence(const Example& e, Oracle& o) override {
    auto p = o.Query(e.instance);
    if (!p.ok()) return p.status();
    return p->value;
  }

 private:
  std::map<double, int> member_;
};

TEST(MiToDiTest, LabelModeTruthTable) {
  auto m = Table({});
  Rng rng(8);
  struct Case {
    int b0, b1, want;
  };
  for (Case c : {Case{0, 1, 0}, Case{1, 0, 1}}) {
    StubMi mi({{0.0, c.b0}, {1.0, c.b1}});
    Oracle h(m), hd(m, Phase::kAfterDeletion);
    auto g = MiToDi(mi, RealExample(0, 0), RealExample(1, 0), h, hd,
                    ReductionMode::kLabel, rng);
    EXPECT_EQ(g->value, c.want);
    EXPECT_FALSE(g->tie_broken);
    EXPECT_EQ(h.query_count(), 0);
  }
  StubMi both({{0.0, 1}, {1.0, 1}});
  Oracle h(m), hd(m, Phase::kAfterDeletion);
  auto g = MiToDi(both, RealExample(0, 0), RealExample(1, 0), h, hd,
                  ReductionMode::kLabel, rng);
  EXPECT_TRUE(g->tie_broken);
}

TEST(MiToDiTest, ConfidenceModeDeletedDropsMore) {
  auto before = Table(
      {{0.0, Prediction::RealValue(0.9)}, {1.0, Prediction::RealValue(0.8)}});
  auto after = Table(
      {{0.0, Prediction::RealValue(0.2)}, {1.0, Prediction::RealValue(0.7)}});
  StubMi mi({});
  Oracle h(before), hd(after, Phase::kAfterDeletion);
  Rng rng(9);
  auto g = MiToDi(mi, RealExample(0, 0), RealExample(1, 0), h, hd,
                  ReductionMode::kConfidence, rng);
  EXPECT_EQ(g->value, 0);
}

std::vector<Instance> Bits(std::vector<std::vector<double>> rows) {
  std::vector<Instance> out;
  for (auto& r : rows) out.push_back(Instance::BinaryUnchecked(r));
  return out;
}

// Predicts class 1 exactly on a listed set of instances.
class FlipModel : public Model {
 public:
  explicit FlipModel(std::vector<Instance> flipped)
      : flipped_(std::move(flipped)) {}
  InstanceKind instance_kind() const override { return InstanceKind::kBinary; }
  absl::StatusOr<Prediction> Predict(const Instance& x) const override {
    for (const Instance& f : flipped_) {
      if (f == x) return Prediction::Distribution({0.0, 1.0});
    }
    return Prediction::Distribution({1.0, 0.0});
  }
  std::string Describe() const override { return "flip"; }

 private:
  std::vector<Instance> flipped_;
};

TEST(DelInsRecTest, ColumnMajority) {
  auto changed = Bits({{1, 0, 1}, {1, 0, 0}, {1, 1, 1}});
  auto aux = changed;
  for (auto& x : Bits({{0, 0, 0}, {0, 1, 0}})) aux.push_back(x);
  auto h = std::make_shared<FlipModel>(std::vector<Instance>{});
  auto hd = std::make_shared<FlipModel>(changed);
  Oracle before(h), after(hd, Phase::kAfterDeletion);
  auto r = DelInsRec(before, after, aux);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->instance, Instance::BinaryUnchecked({1, 0, 1}));
  EXPECT_FALSE(r->empty_disagreement);
  EXPECT_EQ(before.query_count(), 5);
  EXPECT_EQ(after.query_count(), 5);
}

TEST(DelInsRecTest, EmptyDisagreement) {
  auto h = std::make_shared<FlipModel>(std::vector<Instance>{});
  Oracle before(h), after(h, Phase::kAfterDeletion);
  auto r = DelInsRec(before, after, Bits({{1, 1}, {0, 1}}));
  EXPECT_TRUE(r->empty_disagreement);
  EXPECT_EQ(r->instance, Instance::BinaryUnchecked({0, 0}));
}

TEST(DelInsRecTest, TiesGoToZero) {
  std::vector<Instance> pts = Bits({{1, 0}, {0, 1}});
  std::vector<const Instance*> ptrs = {&pts[0], &pts[1]};
  EXPECT_EQ(CoordinateMajority(ptrs, 2), Instance::BinaryUnchecked({0, 0}));
}

class NGramAttackTest : public ::testing::Test {
 protected:
  void Build(const std::vector<std::string>& lines, size_t deleted, int order) {
    auto corpus = ParseCorpus(absl::StrJoin(lines, "\n"));
    ASSERT_TRUE(corpus.ok());
    dict_ = corpus->dictionary;
    data_ = corpus->sentences;
    auto h = Train(LearnerSpec::NGram(order), data_, 0);
    auto del = DeleteExamples(LearnerSpec::NGram(order), data_, {{deleted}}, 0);
    before_ = *h;
    after_ = del->model;
  }

  std::vector<TokenId> Gram(const std::vector<std::string>& words) {
    std::vector<TokenId> out;
    for (const auto& w : words) {
      out.push_back(w == "<s>"    ? kStartToken
                    : w == "</s>" ? kEndToken
                                  : dict_.Find(w));
    }
    return out;
  }

  Dictionary dict_;
  Dataset data_;
  ModelPtr before_, after_;
};

TEST_F(NGramAttackTest, BigramChain) {
  Build({"the cat sat", "a dog ran"}, 0, 2);
  Oracle h(before_), hd(after_, Phase::kAfterDeletion);
  auto graph = NGramDiff(h, hd, dict_, 2);
  ASSERT_TRUE(graph.ok());
  std::vector<std::vector<TokenId>> grams;
  for (const auto& node : graph->nodes) grams.push_back(node.gram);
  std::vector<std::vector<TokenId>> want = {
      Gram({"<s>", "the"}), Gram({"cat", "sat"}), Gram({"sat", "</s>"}),
      Gram({"the", "cat"})};
  std::sort(want.begin(), want.end());
  EXPECT_EQ(grams, want);
  ASSERT_EQ(graph->start_nodes.size(), 1u);
  EXPECT_EQ(graph->nodes[graph->start_nodes[0]].gram, Gram({"<s>", "the"}));
  const int64_t v = static_cast<int64_t>(dict_.size());
  EXPECT_EQ(h.query_count(), v * v);
  EXPECT_EQ(hd.query_count(), v * v);

  auto path = NGramPathSearch(*graph);
  ASSERT_TRUE(path.ok());
  EXPECT_EQ(dict_.Decode(*path), "the cat sat");
}

TEST_F(NGramAttackTest, UndeletedRatioIsConstant) {
  Build({"the cat sat", "a dog ran"}, 0, 2);
  Oracle h(before_), hd(after_, Phase::kAfterDeletion);
  for (const auto& g :
       {Gram({"a", "dog"}), Gram({"dog", "ran"}), Gram({"<s>", "a"})}) {
    const double p = h.Query(Instance::Fragment(g))->value;
    const double q = hd.Query(Instance::Fragment(g))->value;
    // C_2 = 8 before, 4 after.
    EXPECT_NEAR(q / p, 8.0 / 4.0, 1e-12);
  }
}

TEST_F(NGramAttackTest, NothingDeleted) {
  Build({"the cat sat", "a dog ran"}, 0, 2);
  Oracle h(before_), hd(before_, Phase::kAfterDeletion);
  auto graph = NGramDiff(h, hd, dict_, 2);
  EXPECT_TRUE(graph->nodes.empty());
}

TEST_F(NGramAttackTest, RawRuleMarksEverything) {
  Build({"the cat sat", "a dog ran"}, 0, 2);
  Oracle h(before_), hd(after_, Phase::kAfterDeletion);
  NGramDiffOptions raw;
  raw.raw_rule = true;
  auto graph = NGramDiff(h, hd, dict_, 2, raw);
  // Only the deleted sentence's bigrams lose mass; the rest rise.
  EXPECT_EQ(graph->nodes.size(), 4u);
}

TEST_F(NGramAttackTest, UnigramHasNoOrderedOutput) {
  Build({"the cat sat", "a dog ran"}, 0, 1);
  Oracle h(before_), hd(after_, Phase::kAfterDeletion);
  auto graph = NGramDiff(h, hd, dict_, 1);
  auto path = NGramPathSearch(*graph);
  EXPECT_EQ(path.status().code(), absl::StatusCode::kNotFound);
  EXPECT_EQ(dict_.Decode(BagOfWords(*graph)), "cat sat the");
}

TEST_F(NGramAttackTest, RepeatedBigramNeedsRepeat) {
  Build({"a a a", "b c"}, 0, 2);
  Oracle h(before_), hd(after_, Phase::kAfterDeletion);
  auto graph = NGramDiff(h, hd, dict_, 2);
  ASSERT_TRUE(graph.ok());
  PathSearchOptions none;
  none.max_repeats = 0;
  auto short_path = NGramPathSearch(*graph, none);
  ASSERT_TRUE(short_path.ok());
  EXPECT_EQ(dict_.Decode(*short_path), "a a");
  PathSearchOptions one;
  one.max_repeats = 1;
  auto path = NGramPathSearch(*graph, one);
  ASSERT_TRUE(path.ok());
  EXPECT_EQ(dict_.Decode(*path), "a a a");
}

TEST_F(NGramAttackTest, PrunedEnumerationMatchesFull) {
  Build({"the cat sat on the mat", "a dog ran", "the dog sat", "a cat ran"}, 0,
        3);
  Oracle h(before_), hd(after_, Phase::kAfterDeletion);
  auto full = NGramDiff(h, hd, dict_, 3);
  Oracle h2(before_), hd2(after_, Phase::kAfterDeletion);
  NGramDiffOptions small;
  small.query_cap = 200;
  auto pruned = NGramDiff(h2, hd2, dict_, 3, small);
  ASSERT_TRUE(pruned.ok()) << pruned.status();
  EXPECT_TRUE(pruned->pruned);
  EXPECT_LT(hd2.query_count(), hd.query_count());
  ASSERT_EQ(full->nodes.size(), pruned->nodes.size());
  for (size_t i = 0; i < full->nodes.size(); ++i) {
    EXPECT_EQ(full->nodes[i].gram, pruned->nodes[i].gram);
  }
  EXPECT_EQ(dict_.Decode(*NGramPathSearch(*pruned)), "the cat sat on the mat");
}

TEST_F(NGramAttackTest, DictionaryTooLarge) {
  Build({"the cat sat", "a dog ran"}, 0, 3);
  Oracle h(before_);
  NGramDiffer differ(dict_, 3, NGramDiffOptions{.query_cap = 10});
  auto s = differ.ObserveBefore(h);
  EXPECT_NE(s.message().find("DictionaryTooLarge"), absl::string_view::npos);
}

TEST(PathSearchTest, BudgetExceeded) {
  std::vector<DiffNode> nodes;
  for (TokenId a = 2; a < 9; ++a) {
    for (TokenId b = 2; b < 9; ++b) nodes.push_back({{a, b}, 1});
  }
  nodes.push_back({{kStartToken, 2}, 1});
  DiffGraph graph = BuildDiffGraph(2, nodes);
  PathSearchOptions tiny;
  tiny.expansion_cap = 50;
  auto path = NGramPathSearch(graph, tiny);
  EXPECT_NE(path.status().message().find("SearchBudgetExceeded"),
            absl::string_view::npos);
}

TEST(PathSearchTest, EdgesFollowOverlap) {
  DiffGraph g = BuildDiffGraph(
      3, {{{0, 0, 2}, 1}, {{0, 2, 3}, 1}, {{2, 3, 1}, 1}, {{3, 3, 3}, 1}});
  ASSERT_EQ(g.successors[0], std::vector<int>{1});
  ASSERT_EQ(g.successors[1], std::vector<int>{2});
  EXPECT_TRUE(g.successors[2].empty());
  EXPECT_EQ(g.successors[3], std::vector<int>{3});
  EXPECT_EQ(g.start_nodes, (std::vector<int>{0, 1}));
}

TEST(DelLblRecTest, LargestDrop) {
  auto before = Table({{0.0, Prediction::Distribution({0.5, 0.2, 0.3})}});
  auto after = Table({{0.0, Prediction::Distribution({0.2, 0.4, 0.4})}});
  Oracle h(before), hd(after, Phase::kAfterDeletion);
  auto c = DelLblRec(h, hd, {Instance::Dense({0})}, 3);
  EXPECT_EQ(*c, 0);
}

TEST(DelLblRecTest, IdenticalOraclesGiveClassZero) {
  auto m = Table({{0.0, Prediction::Distribution({0.1, 0.6, 0.3})}});
  Oracle h(m), hd(m, Phase::kAfterDeletion);
  EXPECT_EQ(*DelLblRec(h, hd, {Instance::Dense({0})}, 3), 0);
}

TEST(InsRevLblRecTest, Extrapolates) {
  auto before = Table({{0.0, Prediction::RealValue(2.0)}});
  auto after = Table({{0.0, Prediction::RealValue(1.5)}});
  Oracle h(before), hd(after, Phase::kAfterDeletion);
  EXPECT_DOUBLE_EQ(*InsRevLblRec(Instance::Dense({0}), h, hd, 2.0), 3.0);
  Oracle h2(before), hd2(after, Phase::kAfterDeletion);
  EXPECT_DOUBLE_EQ(*InsRevLblRec(Instance::Dense({0}), h2, hd2, 0.0), 2.0);
  Oracle h3(before), hd3(before, Phase::kAfterDeletion);
  EXPECT_DOUBLE_EQ(*InsRevLblRec(Instance::Dense({0}), h3, hd3, 7.0), 2.0);
}

TEST(TuneLambdaTest, SingleCandidate) {
  auto dist = LinearRegressionData(30, 3, 0.5);
  EXPECT_DOUBLE_EQ(*TuneLambda(LearnerSpec::Ols(), dist, {0.0}, 5, 1), 0.0);
}

TEST(TuneLambdaTest, NoSignalPicksSmallest) {
  auto dist = LinearRegressionData(30, 3, 0.5);
  EXPECT_DOUBLE_EQ(
      *TuneLambda(LearnerSpec::Constant(), dist, {3.0, 1.0, 2.0}, 5, 1), 1.0);
}

TEST(TuneLambdaTest, OlsPrefersPositiveLambda) {
  auto dist = LinearRegressionData(40, 5, 1.0);
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(i);
  auto lambda = TuneLambda(LearnerSpec::Ols(), dist, grid, 200, 3);
  ASSERT_TRUE(lambda.ok());
  EXPECT_GT(*lambda, 0.0);
}

TEST(ExampleDistanceTest, Metrics) {
  Example a{Instance::BinaryUnchecked({1, 0, 1, 1}), Label::Class(2)};
  Example b{Instance::BinaryUnchecked({1, 1, 1, 0}), Label::Class(2)};
  EXPECT_DOUBLE_EQ(*ExampleDistance({MetricKind::kHamming}, a, b), 2.0);
  EXPECT_DOUBLE_EQ(*ExampleDistance({MetricKind::kNormalizedHamming}, a, b),
                   0.5);
  EXPECT_DOUBLE_EQ(*ExampleDistance({MetricKind::kZeroOneExact}, a, b), 1.0);
  EXPECT_DOUBLE_EQ(
      *ExampleDistance({MetricKind::kZeroOneExact, MetricScope::kLabel}, a, b),
      0.0);
  EXPECT_DOUBLE_EQ(*ExampleDistance({MetricKind::kHamming}, a, a), 0.0);
}

// Returns a fixed reconstruction.
class FixedRec : public ReconstructionAttacker {
 public:
  explicit FixedRec(Instance x) : x_(std::move(x)) {}
  std::string name() const override { return "fixed"; }
  absl::Status ObserveBefore(Oracle&, Rng&) override {
    return absl::OkStatus();
  }
  absl::StatusOr<ReconstructionGuess> GuessAfter(Oracle&, Rng&) override {
    ReconstructionGuess g;
    g.instance = x_;
    return g;
  }

 private:
  Instance x_;
};

TEST(RecToInfTest, DecisionRule) {
  Challenge c;
  c.e0 = {Instance::BinaryUnchecked({0, 0, 0, 0}), Label::Class(0)};
  c.e1 = {Instance::BinaryUnchecked({1, 1, 1, 1}), Label::Class(1)};
  auto m = std::make_shared<FlipModel>(std::vector<Instance>{});
  struct Case {
    std::vector<double> guess;
    int want;
    bool tie;
  };
  for (Case k : {Case{{0, 0, 0, 0}, 0, false}, Case{{1, 1, 1, 0}, 1, false},
                 Case{{1, 1, 0, 0}, 0, true}}) {
    auto adv = MakeRecToInf(
        std::make_unique<FixedRec>(Instance::BinaryUnchecked(k.guess)),
        {MetricKind::kHamming, MetricScope::kInstance}, 1.0);
    Oracle h(m), hd(m, Phase::kAfterDeletion);
    Rng rng(10);
    ASSERT_TRUE(adv->ObserveBefore(c, h, rng).ok());
    auto g = adv->GuessAfter(hd, rng);
    ASSERT_TRUE(g.ok());
    if (!k.tie) EXPECT_EQ(g->value, k.want);
    EXPECT_EQ(g->tie_broken, k.tie);
  }
}

}  // namespace
}  // namespace unlearnaudit
