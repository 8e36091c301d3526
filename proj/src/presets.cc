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

#include "unlearnaudit/presets.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <initializer_list>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "status_macros.h"
#include "unlearnaudit/attacks.h"
#include "unlearnaudit/data.h"
#include "unlearnaudit/experiment.h"
#include "unlearnaudit/games.h"
#include "unlearnaudit/learners.h"
#include "unlearnaudit/random.h"
#include "unlearnaudit/unlearning.h"

namespace unlearnaudit {

namespace {

using nlohmann::json;
using Sets = std::vector<std::string>;

const std::vector<PresetInfo>& PresetTable() {
  static const auto* presets = new std::vector<PresetInfo>{
      {"table2", "deletion inference against OLS and regression trees", {1}},
      {"table3", "deletion inference against logistic, tree and k-NN", {2}},
      {"lemma34", "loss-increase inequalities for OLS deletions", {3}},
      {"lemma44", "Voronoi cell bit agreement, exhaustive over {0,1}^6", {4}},
      {"thm42",
       "instance reconstruction for 1-NN and the inference wrapper",
       {5, 9}},
      {"table4", "sentence reconstruction from n-gram models", {6}},
      {"table5", "label reconstruction against logistic and k-NN", {7}},
      {"table6", "known-instance label extrapolation for OLS", {8}},
      {"thm52", "compliance advantage vs deletion inference success", {10}},
      {"baseline", "direct deletion inference vs membership reduction", {11}},
      {"sanity", "every attack against a constant learner", {12}},
      {"all", "every criterion", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}},
  };
  return *presets;
}

constexpr double kBudget[kNumCriteria + 1] = {0,   120, 180, 30,  30,  120, 300,
                                              120, 120, 120, 180, 180, 60};
const char* const kTitle[kNumCriteria + 1] = {
    "",
    "regression deletion inference",
    "classifier deletion inference",
    "OLS loss-increase inequalities",
    "1-NN cell bit agreement",
    "1-NN instance reconstruction",
    "n-gram sentence reconstruction",
    "label reconstruction",
    "known-instance label extrapolation",
    "reconstruction-to-inference wrapper",
    "compliance vs inference",
    "direct attack vs membership reduction",
    "constant-learner floor",
};

Sets Cat(Sets a, std::initializer_list<std::string> b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

absl::StatusOr<ExperimentConfig> Configure(const PresetOptions& o,
                                           const Sets& sets) {
  ExperimentConfig c;
  UA_RETURN_IF_ERROR(c.Set("game.seed", absl::StrCat(o.seed)));
  UA_RETURN_IF_ERROR(c.Set("game.workers", absl::StrCat(o.workers)));
  for (const std::string& s : sets) UA_RETURN_IF_ERROR(c.Apply(s));
  return c;
}

absl::StatusOr<json> Run(const PresetOptions& o, const Sets& sets) {
  UA_ASSIGN(c, Configure(o, sets));
  UA_ASSIGN(report, RunExperiment(c));
  return report.document["result"];
}

absl::StatusOr<RecStats> RunRec(const PresetOptions& o, const Sets& sets) {
  UA_ASSIGN(c, Configure(o, sets));
  ReconstructionGameConfig g;
  UA_ASSIGN(learner, BuildLearner(c));
  UA_ASSIGN(data, BuildData(c));
  UA_ASSIGN(attacker, BuildReconstructionAttacker(c, data));
  UA_ASSIGN(metric, ParseMetricKind(c.Get("game.metric")));
  UA_ASSIGN(eps, c.GetDouble("game.eps"));
  UA_ASSIGN(trials, c.GetInt("game.trials"));
  g.learner = learner;
  g.data = data;
  g.attacker = attacker;
  g.metric = {metric, MetricScope::kInstance};
  g.eps = eps;
  g.trials = trials;
  g.seed = o.seed;
  g.workers = o.workers;
  return RunReconstruction(g);
}

// Standard error of the mean of 1 - distance / d over trials.
double AccuracySe(const RecStats& s, int d) {
  const double n = static_cast<double>(s.distances.size());
  if (n < 2) return 0.0;
  double mean = 0, sq = 0;
  for (double x : s.distances) mean += x / d;
  mean /= n;
  for (double x : s.distances) sq += (x / d - mean) * (x / d - mean);
  return std::sqrt(sq / (n - 1) / n);
}

double Se(const json& r) { return r["standard_error"].get<double>(); }
double Est(const json& r) { return r["estimate"].get<double>(); }

std::string F(double v) { return absl::StrFormat("%.3f", v); }

std::string Ci(const json& r) {
  return absl::StrFormat("%.3f [%.3f, %.3f]", Est(r), r["ci_low"].get<double>(),
                         r["ci_high"].get<double>());
}

std::string Mark(bool ok) { return ok ? "" : " (below threshold)"; }

const Sets& Linear() {
  static const auto* s = new Sets{"data.kind=linear_regression",
                                  "data.n=450",
                                  "data.d=13",
                                  "data.noise_sigma=0.1",
                                  "attacker.loss=squared",
                                  "attacker.metric=abs_diff"};
  return *s;
}

const Sets& Blobs(int n = 135) {
  static const auto* s135 =
      new Sets{"data.kind=blobs", "data.n=135", "data.d=4", "data.classes=3",
               "data.spread=0.8"};
  static const auto* s100 =
      new Sets{"data.kind=blobs", "data.n=100", "data.d=4", "data.classes=3",
               "data.spread=0.8"};
  return n == 100 ? *s100 : *s135;
}

Sets Learner(const std::string& name) {
  if (name == "knn") return {"learner.kind=knn", "learner.k=5"};
  return {"learner.kind=" + name};
}

// One classifier deletion-inference cell, memoized in the cache.
absl::StatusOr<json> ClassifierCell(const PresetOptions& o,
                                    CriterionCache& cache,
                                    const std::string& learner,
                                    const std::string& attack) {
  if (!cache.table3) cache.table3 = json::object();
  const std::string key = learner + "_" + attack;
  if (cache.table3->contains(key)) return (*cache.table3)[key];
  Sets sets = Cat(Blobs(), {"game.trials=1000", "attacker.loss=nll",
                            "attacker.metric=l1_confidence",
                            "attacker.kind=del_inf_" + attack});
  for (const std::string& s : Learner(learner)) sets.push_back(s);
  UA_ASSIGN(r, Run(o, sets));
  (*cache.table3)[key] = r;
  return r;
}

absl::StatusOr<json> SingletonRec(const PresetOptions& o,
                                  CriterionCache& cache) {
  if (cache.singletons_rec) return *cache.singletons_rec;
  UA_ASSIGN(s,
            RunRec(o, {"game.type=reconstruction", "game.trials=100",
                       "learner.kind=knn", "learner.k=1", "data.kind=hypercube",
                       "data.n=16", "data.d=20", "data.classes=0",
                       "attacker.kind=del_ins_rec", "attacker.aux=2000",
                       "game.metric=hamming", "game.eps=1"}));
  const double n = static_cast<double>(s.trials);
  cache.singletons_rec =
      json{{"rho", s.rho_at_eps},
           {"rho_se", std::sqrt(s.rho_at_eps * (1 - s.rho_at_eps) / n)},
           {"accuracy", s.expected_accuracy},
           {"exact", s.exact_match}};
  return *cache.singletons_rec;
}

struct Check {
  bool ok = true;
  std::vector<std::string> parts;
  json metrics = json::object();

  void Add(bool passed, std::string text) {
    ok &= passed;
    parts.push_back(std::move(text));
  }
};

absl::Status RegressionInference(const PresetOptions& o, Check& c) {
  const Sets base = Cat(Linear(), {"game.trials=1000"});
  for (const char* learner : {"ols", "decision_tree"}) {
    for (const char* attack : {"exm", "ins"}) {
      UA_ASSIGN(
          r,
          Run(o, Cat(base, {absl::StrCat("learner.kind=", learner),
                            absl::StrCat("attacker.kind=del_inf_", attack)})));
      const std::string key = absl::StrCat(learner, "_", attack);
      c.metrics[key] = r;
      const bool ols = std::string_view(learner) == "ols";
      const bool exm = std::string_view(attack) == "exm";
      if (exm) {
        const double need = ols ? 0.95 : 0.99;
        const bool pass = Est(r) >= need;
        c.Add(pass, absl::StrCat(key, " ", Ci(r), " >= ", F(need), Mark(pass)));
      } else {
        c.parts.push_back(absl::StrCat(key, " ", Ci(r)));
      }
    }
  }
  UA_ASSIGN(b, Run(o, Cat(Blobs(), {"game.trials=1000", "attacker.loss=nll",
                                    "learner.kind=decision_tree"})));
  c.metrics["decision_tree_exm_blobs"] = b;
  c.parts.push_back(absl::StrCat("decision_tree_exm_blobs ", Ci(b)));
  return absl::OkStatus();
}

absl::Status ClassifierInference(const PresetOptions& o, CriterionCache& cache,
                                 Check& c) {
  for (const char* learner : {"logistic", "decision_tree", "knn"}) {
    UA_ASSIGN(exm, ClassifierCell(o, cache, learner, "exm"));
    UA_ASSIGN(ins, ClassifierCell(o, cache, learner, "ins"));
    c.metrics[absl::StrCat(learner, "_exm")] = exm;
    c.metrics[absl::StrCat(learner, "_ins")] = ins;
    std::string text = absl::StrCat(learner, " exm ", Ci(exm));
    const std::string_view name = learner;
    if (name != "knn") {
      const double need = name == "logistic" ? 0.80 : 0.99;
      const bool pass = Est(exm) >= need;
      c.Add(pass, absl::StrCat(text, " >= ", F(need), Mark(pass)));
    } else {
      c.parts.push_back(text);
    }
    const bool close = Est(ins) >= Est(exm) - 0.15;
    c.Add(close, absl::StrCat(learner, " ins ", Ci(ins), " within 0.15",
                              close ? "" : " (too far below exm)"));
  }
  return absl::OkStatus();
}

absl::Status LossIncreaseSuite(const PresetOptions& o, Check& c) {
  int violations = 0;
  double worst_remaining = -INFINITY;
  double worst_slack = INFINITY;
  const LearnerSpec ols = LearnerSpec::Ols();
  for (int t = 0; t < 200; ++t) {
    Rng rng(DeriveSeed(o.seed, t, "lemma34"));
    const int n = 15 + static_cast<int>(rng.UniformInt(106));
    const int d = 1 + static_cast<int>(rng.UniformInt(8));
    const DatasetDistribution dist = LinearRegressionData(n, d, 0.1);
    UA_ASSIGN(s, dist.Sample(DeriveSeed(o.seed, t, "data")));
    const size_t index = rng.UniformInt(s.size());
    UA_ASSIGN(h, Train(ols, s, DeriveSeed(o.seed, t, "train")));
    UA_ASSIGN(del, DeleteExamples(ols, s, {{index}}, DeletionSeed(o.seed, t)));
    UA_ASSIGN(
        inc, MeasureLossIncrease(*h, *del.model, s, index, LossKind::kSquared));
    const double slack = inc.deleted + (n - 1) * inc.remaining_mean;
    worst_remaining = std::max(worst_remaining, inc.remaining_mean);
    worst_slack = std::min(worst_slack, slack);
    if (inc.remaining_mean > 1e-9 || slack < -1e-9) ++violations;
  }
  c.metrics = {{"draws", 200},
               {"violations", violations},
               {"max_remaining_increase", worst_remaining},
               {"min_slack", worst_slack}};
  c.Add(violations == 0,
        absl::StrFormat("200 draws, %d violations, max delta_rest %.3g, "
                        "min slack %.3g",
                        violations, worst_remaining, worst_slack));
  return absl::OkStatus();
}

absl::Status CellAgreement(const PresetOptions& o, Check& c) {
  constexpr int kN = 8, kD = 6;
  int violations = 0, cells = 0, model_disagreements = 0;
  double min_fraction = 1.0;
  const DatasetDistribution dist = UniformSingletons(kN, kD);
  const LearnerSpec knn = LearnerSpec::Knn(1);
  for (int s = 0; s < 8; ++s) {
    UA_ASSIGN(data, dist.Sample(DeriveSeed(o.seed, s, "lemma44")));
    UA_ASSIGN(model, Train(knn, data, DeriveSeed(o.seed, s, "train")));
    std::vector<int> size(kN, 0);
    std::vector<std::vector<int>> agree(kN, std::vector<int>(kD, 0));
    for (int mask = 0; mask < (1 << kD); ++mask) {
      std::vector<double> bits(kD);
      for (int j = 0; j < kD; ++j) bits[j] = (mask >> j) & 1;
      const Instance x = Instance::BinaryUnchecked(bits);
      int owner = 0;
      double best = INFINITY;
      for (int i = 0; i < kN; ++i) {
        const double dis = HammingDistance(x, data[i].instance);
        if (dis < best) best = dis, owner = i;
      }
      UA_ASSIGN(p, model->Predict(x));
      if (p.Argmax() != data[owner].label.class_id) ++model_disagreements;
      ++size[owner];
      for (int j = 0; j < kD; ++j) {
        agree[owner][j] += bits[j] == data[owner].instance.coords()[j];
      }
    }
    for (int i = 0; i < kN; ++i) {
      if (size[i] == 0) continue;
      ++cells;
      for (int j = 0; j < kD; ++j) {
        min_fraction =
            std::min(min_fraction, static_cast<double>(agree[i][j]) / size[i]);
        if (2 * agree[i][j] < size[i]) ++violations;
      }
    }
  }
  c.metrics = {{"datasets", 8},
               {"nonempty_cells", cells},
               {"violations", violations},
               {"min_agreement", min_fraction},
               {"model_disagreements", model_disagreements}};
  c.Add(violations == 0,
        absl::StrFormat("8 datasets, %d cells x %d coords, %d violations, "
                        "min agreement %.3f, 1-NN model mismatches %d",
                        cells, kD, violations, min_fraction,
                        model_disagreements));
  return absl::OkStatus();
}

absl::Status InstanceRecovery(const PresetOptions& o, CriterionCache& cache,
                              Check& c) {
  UA_ASSIGN(single, SingletonRec(o, cache));
  const double rho = single["rho"].get<double>();
  c.metrics["singletons"] = single;
  c.Add(rho >= 0.95,
        absl::StrCat("singletons rho@1 ", F(rho), " (bit accuracy ",
                     F(single["accuracy"].get<double>()), ") >= 0.950",
                     Mark(rho >= 0.95)));
  const Sets kclasses = {"game.type=reconstruction",
                         "game.trials=100",
                         "learner.kind=knn",
                         "learner.k=1",
                         "data.kind=hypercube",
                         "data.n=140",
                         "data.d=20",
                         "data.classes=30",
                         "attacker.aux=2000",
                         "game.metric=hamming",
                         "game.eps=1"};
  UA_ASSIGN(two, RunRec(o, Cat(kclasses, {"attacker.kind=del_ins_rec"})));
  c.metrics["kclasses_two_oracle"] = {{"accuracy", two.expected_accuracy},
                                      {"se", AccuracySe(two, 20)}};
  const bool two_ok = two.expected_accuracy > 0.8;
  c.Add(two_ok,
        absl::StrCat("30 classes two-oracle accuracy ",
                     F(two.expected_accuracy), " > 0.800", Mark(two_ok)));
  for (const char* phase : {"before", "after"}) {
    UA_ASSIGN(base, RunRec(o, Cat(kclasses,
                                  {"attacker.kind=single_oracle_del_ins_rec",
                                   absl::StrCat("attacker.phase=", phase)})));
    const double se = AccuracySe(base, 20);
    const bool ok = base.expected_accuracy <= 0.5 + 3 * se;
    c.metrics[absl::StrCat("kclasses_", phase, "_only")] = {
        {"accuracy", base.expected_accuracy}, {"se", se}};
    c.Add(ok, absl::StrCat(phase, "-only ", F(base.expected_accuracy), " <= ",
                           F(0.5 + 3 * se), ok ? "" : " (above chance)"));
  }
  return absl::OkStatus();
}

absl::Status SentenceReconstruction(const PresetOptions& o, Check& c) {
  UA_ASSIGN(corpus, LoadCorpus(BundledCorpusPath()));
  const bool shape =
      corpus.sentences.size() >= 200 && corpus.unique_words <= 300;
  c.Add(shape, absl::StrCat("corpus ", corpus.sentences.size(), " sentences, ",
                            corpus.unique_words, " words"));
  const Sets base = {"game.type=reconstruction",  "game.trials=500",
                     "learner.kind=ngram",        "data.kind=corpus",
                     "attacker.kind=ngram_rec",   "attacker.query_cap=1000000",
                     "game.metric=zero_one_exact"};
  for (int order : {1, 2, 3}) {
    UA_ASSIGN(r, Run(o, Cat(base, {absl::StrCat("learner.order=", order)})));
    c.metrics[absl::StrCat("order", order)] = r;
    const double exact = r["exact_match"].get<double>();
    const double f1 = r["mean_f1"].get<double>();
    std::string text =
        absl::StrCat("N=", order, " exact ", F(exact), " F1 ", F(f1));
    if (order == 1) {
      c.Add(f1 >= 0.85, absl::StrCat(text, Mark(f1 >= 0.85)));
    } else if (order == 2) {
      c.Add(f1 >= 0.95, absl::StrCat(text, Mark(f1 >= 0.95)));
    } else {
      const bool ok = exact >= 0.90 && f1 >= 0.99;
      c.Add(ok, absl::StrCat(text, Mark(ok)));
    }
  }
  return absl::OkStatus();
}

absl::Status LabelReconstruction(const PresetOptions& o, Check& c) {
  for (const char* learner : {"logistic", "knn"}) {
    Sets sets =
        Cat(Blobs(), {"game.type=reconstruction", "game.trials=200",
                      "attacker.kind=del_lbl_rec", "attacker.probes=200",
                      "game.metric=zero_one_exact", "game.metric_scope=label",
                      "game.eps=0"});
    for (const std::string& s : Learner(learner)) sets.push_back(s);
    UA_ASSIGN(r, Run(o, sets));
    c.metrics[learner] = r;
    const double rho = r["rho_at_eps"].get<double>();
    const double need = std::string_view(learner) == "logistic" ? 0.85 : 0.80;
    c.Add(rho >= need, absl::StrCat(learner, " ", F(rho), " >= ", F(need),
                                    Mark(rho >= need)));
  }
  return absl::OkStatus();
}

absl::Status LabelExtrapolation(const PresetOptions& o, Check& c) {
  UA_ASSIGN(r, Run(o, Cat(Linear(),
                          {"game.type=known_instance", "game.trials=500",
                           "learner.kind=ols", "attacker.kind=ins_rev_lbl_rec",
                           "attacker.lambda_grid=0:40:1"})));
  c.metrics = r;
  const double ratio = r["ratio"].get<double>();
  c.Add(ratio <= 0.80,
        absl::StrFormat("lambda %g, attacker %.4f vs baseline %.4f, ratio "
                        "%.3f <= 0.800%s",
                        r["lambda"].get<double>(),
                        r["mean_attacker_distance"].get<double>(),
                        r["mean_baseline_distance"].get<double>(), ratio,
                        Mark(ratio <= 0.80)));
  return absl::OkStatus();
}

absl::Status ReconstructionWrapper(const PresetOptions& o,
                                   CriterionCache& cache, Check& c) {
  UA_ASSIGN(single, SingletonRec(o, cache));
  const double rho = single["rho"].get<double>();
  const double rho_se = single["rho_se"].get<double>();
  // delta = Pr[dis(e0, e1) <= 2 eps] over pairs from one sampled dataset.
  const DatasetDistribution dist = UniformSingletons(16, 20);
  int close = 0;
  constexpr int kPairs = 4000;
  for (int t = 0; t < kPairs; ++t) {
    UA_ASSIGN(s, dist.Sample(DeriveSeed(o.seed, t, "delta")));
    Rng rng(DeriveSeed(o.seed, t, "delta_pick"));
    const std::vector<size_t> ij = rng.SampleWithoutReplacement(s.size(), 2);
    close += HammingDistance(s[ij[0]].instance, s[ij[1]].instance) <= 2.0;
  }
  const double delta = static_cast<double>(close) / kPairs;
  UA_ASSIGN(r, Run(o, {"game.trials=200", "learner.kind=knn", "learner.k=1",
                       "data.kind=hypercube", "data.n=16", "data.d=20",
                       "data.classes=0", "attacker.kind=rec_to_inf",
                       "attacker.aux=2000", "attacker.metric=hamming",
                       "attacker.eps=1"}));
  const double se = std::sqrt(Se(r) * Se(r) + rho_se * rho_se);
  const double bound = rho - delta - 3 * se;
  c.metrics = {{"inference", r},
               {"rho", rho},
               {"delta", delta},
               {"combined_se", se},
               {"bound", bound}};
  c.Add(Est(r) >= bound,
        absl::StrFormat("success %s >= rho %.3f - delta %.4f - 3SE = %.3f%s",
                        Ci(r), rho, delta, bound, Mark(Est(r) >= bound)));
  return absl::OkStatus();
}

absl::Status ComplianceVsInference(const PresetOptions& o,
                                   CriterionCache& cache, Check& c) {
  UA_ASSIGN(tree, ClassifierCell(o, cache, "decision_tree", "exm"));
  const Sets base = Cat(
      Blobs(100), {"game.type=compliance", "game.trials=1000", "game.budget=1",
                   "learner.kind=decision_tree", "attacker.loss=nll"});
  UA_ASSIGN(adv, Run(o, Cat(base, {"attacker.kind=del_inf_exm"})));
  UA_ASSIGN(coin, Run(o, Cat(base, {"attacker.kind=coin"})));
  const double target = 2 * (Est(tree) - 0.5);
  const double se = std::sqrt(Se(adv) * Se(adv) + 4 * Se(tree) * Se(tree));
  const double a = adv["advantage"].get<double>();
  const double bound = target - 3 * se;
  c.metrics = {{"inference_tree", tree},
               {"adapter", adv},
               {"coin", coin},
               {"bound", bound}};
  c.Add(a >= bound,
        absl::StrFormat("adapter advantage %.3f >= 2(%.3f - 0.5) - 3SE = "
                        "%.3f%s",
                        a, Est(tree), bound, Mark(a >= bound)));
  const double ca = coin["advantage"].get<double>();
  const double width = coin["ci_width"].get<double>();
  c.Add(ca <= width, absl::StrFormat("coin advantage %.3f <= CI width %.3f%s",
                                     ca, width, Mark(ca <= width)));
  return absl::OkStatus();
}

absl::Status DirectVsReduction(const PresetOptions& o, CriterionCache& cache,
                               Check& c) {
  UA_ASSIGN(exm, ClassifierCell(o, cache, "logistic", "exm"));
  UA_ASSIGN(mi,
            Run(o, Cat(Blobs(),
                       {"game.trials=1000", "learner.kind=logistic",
                        "attacker.loss=nll", "attacker.kind=mi_threshold"})));
  const double gap = Est(exm) - Est(mi);
  c.metrics = {{"direct", exm}, {"reduction", mi}, {"gap", gap}};
  c.Add(gap >= 0.05, absl::StrFormat("direct %s vs reduction %s, gap %.3f "
                                     ">= 0.050%s",
                                     Ci(exm), Ci(mi), gap, Mark(gap >= 0.05)));
  return absl::OkStatus();
}

absl::Status ConstantFloor(const PresetOptions& o, Check& c) {
  const Sets constant = {"learner.kind=constant", "game.trials=1000"};
  struct Case {
    const char* name;
    Sets sets;
  };
  const std::vector<Case> inference = {
      {"del_inf_exm/blobs", Cat(Blobs(), {"attacker.kind=del_inf_exm"})},
      {"del_inf_ins/blobs", Cat(Blobs(), {"attacker.kind=del_inf_ins"})},
      {"mi_threshold/blobs", Cat(Blobs(), {"attacker.kind=mi_threshold"})},
      {"del_inf_exm/linear", Cat(Linear(), {"attacker.kind=del_inf_exm"})},
      {"del_inf_ins/linear", Cat(Linear(), {"attacker.kind=del_inf_ins"})},
      {"rec_to_inf/hypercube",
       {"data.kind=hypercube", "data.n=16", "data.d=20", "data.classes=0",
        "attacker.kind=rec_to_inf", "attacker.aux=500",
        "attacker.metric=hamming"}},
  };
  for (const Case& k : inference) {
    Sets sets = constant;
    sets.insert(sets.end(), k.sets.begin(), k.sets.end());
    UA_ASSIGN(r, Run(o, sets));
    c.metrics[k.name] = r;
    const bool ok =
        r["ci_low"].get<double>() <= 0.5 && 0.5 <= r["ci_high"].get<double>();
    c.Add(ok, absl::StrCat(k.name, " ", Ci(r), ok ? "" : " (CI misses 0.5)"));
  }
  const Sets rec = {"learner.kind=constant", "game.type=reconstruction",
                    "game.trials=200"};
  {
    UA_ASSIGN(
        r, RunRec(o, Cat(rec, {"data.kind=hypercube", "data.n=16", "data.d=20",
                               "data.classes=0", "attacker.kind=del_ins_rec",
                               "attacker.aux=500", "game.metric=hamming",
                               "game.eps=1"})));
    const double se = AccuracySe(r, 20);
    const bool ok = std::abs(r.expected_accuracy - 0.5) <= 3 * se;
    c.metrics["del_ins_rec"] = {{"accuracy", r.expected_accuracy}, {"se", se}};
    c.Add(ok, absl::StrFormat("del_ins_rec bit accuracy %.3f within 3SE "
                              "(%.3f) of 0.5%s",
                              r.expected_accuracy, 3 * se,
                              ok ? "" : " (not chance)"));
  }
  {
    Sets sets =
        Cat(rec, {"attacker.kind=del_lbl_rec", "game.metric=zero_one_exact",
                  "game.metric_scope=label"});
    sets.insert(sets.end(), Blobs().begin(), Blobs().end());
    UA_ASSIGN(r, Run(o, sets));
    const double rho = r["rho_at_eps"].get<double>();
    const double se = std::sqrt((1.0 / 3) * (2.0 / 3) / 200);
    const bool ok = std::abs(rho - 1.0 / 3) <= 3 * se;
    c.metrics["del_lbl_rec"] = r;
    c.Add(ok, absl::StrFormat("del_lbl_rec %.3f within 3SE (%.3f) of 1/3%s",
                              rho, 3 * se, ok ? "" : " (not chance)"));
  }
  {
    UA_ASSIGN(r, Run(o, {"learner.kind=constant", "game.type=reconstruction",
                         "game.trials=50", "data.kind=corpus",
                         "attacker.kind=ngram_rec", "learner.order=2",
                         "attacker.query_cap=1000000",
                         "game.metric=zero_one_exact"}));
    const double exact = r["exact_match"].get<double>();
    c.metrics["ngram_rec"] = r;
    c.Add(exact == 0.0, absl::StrFormat("ngram_rec exact %.3f F1 %.3f", exact,
                                        r["mean_f1"].get<double>()));
  }
  {
    UA_ASSIGN(r,
              Run(o, Cat(Linear(),
                         {"learner.kind=constant", "game.type=known_instance",
                          "game.trials=200", "attacker.kind=ins_rev_lbl_rec",
                          "attacker.lambda=10"})));
    const double ratio = r["ratio"].get<double>();
    c.metrics["ins_rev_lbl_rec"] = r;
    const bool ok = ratio >= 1.0 - 1e-9;
    c.Add(ok, absl::StrFormat("ins_rev_lbl_rec ratio %.3f (no gain)%s", ratio,
                              ok ? "" : " (beats baseline)"));
  }
  return absl::OkStatus();
}

}  // namespace

std::span<const PresetInfo> Presets() { return PresetTable(); }

absl::StatusOr<CriterionOutcome> RunCriterion(int id,
                                              const PresetOptions& options,
                                              CriterionCache& cache) {
  if (id < 1 || id > kNumCriteria) {
    return absl::InvalidArgumentError(absl::StrCat("no criterion ", id));
  }
  const auto start = std::chrono::steady_clock::now();
  Check c;
  absl::Status s;
  switch (id) {
    case 1:
      s = RegressionInference(options, c);
      break;
    case 2:
      s = ClassifierInference(options, cache, c);
      break;
    case 3:
      s = LossIncreaseSuite(options, c);
      break;
    case 4:
      s = CellAgreement(options, c);
      break;
    case 5:
      s = InstanceRecovery(options, cache, c);
      break;
    case 6:
      s = SentenceReconstruction(options, c);
      break;
    case 7:
      s = LabelReconstruction(options, c);
      break;
    case 8:
      s = LabelExtrapolation(options, c);
      break;
    case 9:
      s = ReconstructionWrapper(options, cache, c);
      break;
    case 10:
      s = ComplianceVsInference(options, cache, c);
      break;
    case 11:
      s = DirectVsReduction(options, cache, c);
      break;
    case 12:
      s = ConstantFloor(options, c);
      break;
  }
  UA_RETURN_IF_ERROR(s);
  CriterionOutcome out;
  out.id = id;
  out.title = kTitle[id];
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  out.budget_seconds = kBudget[id];
  out.checks_passed = c.ok;
  out.passed = c.ok && out.seconds < out.budget_seconds;
  for (size_t i = 0; i < c.parts.size(); ++i) {
    absl::StrAppend(&out.detail, i ? "; " : "", c.parts[i]);
  }
  out.metrics = std::move(c.metrics);
  return out;
}

absl::StatusOr<std::vector<CriterionOutcome>> RunPreset(
    std::string_view name, const PresetOptions& options,
    const std::function<void(const CriterionOutcome&)>& on_outcome) {
  const PresetInfo* preset = nullptr;
  for (const PresetInfo& p : PresetTable()) {
    if (name == p.name) preset = &p;
  }
  if (preset == nullptr) {
    return absl::NotFoundError(absl::StrCat("UnknownPreset: ", AsAbsl(name)));
  }
  CriterionCache cache;
  std::vector<CriterionOutcome> out;
  for (int id : preset->criteria) {
    UA_ASSIGN(r, RunCriterion(id, options, cache));
    if (on_outcome) on_outcome(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string FormatOutcome(const CriterionOutcome& o) {
  return absl::StrFormat("%s [%2d] %s: %s (%.1f s / %.0f s%s)",
                         o.passed ? "PASS" : "FAIL", o.id, o.title, o.detail,
                         o.seconds, o.budget_seconds,
                         o.seconds < o.budget_seconds ? "" : ", over budget");
}

json ToJson(const CriterionOutcome& o) {
  return {{"criterion", o.id},    {"title", o.title},
          {"passed", o.passed},   {"checks_passed", o.checks_passed},
          {"seconds", o.seconds}, {"budget_seconds", o.budget_seconds},
          {"detail", o.detail},   {"metrics", o.metrics}};
}

}  // namespace unlearnaudit
