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

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <memory>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "status_macros.h"
#include "unlearnaudit/attacks.h"
#include "unlearnaudit/random.h"

#ifndef UNLEARNAUDIT_DATA_DIR_DEFAULT
#define UNLEARNAUDIT_DATA_DIR_DEFAULT "data"
#endif

namespace unlearnaudit {

namespace {

using nlohmann::json;

LabelKind LabelKindOf(const DatasetDistribution& data) {
  switch (data.kind) {
    case DistributionKind::kLinearRegression:
      return LabelKind::kReal;
    case DistributionKind::kCorpusFile:
      return LabelKind::kSequenceProb;
    case DistributionKind::kCsvFile:
      return data.schema.label_kind;
    case DistributionKind::kUniformHypercube:
    case DistributionKind::kGaussianBlobs:
      break;
  }
  return LabelKind::kClass;
}

absl::StatusOr<LossKind> ResolveLoss(const ExperimentConfig& c,
                                     const DatasetDistribution& data) {
  const std::string& name = c.Get("attacker.loss");
  if (name == "auto") {
    return LabelKindOf(data) == LabelKind::kReal ? LossKind::kSquared
                                                 : LossKind::kNegLogLikelihood;
  }
  auto loss = ParseLossKind(name);
  if (!loss.ok())
    return ConfigError("attacker.loss", std::string(loss.status().message()));
  return loss;
}

absl::StatusOr<MetricKind> ResolveMetric(const ExperimentConfig& c,
                                         std::string_view field,
                                         MetricKind fallback) {
  const std::string& name = c.Get(field);
  if (name == "auto") return fallback;
  auto m = ParseMetricKind(name);
  if (!m.ok()) return ConfigError(field, std::string(m.status().message()));
  return m;
}

absl::StatusOr<MetricScope> ParseScope(const std::string& name) {
  if (name == "example") return MetricScope::kExample;
  if (name == "instance") return MetricScope::kInstance;
  if (name == "label") return MetricScope::kLabel;
  return ConfigError("game.metric_scope",
                     absl::StrCat("unknown scope '", name, "'"));
}

absl::StatusOr<std::vector<Instance>> BinaryAux(const DatasetDistribution& data,
                                                int64_t count, uint64_t seed) {
  if (data.kind != DistributionKind::kUniformHypercube) {
    return ConfigError("attacker.kind",
                       "del_ins_rec needs hypercube (binary) data");
  }
  UA_ASSIGN(aux, GenUniformHypercube(static_cast<int>(count), data.d, 2,
                                     DeriveSeed(seed, 0, "aux")));
  std::vector<Instance> out;
  out.reserve(aux.size());
  for (Example& e : aux.examples) out.push_back(std::move(e.instance));
  return out;
}

std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  return absl::StrFormat("%.17g", v);
}

double Headline(const json& result, const std::string& type) {
  if (type == "inference") return result["estimate"].get<double>();
  if (type == "known_instance") return result["ratio"].get<double>();
  if (type == "compliance") return result["advantage"].get<double>();
  return result["sequence"].get<bool>() ? result["mean_f1"].get<double>()
                                        : result["rho_at_eps"].get<double>();
}

const char* HeadlineName(const json& result, const std::string& type) {
  if (type == "inference") return "estimate";
  if (type == "known_instance") return "ratio";
  if (type == "compliance") return "advantage";
  return result["sequence"].get<bool>() ? "mean_f1" : "rho_at_eps";
}

}  // namespace

const char* ToolVersion() { return "0.1.0"; }

std::string BundledCorpusPath() {
  if (const char* dir = std::getenv("UNLEARNAUDIT_DATA_DIR");
      dir != nullptr && *dir != '\0') {
    return absl::StrCat(dir, "/corpus.txt");
  }
  return absl::StrCat(UNLEARNAUDIT_DATA_DIR_DEFAULT, "/corpus.txt");
}

std::string OutputDirectory(const ExperimentConfig& config) {
  if (config.IsSet("output.dir")) return config.Get("output.dir");
  if (const char* dir = std::getenv("UNLEARNAUDIT_OUTPUT_DIR");
      dir != nullptr && *dir != '\0') {
    return dir;
  }
  return "unlearnaudit-out";
}

absl::StatusOr<LearnerSpec> BuildLearner(const ExperimentConfig& c) {
  auto kind = ParseLearnerKind(c.Get("learner.kind"));
  if (!kind.ok())
    return ConfigError("learner.kind", std::string(kind.status().message()));
  LearnerSpec spec;
  spec.kind = *kind;
  UA_ASSIGN(alpha, c.GetDouble("learner.alpha"));
  UA_ASSIGN(k, c.GetInt("learner.k"));
  UA_ASSIGN(order, c.GetInt("learner.order"));
  UA_ASSIGN(l2, c.GetDouble("learner.l2"));
  UA_ASSIGN(max_iter, c.GetInt("learner.max_iter"));
  UA_ASSIGN(tol, c.GetDouble("learner.tol"));
  UA_ASSIGN(classes, c.GetInt("learner.num_classes"));
  spec.alpha = alpha;
  spec.k = static_cast<int>(k);
  spec.ngram_order = static_cast<int>(order);
  spec.l2 = l2;
  spec.max_iter = static_cast<int>(max_iter);
  spec.tol = tol;
  spec.num_classes = static_cast<int>(classes);
  if (absl::Status s = ValidateSpec(spec); !s.ok()) {
    return ConfigError("learner", std::string(s.message()));
  }
  return spec;
}

absl::StatusOr<DatasetDistribution> BuildData(const ExperimentConfig& c) {
  auto kind = ParseDistributionKind(c.Get("data.kind"));
  if (!kind.ok())
    return ConfigError("data.kind", std::string(kind.status().message()));
  DatasetDistribution d;
  d.kind = *kind;
  UA_ASSIGN(n, c.GetInt("data.n"));
  UA_ASSIGN(dim, c.GetInt("data.d"));
  UA_ASSIGN(classes, c.GetInt("data.classes"));
  UA_ASSIGN(spread, c.GetDouble("data.spread"));
  UA_ASSIGN(sigma, c.GetDouble("data.noise_sigma"));
  UA_ASSIGN(param_seed, c.GetInt("data.param_seed"));
  UA_ASSIGN(fraction, c.GetDouble("data.train_fraction"));
  if (n < 1) return ConfigError("data.n", "must be >= 1");
  if (dim < 1) return ConfigError("data.d", "must be >= 1");
  d.n = static_cast<int>(n);
  d.d = static_cast<int>(dim);
  d.classes = static_cast<int>(classes);
  d.spread = spread;
  d.noise_sigma = sigma;
  d.param_seed = static_cast<uint64_t>(param_seed);
  d.train_fraction = fraction;
  d.path = c.Get("data.path");
  d.schema.label_column = c.Get("data.label_column");
  const std::string& label_kind = c.Get("data.label_kind");
  if (label_kind == "class") {
    d.schema.label_kind = LabelKind::kClass;
  } else if (label_kind == "real") {
    d.schema.label_kind = LabelKind::kReal;
  } else {
    return ConfigError("data.label_kind", "expected class or real");
  }
  if (d.kind == DistributionKind::kCorpusFile && d.path.empty()) {
    d.path = BundledCorpusPath();
  }
  if (d.kind == DistributionKind::kCsvFile && d.path.empty()) {
    return ConfigError("data.path", "csv data needs a path");
  }
  return d;
}

absl::StatusOr<InferenceAttackerFactory> BuildInferenceAttacker(
    const ExperimentConfig& c, const DatasetDistribution& data) {
  const std::string& kind = c.Get("attacker.kind");
  const bool real = LabelKindOf(data) == LabelKind::kReal;
  UA_ASSIGN(loss, ResolveLoss(c, data));
  UA_ASSIGN(metric, ResolveMetric(c, "attacker.metric",
                                  real ? MetricKind::kAbsDiff
                                       : MetricKind::kL1Confidence));
  using Out = absl::StatusOr<std::unique_ptr<InferenceAttacker>>;
  if (kind == "del_inf_exm") {
    return InferenceAttackerFactory(
        [loss](uint64_t) -> Out { return MakeDelInfExm(loss); });
  }
  if (kind == "del_inf_ins") {
    return InferenceAttackerFactory(
        [metric](uint64_t) -> Out { return MakeDelInfIns(metric); });
  }
  if (kind == "constant") {
    UA_ASSIGN(bit, c.GetInt("attacker.bit"));
    if (bit != 0 && bit != 1) return ConfigError("attacker.bit", "0 or 1");
    return InferenceAttackerFactory(
        [b = static_cast<int>(bit)](uint64_t) -> Out {
          return MakeConstantGuess(b);
        });
  }
  if (kind == "mi_threshold") {
    UA_ASSIGN(holdout, c.GetInt("attacker.holdout"));
    const std::string& mode_name = c.Get("attacker.mode");
    ReductionMode mode;
    if (mode_name == "label") {
      mode = ReductionMode::kLabel;
    } else if (mode_name == "confidence") {
      mode = ReductionMode::kConfidence;
    } else {
      return ConfigError("attacker.mode", "expected label or confidence");
    }
    DatasetDistribution aux = data;
    if (holdout > 0) aux.n = static_cast<int>(holdout);
    return InferenceAttackerFactory([aux, loss, mode](uint64_t seed) -> Out {
      UA_ASSIGN(h, aux.Sample(DeriveSeed(seed, 0, "holdout")));
      return MakeMiThresholdReduction(std::move(h), loss, mode);
    });
  }
  if (kind == "rec_to_inf") {
    UA_ASSIGN(aux_n, c.GetInt("attacker.aux"));
    UA_ASSIGN(eps, c.GetDouble("attacker.eps"));
    UA_ASSIGN(rec_metric,
              ResolveMetric(c, "attacker.metric", MetricKind::kHamming));
    if (data.kind != DistributionKind::kUniformHypercube) {
      return ConfigError("attacker.kind",
                         "rec_to_inf wraps del_ins_rec and "
                         "needs hypercube data");
    }
    const DistanceMetric dm{rec_metric, MetricScope::kInstance};
    return InferenceAttackerFactory(
        [data, aux_n, eps, dm](uint64_t seed) -> Out {
          UA_ASSIGN(aux, BinaryAux(data, aux_n, seed));
          return MakeRecToInf(MakeDelInsRec(std::move(aux)), dm, eps);
        });
  }
  return ConfigError("attacker.kind",
                     absl::StrCat("'", kind, "' is not an inference attacker"));
}

absl::StatusOr<ReconstructionAttackerFactory> BuildReconstructionAttacker(
    const ExperimentConfig& c, const DatasetDistribution& data) {
  const std::string& kind = c.Get("attacker.kind");
  using Out = absl::StatusOr<std::unique_ptr<ReconstructionAttacker>>;
  if (kind == "del_ins_rec" || kind == "single_oracle_del_ins_rec") {
    UA_ASSIGN(aux_n, c.GetInt("attacker.aux"));
    if (aux_n < 1) return ConfigError("attacker.aux", "must be >= 1");
    UA_RETURN_IF_ERROR(BinaryAux(data, 1, 0).status());
    if (kind == "del_ins_rec") {
      return ReconstructionAttackerFactory([data, aux_n](uint64_t seed) -> Out {
        UA_ASSIGN(aux, BinaryAux(data, aux_n, seed));
        return MakeDelInsRec(std::move(aux));
      });
    }
    const std::string& phase_name = c.Get("attacker.phase");
    if (phase_name != "before" && phase_name != "after") {
      return ConfigError("attacker.phase", "expected before or after");
    }
    const Phase phase =
        phase_name == "before" ? Phase::kBeforeDeletion : Phase::kAfterDeletion;
    return ReconstructionAttackerFactory(
        [data, aux_n, phase](uint64_t seed) -> Out {
          UA_ASSIGN(aux, BinaryAux(data, aux_n, seed));
          return MakeSingleOracleDelInsRec(std::move(aux), phase);
        });
  }
  if (kind == "ngram_rec") {
    if (data.kind != DistributionKind::kCorpusFile) {
      return ConfigError("attacker.kind", "ngram_rec needs corpus data");
    }
    auto corpus = LoadCorpus(data.path);
    if (!corpus.ok())
      return ConfigError("data.path", std::string(corpus.status().message()));
    UA_ASSIGN(order, c.GetInt("learner.order"));
    NGramDiffOptions diff;
    UA_ASSIGN(cap, c.GetInt("attacker.query_cap"));
    UA_ASSIGN(raw, c.GetBool("attacker.raw_rule"));
    diff.query_cap = cap;
    diff.raw_rule = raw;
    PathSearchOptions search;
    UA_ASSIGN(repeats, c.GetInt("attacker.max_repeats"));
    UA_ASSIGN(expansions, c.GetInt("attacker.expansion_cap"));
    search.max_repeats = static_cast<int>(repeats);
    search.expansion_cap = expansions;
    auto dict = std::make_shared<Dictionary>(std::move(corpus->dictionary));
    return ReconstructionAttackerFactory(
        [dict, order, diff, search](uint64_t) -> Out {
          return MakeNGramRec(*dict, static_cast<int>(order), diff, search);
        });
  }
  if (kind == "del_lbl_rec") {
    UA_ASSIGN(probes, c.GetInt("attacker.probes"));
    if (probes < 1) return ConfigError("attacker.probes", "must be >= 1");
    const int classes = data.NumClasses();
    if (classes < 2) {
      return ConfigError("attacker.kind", "del_lbl_rec needs class labels");
    }
    return ReconstructionAttackerFactory(
        [data, probes, classes](uint64_t seed) -> Out {
          UA_ASSIGN(aux, data.Sample(DeriveSeed(seed, 0, "aux")));
          Rng rng(DeriveSeed(seed, 0, "probes"));
          return MakeDelLblRec(
              BoundingBoxProbes(aux, static_cast<int>(probes), rng), classes);
        });
  }
  return ConfigError(
      "attacker.kind",
      absl::StrCat("'", kind, "' is not a reconstruction attacker"));
}

json ToJson(const SuccessStats& s) {
  return {{"attacker", s.attacker},
          {"wins", s.wins},
          {"trials", s.trials},
          {"estimate", s.estimate},
          {"ci_low", s.ci_low},
          {"ci_high", s.ci_high},
          {"standard_error", s.standard_error},
          {"mean_queries_before", s.mean_queries_before},
          {"mean_queries_after", s.mean_queries_after},
          {"ties", s.ties},
          {"ones", s.ones},
          {"collisions", s.collisions}};
}

json ToJson(const RecStats& s) {
  double mean = 0;
  for (double d : s.distances) mean += d;
  if (!s.distances.empty()) mean /= static_cast<double>(s.distances.size());
  json j = {{"attacker", s.attacker},
            {"trials", s.trials},
            {"eps", s.eps},
            {"rho_at_eps", s.rho_at_eps},
            {"mean_distance", mean},
            {"exact_match", s.exact_match},
            {"sequence", s.sequence},
            {"mean_f1", s.mean_f1},
            {"failures", s.failures},
            {"mean_queries_before", s.mean_queries_before},
            {"mean_queries_after", s.mean_queries_after}};
  j["expected_accuracy"] = std::isnan(s.expected_accuracy)
                               ? json(nullptr)
                               : json(s.expected_accuracy);
  return j;
}

json ToJson(const KnownInstanceStats& s) {
  return {{"lambda", s.lambda},
          {"trials", static_cast<int64_t>(s.rows.size())},
          {"mean_attacker_distance", s.mean_attacker},
          {"mean_baseline_distance", s.mean_baseline},
          {"ratio", s.ratio},
          {"improvement", 1.0 - s.ratio}};
}

json ToJson(const ComplianceStats& s) {
  return {{"sessions", s.sessions},
          {"world0_sessions", s.world0},
          {"world1_sessions", s.world1},
          {"p_guess1_world0", s.p0},
          {"p_guess1_world1", s.p1},
          {"ci_world0", {s.ci0_low, s.ci0_high}},
          {"ci_world1", {s.ci1_low, s.ci1_high}},
          {"advantage", s.advantage},
          {"signed_advantage", s.signed_advantage},
          {"standard_error", s.standard_error},
          {"ci_width", s.ci_width}};
}

absl::StatusOr<Report> RunExperiment(const ExperimentConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  const std::string& type = c.Get("game.type");
  UA_ASSIGN(trials, c.GetInt("game.trials"));
  UA_ASSIGN(seed_value, c.GetInt("game.seed"));
  UA_ASSIGN(workers, c.GetInt("game.workers"));
  if (trials < 1) return ConfigError("game.trials", "must be >= 1");
  if (workers < 1) return ConfigError("game.workers", "must be >= 1");
  const uint64_t seed = static_cast<uint64_t>(seed_value);
  UA_ASSIGN(learner, BuildLearner(c));
  UA_ASSIGN(data, BuildData(c));

  Report report;
  json result;
  std::string table;
  if (type == "inference") {
    InferenceGameConfig g;
    g.learner = learner;
    g.data = data;
    UA_ASSIGN(attacker, BuildInferenceAttacker(c, data));
    g.attacker = attacker;
    g.trials = trials;
    g.seed = seed;
    g.workers = static_cast<int>(workers);
    UA_ASSIGN(io, c.GetBool("game.instance_only"));
    UA_ASSIGN(lo, c.GetBool("game.label_only"));
    UA_ASSIGN(dh, c.GetBool("game.deletion_hiding"));
    UA_ASSIGN(batch, c.GetInt("game.batch_size"));
    g.variant = {io, lo, dh, static_cast<int>(batch)};
    UA_ASSIGN(stats, RunDeletionInference(g));
    result = ToJson(stats);
    table = "trial,i,j,bit,guess,win,tie_broken,collision\n";
    for (const InferenceTrial& r : stats.rows) {
      absl::StrAppend(&table, r.trial, ",", r.i, ",", r.j, ",", r.bit, ",",
                      r.guess, ",", r.guess == r.bit ? 1 : 0, ",",
                      r.tie_broken ? 1 : 0, ",", r.collision ? 1 : 0, "\n");
    }
  } else if (type == "reconstruction") {
    ReconstructionGameConfig g;
    g.learner = learner;
    g.data = data;
    UA_ASSIGN(attacker, BuildReconstructionAttacker(c, data));
    g.attacker = attacker;
    auto metric = ParseMetricKind(c.Get("game.metric"));
    if (!metric.ok())
      return ConfigError("game.metric", std::string(metric.status().message()));
    UA_ASSIGN(scope, ParseScope(c.Get("game.metric_scope")));
    g.metric = {*metric, scope};
    UA_ASSIGN(eps, c.GetDouble("game.eps"));
    g.eps = eps;
    g.trials = trials;
    g.seed = seed;
    g.workers = static_cast<int>(workers);
    UA_ASSIGN(stats, RunReconstruction(g));
    result = ToJson(stats);
    table = "trial,index,distance,f1,exact,failed\n";
    for (const ReconstructionTrial& r : stats.rows) {
      absl::StrAppend(&table, r.trial, ",", r.index, ",", Num(r.distance), ",",
                      Num(r.f1), ",", r.exact ? 1 : 0, ",", r.failed ? 1 : 0,
                      "\n");
    }
  } else if (type == "known_instance") {
    if (c.Get("attacker.kind") != "ins_rev_lbl_rec") {
      return ConfigError("attacker.kind",
                         "known_instance games run ins_rev_lbl_rec");
    }
    KnownInstanceConfig g;
    g.learner = learner;
    g.data = data;
    if (c.IsSet("attacker.lambda")) {
      UA_ASSIGN(lambda, c.GetDouble("attacker.lambda"));
      g.lambda = lambda;
    }
    UA_ASSIGN(grid, c.GetDoubleList("attacker.lambda_grid"));
    UA_ASSIGN(tuning, c.GetInt("attacker.tuning_trials"));
    g.lambda_grid = grid;
    g.tuning_trials = tuning;
    g.trials = trials;
    g.seed = seed;
    g.workers = static_cast<int>(workers);
    UA_ASSIGN(stats, RunKnownInstance(g));
    result = ToJson(stats);
    table = "trial,attacker_distance,baseline_distance\n";
    for (const KnownInstanceTrial& r : stats.rows) {
      absl::StrAppend(&table, r.trial, ",", Num(r.attacker_distance), ",",
                      Num(r.baseline_distance), "\n");
    }
  } else if (type == "compliance") {
    ComplianceConfig g;
    g.learner = learner;
    if (g.learner.num_classes == 0) g.learner.num_classes = data.NumClasses();
    g.capacity = data.n;
    UA_ASSIGN(budget, c.GetInt("game.budget"));
    g.budget = static_cast<int>(budget);
    g.sessions = trials;
    g.seed = seed;
    g.workers = static_cast<int>(workers);
    const std::string& collector = c.Get("game.collector");
    if (collector == "ignoring") {
      g.collector = MakeIgnoringCollector;
    } else if (collector == "leaky") {
      g.collector = MakeLeakyCollector;
    } else if (collector != "honest") {
      return ConfigError("game.collector", "honest | ignoring | leaky");
    }
    Environment env;
    const std::string& kind = c.Get("attacker.kind");
    if (kind == "coin") {
      env = MakeCoinEnv();
    } else if (kind == "echo_reader") {
      env = MakeEchoReaderEnv(data);
    } else {
      UA_ASSIGN(attacker, BuildInferenceAttacker(c, data));
      env = MakeDiEnvAdapter(attacker, data);
    }
    UA_ASSIGN(stats, RunCompliance(g, env));
    result = ToJson(stats);
    table = "session,world,guess,trigger_step\n";
    for (const WorldOutcome& r : stats.rows) {
      absl::StrAppend(&table, r.session, ",", r.world, ",", r.guess, ",",
                      r.trigger_step, "\n");
    }
  } else {
    return ConfigError("game.type", absl::StrCat("unknown game '", type, "'"));
  }

  json assertions = json::array();
  const double value = Headline(result, type);
  for (const char* op : {"assert_min", "assert_max"}) {
    const std::string field = absl::StrCat("game.", op);
    if (!c.IsSet(field)) continue;
    UA_ASSIGN(threshold, c.GetDouble(field));
    const bool is_min = std::string_view(op) == "assert_min";
    const bool passed = is_min ? value >= threshold : value <= threshold;
    report.assertions_passed &= passed;
    assertions.push_back({{"metric", HeadlineName(result, type)},
                          {"op", is_min ? ">=" : "<="},
                          {"threshold", threshold},
                          {"value", value},
                          {"passed", passed}});
  }

  json config = json::object();
  for (const auto& [field, v] : c.values()) {
    const size_t dot = field.find('.');
    config[field.substr(0, dot)][field.substr(dot + 1)] = v;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  report.document = {
      {"schema_version", kReportSchemaVersion},
      {"tool", "unlearnaudit"},
      {"version", ToolVersion()},
      {"command", "run"},
      {"config", config},
      {"config_ini", c.ToIni()},
      {"seed", seed},
      {"game", type},
      {"headline", {{"metric", HeadlineName(result, type)}, {"value", value}}},
      {"result", result},
      {"assertions", assertions},
      {"assertions_passed", report.assertions_passed},
      {"wall_clock_seconds", seconds}};
  report.table_csv = std::move(table);
  return report;
}

}  // namespace unlearnaudit
