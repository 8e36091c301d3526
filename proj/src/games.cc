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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "status_macros.h"
#include "unlearnaudit/random.h"
#include "unlearnaudit/unlearning.h"

namespace unlearnaudit {

namespace {

constexpr double kZ95 = 1.959963984540054;

absl::Status ConfigInvalid(std::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("ConfigInvalid: ", std::string(what)));
}

// Classifier widths follow the distribution, not the sampled dataset.
LearnerSpec PinClasses(LearnerSpec spec, const DatasetDistribution& data) {
  if (spec.num_classes == 0) spec.num_classes = data.NumClasses();
  return spec;
}

// Removes one copy of `e` (lowest index) if present.
Dataset RemoveByValue(const Dataset& s, const Example& e, bool* removed) {
  Dataset out;
  out.provenance = s.provenance;
  *removed = false;
  for (const Example& x : s.examples) {
    if (!*removed && x == e) {
      *removed = true;
      continue;
    }
    out.examples.push_back(x);
  }
  return out;
}

}  // namespace

std::pair<double, double> WilsonInterval(int64_t wins, int64_t trials) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(wins) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      kZ95 / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double BinomialStandardError(double p, int64_t n) {
  if (n <= 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

double MultisetF1(std::span<const TokenId> a, std::span<const TokenId> b) {
  if (a.empty() && b.empty()) return 1.0;
  std::map<TokenId, int64_t> counts;
  for (TokenId t : a) ++counts[t];
  int64_t common = 0;
  for (TokenId t : b) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  return 2.0 * static_cast<double>(common) /
         static_cast<double>(a.size() + b.size());
}

absl::Status ParallelFor(int64_t count, int workers,
                         const std::function<absl::Status(int64_t)>& fn) {
  std::vector<absl::Status> status(count);
  const int threads = static_cast<int>(
      std::clamp<int64_t>(workers, 1, std::max<int64_t>(count, 1)));
  if (threads == 1) {
    for (int64_t t = 0; t < count; ++t) {
      status[t] = fn(t);
      if (!status[t].ok()) return status[t];
    }
    return absl::OkStatus();
  }
  std::atomic<int64_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int64_t t = next++; t < count; t = next++) status[t] = fn(t);
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& s : status) {
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

SuccessStats Summarize(std::vector<InferenceTrial> rows, double queries_before,
                       double queries_after) {
  SuccessStats stats;
  stats.trials = static_cast<int64_t>(rows.size());
  for (const InferenceTrial& r : rows) {
    stats.wins += r.guess == r.bit;
    stats.ties += r.tie_broken;
    stats.ones += r.bit;
    stats.collisions += r.collision;
  }
  if (stats.trials > 0) {
    stats.estimate = static_cast<double>(stats.wins) / stats.trials;
    stats.mean_queries_before = queries_before / stats.trials;
    stats.mean_queries_after = queries_after / stats.trials;
  }
  std::tie(stats.ci_low, stats.ci_high) =
      WilsonInterval(stats.wins, stats.trials);
  stats.standard_error = BinomialStandardError(stats.estimate, stats.trials);
  stats.rows = std::move(rows);
  return stats;
}

absl::StatusOr<SuccessStats> RunDeletionInference(
    const InferenceGameConfig& config) {
  const GameVariant& v = config.variant;
  if (config.trials < 1) return ConfigInvalid("trials must be >= 1");
  if (!config.attacker) return ConfigInvalid("attacker missing");
  if (v.instance_only && v.label_only) {
    return ConfigInvalid("instance_only and label_only are exclusive");
  }
  if (v.batch_size < 1) return ConfigInvalid("batch_size must be >= 1");
  if (v.deletion_hiding && v.batch_size != 1) {
    return ConfigInvalid("deletion_hiding needs batch_size = 1");
  }
  UA_RETURN_IF_ERROR(ValidateSpec(config.learner));
  const LearnerSpec spec = PinClasses(config.learner, config.data);

  struct TrialResult {
    std::vector<InferenceTrial> rows;
    int64_t before_queries = 0;
    int64_t after_queries = 0;
  };
  std::vector<TrialResult> results(config.trials);
  std::string attacker_name;
  std::mutex name_mu;

  auto run_trial = [&](int64_t t) -> absl::Status {
    const uint64_t seed = config.seed;
    UA_ASSIGN(s, config.data.Sample(DeriveSeed(seed, t, "data")));
    const int64_t n = static_cast<int64_t>(s.size());
    const int k = v.batch_size;
    Rng pick(DeriveSeed(seed, t, "pick"));
    Rng bits(DeriveSeed(seed, t, "bit"));
    Rng coin(DeriveSeed(seed, t, "coin"));

    // Deleted batch and reference set (single deletion: one of each).
    std::vector<int64_t> deleted, reference;
    std::optional<Example> fresh;
    bool collision = false;
    if (v.deletion_hiding) {
      if (n < 1) return ConfigInvalid("dataset too small");
      deleted.push_back(static_cast<int64_t>(pick.UniformInt(n)));
      UA_ASSIGN(f, config.data.SampleOne(DeriveSeed(seed, t, "fresh")));
      for (const Example& e : s.examples) collision |= (e == f);
      fresh = std::move(f);
    } else {
      if (n < 2 * k) {
        return ConfigInvalid(absl::StrCat("dataset of size ", n,
                                          " cannot supply ", 2 * k,
                                          " challenge examples"));
      }
      auto idx = pick.SampleWithoutReplacement(n, 2 * k);
      deleted.assign(idx.begin(), idx.begin() + k);
      reference.assign(idx.begin() + k, idx.end());
    }

    UA_ASSIGN(h, Train(spec, s, DeriveSeed(seed, t, "train")));
    auto gate = std::make_shared<PhaseGate>();
    Oracle before(h, Phase::kBeforeDeletion, gate);

    struct Pair {
      Challenge challenge;
      std::unique_ptr<InferenceAttacker> attacker;
      InferenceTrial row;
    };
    std::vector<Pair> pairs;
    const uint64_t attacker_seed = DeriveSeed(seed, t, "attacker");
    auto hide = [&](Challenge& c) {
      if (v.instance_only) {
        c.e0.label = Label();
        c.e1.label = Label();
        c.labels_revealed = false;
      }
      if (v.label_only) {
        c.e0.instance = Instance();
        c.e1.instance = Instance();
        c.instances_revealed = false;
      }
    };
    if (v.deletion_hiding) {
      Pair p;
      p.challenge.e0 = s[deleted[0]];
      p.challenge.e1 = *fresh;
      p.row = {t, deleted[0], -1, bits.Bit(), 0, false, collision};
      pairs.push_back(std::move(p));
    } else {
      for (int64_t a : deleted) {
        for (int64_t r : reference) {
          Pair p;
          const int b = bits.Bit();
          const int64_t i = b == 0 ? a : r;
          const int64_t j = b == 0 ? r : a;
          p.challenge.e0 = s[i];
          p.challenge.e1 = s[j];
          p.row = {t, i, j, b, 0, false, false};
          pairs.push_back(std::move(p));
        }
      }
    }
    for (size_t q = 0; q < pairs.size(); ++q) {
      Pair& p = pairs[q];
      hide(p.challenge);
      UA_ASSIGN(adv, config.attacker(DeriveSeed(attacker_seed, q, "pair")));
      if ((v.instance_only && adv->needs_labels()) ||
          (v.label_only && adv->needs_instances())) {
        return ConfigInvalid(absl::StrCat("attacker ", adv->name(),
                                          " needs hidden challenge parts"));
      }
      if (t == 0 && q == 0) {
        std::lock_guard<std::mutex> lock(name_mu);
        attacker_name = adv->name();
      }
      UA_RETURN_IF_ERROR(adv->ObserveBefore(p.challenge, before, coin));
      p.attacker = std::move(adv);
    }
    gate->Advance();

    // Ideal deletion.
    ModelPtr h_del;
    const uint64_t del_seed = DeletionSeed(seed, t);
    if (v.deletion_hiding) {
      const int b = pairs[0].row.bit;
      if (b == 0) {
        DeletionRequest req{{static_cast<size_t>(deleted[0])}};
        UA_ASSIGN(del, DeleteExamples(spec, s, req, del_seed));
        h_del = del.model;
      } else {
        bool removed = false;
        Dataset rest = RemoveByValue(s, *fresh, &removed);
        if (rest.empty()) return ConfigInvalid("deletion empties the dataset");
        UA_ASSIGN(m, Train(spec, rest, del_seed));
        h_del = m;
      }
    } else {
      DeletionRequest req;
      for (int64_t a : deleted) req.targets.push_back(static_cast<size_t>(a));
      UA_ASSIGN(del, DeleteExamples(spec, s, req, del_seed));
      h_del = del.model;
    }
    Oracle after(h_del, Phase::kAfterDeletion, gate);
    for (Pair& p : pairs) {
      UA_ASSIGN(g, p.attacker->GuessAfter(after, coin));
      p.row.guess = g.value;
      p.row.tie_broken = g.tie_broken;
    }
    gate->Revoke();
    TrialResult& out = results[t];
    for (Pair& p : pairs) out.rows.push_back(p.row);
    out.before_queries = before.query_count();
    out.after_queries = after.query_count();
    return absl::OkStatus();
  };
  UA_RETURN_IF_ERROR(ParallelFor(config.trials, config.workers, run_trial));

  std::vector<InferenceTrial> rows;
  double qb = 0, qa = 0;
  for (TrialResult& r : results) {
    qb += r.before_queries;
    qa += r.after_queries;
    for (auto& row : r.rows) rows.push_back(row);
  }
  SuccessStats stats = Summarize(std::move(rows), qb, qa);
  stats.attacker = attacker_name;
  return stats;
}

namespace {

double NormalizedDistance(const DistanceMetric& metric, double distance,
                          size_t dimension) {
  switch (metric.kind) {
    case MetricKind::kHamming:
      return dimension == 0 ? 0.0 : distance / static_cast<double>(dimension);
    case MetricKind::kNormalizedHamming:
    case MetricKind::kZeroOneExact:
      return distance;
    case MetricKind::kAbsDiff:
    case MetricKind::kL1Confidence:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

absl::StatusOr<RecStats> RunReconstruction(
    const ReconstructionGameConfig& config) {
  if (config.trials < 1) return ConfigInvalid("trials must be >= 1");
  if (!config.attacker) return ConfigInvalid("attacker missing");
  UA_RETURN_IF_ERROR(ValidateSpec(config.learner));
  const LearnerSpec spec = PinClasses(config.learner, config.data);

  struct TrialResult {
    ReconstructionTrial row;
    double normalized = 0.0;
    int64_t before_queries = 0;
    int64_t after_queries = 0;
    bool sequence = false;
  };
  std::vector<TrialResult> results(config.trials);
  std::string attacker_name;
  std::mutex name_mu;

  auto run_trial = [&](int64_t t) -> absl::Status {
    const uint64_t seed = config.seed;
    UA_ASSIGN(s, config.data.Sample(DeriveSeed(seed, t, "data")));
    Rng pick(DeriveSeed(seed, t, "pick"));
    Rng coin(DeriveSeed(seed, t, "coin"));
    const size_t i = pick.UniformInt(s.size());
    UA_ASSIGN(h, Train(spec, s, DeriveSeed(seed, t, "train")));
    UA_ASSIGN(adv, config.attacker(DeriveSeed(seed, t, "attacker")));
    if (t == 0) {
      std::lock_guard<std::mutex> lock(name_mu);
      attacker_name = adv->name();
    }
    auto gate = std::make_shared<PhaseGate>();
    Oracle before(h, Phase::kBeforeDeletion, gate);
    UA_RETURN_IF_ERROR(adv->ObserveBefore(before, coin));
    gate->Advance();
    UA_ASSIGN(del, DeleteExamples(spec, s, DeletionRequest{{i}},
                                  DeletionSeed(seed, t)));
    Oracle after(del.model, Phase::kAfterDeletion, gate);
    UA_ASSIGN(guess, adv->GuessAfter(after, coin));
    gate->Revoke();

    const Example& target = s[i];
    TrialResult& out = results[t];
    out.row.trial = t;
    out.row.index = static_cast<int64_t>(i);
    out.row.failed = guess.failed;
    out.before_queries = before.query_count();
    out.after_queries = after.query_count();
    Example as_example;
    if (guess.instance.has_value()) {
      as_example.instance = *guess.instance;
    } else if (target.instance.kind() == InstanceKind::kTokens) {
      as_example.instance = Instance::Sentence(guess.tokens);
    }
    if (guess.label.has_value()) as_example.label = *guess.label;
    if (target.instance.kind() == InstanceKind::kTokens) {
      out.sequence = true;
      out.row.f1 = MultisetF1(guess.tokens, target.instance.tokens());
      out.row.exact = guess.tokens == target.instance.tokens();
      as_example.label = target.label;
    }
    UA_ASSIGN(d, ExampleDistance(config.metric, target, as_example));
    out.row.distance = d;
    if (!out.sequence) out.row.exact = d == 0.0;
    out.normalized =
        NormalizedDistance(config.metric, d, target.instance.dimension());
    return absl::OkStatus();
  };
  UA_RETURN_IF_ERROR(ParallelFor(config.trials, config.workers, run_trial));

  RecStats stats;
  stats.eps = config.eps;
  stats.trials = config.trials;
  stats.attacker = attacker_name;
  double within = 0, normalized = 0, exact = 0, f1 = 0, qb = 0, qa = 0;
  for (const TrialResult& r : results) {
    stats.distances.push_back(r.row.distance);
    stats.rows.push_back(r.row);
    within += r.row.distance <= config.eps;
    normalized += r.normalized;
    exact += r.row.exact;
    f1 += r.row.f1;
    stats.failures += r.row.failed;
    stats.sequence |= r.sequence;
    qb += r.before_queries;
    qa += r.after_queries;
  }
  const double n = static_cast<double>(config.trials);
  stats.rho_at_eps = within / n;
  stats.expected_accuracy = 1.0 - normalized / n;
  stats.exact_match = exact / n;
  stats.mean_f1 = stats.sequence ? f1 / n : 0.0;
  stats.mean_queries_before = qb / n;
  stats.mean_queries_after = qa / n;
  return stats;
}

absl::StatusOr<KnownInstanceStats> RunKnownInstance(
    const KnownInstanceConfig& config) {
  if (config.trials < 1) return ConfigInvalid("trials must be >= 1");
  UA_RETURN_IF_ERROR(ValidateSpec(config.learner));
  KnownInstanceStats stats;
  if (config.lambda.has_value()) {
    if (*config.lambda < 0) return ConfigInvalid("lambda must be >= 0");
    stats.lambda = *config.lambda;
  } else {
    if (config.lambda_grid.empty()) return ConfigInvalid("empty lambda grid");
    UA_ASSIGN(lambda,
              TuneLambda(config.learner, config.data, config.lambda_grid,
                         static_cast<int>(config.tuning_trials),
                         DeriveSeed(config.seed, 0, "tune")));
    stats.lambda = lambda;
  }
  stats.rows.resize(config.trials);
  auto run_trial = [&](int64_t t) -> absl::Status {
    const uint64_t seed = config.seed;
    UA_ASSIGN(s, config.data.Sample(DeriveSeed(seed, t, "data")));
    Rng pick(DeriveSeed(seed, t, "pick"));
    Rng coin(DeriveSeed(seed, t, "coin"));
    const size_t i = pick.UniformInt(s.size());
    UA_ASSIGN(h, Train(config.learner, s, DeriveSeed(seed, t, "train")));
    auto adv = MakeInsRevLblRec(stats.lambda);
    adv->RevealInstance(s[i].instance);
    auto gate = std::make_shared<PhaseGate>();
    Oracle before(h, Phase::kBeforeDeletion, gate);
    UA_RETURN_IF_ERROR(adv->ObserveBefore(before, coin));
    gate->Advance();
    UA_ASSIGN(del, DeleteExamples(config.learner, s, DeletionRequest{{i}},
                                  DeletionSeed(seed, t)));
    Oracle after(del.model, Phase::kAfterDeletion, gate);
    UA_ASSIGN(guess, adv->GuessAfter(after, coin));
    const double y = s[i].label.value;
    UA_ASSIGN(p, h->Predict(s[i].instance));
    UA_ASSIGN(q, del.model->Predict(s[i].instance));
    KnownInstanceTrial& row = stats.rows[t];
    row.trial = t;
    row.attacker_distance = std::abs(guess.label->value - y);
    row.baseline_distance =
        std::min(std::abs(p.value - y), std::abs(q.value - y));
    return absl::OkStatus();
  };
  UA_RETURN_IF_ERROR(ParallelFor(config.trials, config.workers, run_trial));
  for (const auto& r : stats.rows) {
    stats.mean_attacker += r.attacker_distance;
    stats.mean_baseline += r.baseline_distance;
  }
  stats.mean_attacker /= config.trials;
  stats.mean_baseline /= config.trials;
  if (stats.mean_baseline > 0) {
    stats.ratio = stats.mean_attacker / stats.mean_baseline;
  } else {
    stats.ratio =
        stats.mean_attacker > 0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  return stats;
}

}  // namespace unlearnaudit
