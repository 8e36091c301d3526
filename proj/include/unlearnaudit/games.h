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

// Security games: deletion inference, deletion reconstruction, and the
// known-instance label game, plus the statistics used to score them.
//
// Trials are independent. Trial t draws all of its randomness from seeds
// derived from (master seed, t), so results do not depend on the number of
// workers.

#ifndef UNLEARNAUDIT_GAMES_H_
#define UNLEARNAUDIT_GAMES_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "unlearnaudit/attacks.h"
#include "unlearnaudit/core.h"
#include "unlearnaudit/data.h"
#include "unlearnaudit/learners.h"

namespace unlearnaudit {

// 95% Wilson score interval.
std::pair<double, double> WilsonInterval(int64_t wins, int64_t trials);

// sqrt(p (1 - p) / n).
double BinomialStandardError(double p, int64_t n);

// 2 |a ∩ b| / (|a| + |b|) over multisets; 1 when both are empty.
double MultisetF1(std::span<const TokenId> a, std::span<const TokenId> b);

// Runs fn(0..count-1) on up to `workers` threads. Returns the first error by
// index, if any.
absl::Status ParallelFor(int64_t count, int workers,
                         const std::function<absl::Status(int64_t)>& fn);

struct GameVariant {
  bool instance_only = false;    // Attacker sees (x0, x1) only.
  bool label_only = false;       // Attacker sees (y0, y1) only.
  bool deletion_hiding = false;  // e1 is a fresh draw from the distribution.
  int batch_size = 1;            // Deleted batch and reference set size.
};

struct InferenceGameConfig {
  LearnerSpec learner;
  DatasetDistribution data;
  InferenceAttackerFactory attacker;
  int64_t trials = 1000;
  uint64_t seed = 0;
  GameVariant variant;
  int workers = 1;
};

struct InferenceTrial {
  int64_t trial = 0;
  int64_t i = 0;  // Index of e0 in S (-1 for a fresh draw).
  int64_t j = 0;  // Index of e1 in S (-1 for a fresh draw).
  int bit = 0;
  int guess = 0;
  bool tie_broken = false;
  bool collision = false;  // Fresh e1 equal to a member of S.
};

struct SuccessStats {
  int64_t wins = 0;
  int64_t trials = 0;  // Challenge pairs scored.
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double standard_error = 0.0;
  double mean_queries_before = 0.0;  // Per challenge pair.
  double mean_queries_after = 0.0;
  int64_t ties = 0;
  int64_t ones = 0;  // Challenges with b = 1.
  int64_t collisions = 0;
  std::string attacker;
  std::vector<InferenceTrial> rows;
};

SuccessStats Summarize(std::vector<InferenceTrial> rows, double queries_before,
                       double queries_after);

// Errors: InvalidArgument ("ConfigInvalid: ...") for inconsistent variants
// or attackers that need hidden challenge parts.
absl::StatusOr<SuccessStats> RunDeletionInference(
    const InferenceGameConfig& config);

struct ReconstructionGameConfig {
  LearnerSpec learner;
  DatasetDistribution data;
  ReconstructionAttackerFactory attacker;
  DistanceMetric metric;
  double eps = 0.0;
  int64_t trials = 1000;
  uint64_t seed = 0;
  int workers = 1;
};

struct ReconstructionTrial {
  int64_t trial = 0;
  int64_t index = 0;  // Deleted index.
  double distance = 0.0;
  double f1 = 0.0;  // Sequence guesses only.
  bool exact = false;
  bool failed = false;  // Attacker flagged a fallback answer.
};

struct RecStats {
  std::vector<double> distances;
  double eps = 0.0;
  double rho_at_eps = 0.0;
  // 1 - mean normalized distance (Hamming / d for Hamming); NaN for
  // unbounded metrics.
  double expected_accuracy = 0.0;
  double exact_match = 0.0;
  double mean_f1 = 0.0;
  bool sequence = false;
  int64_t failures = 0;
  int64_t trials = 0;
  double mean_queries_before = 0.0;
  double mean_queries_after = 0.0;
  std::string attacker;
  std::vector<ReconstructionTrial> rows;
};

absl::StatusOr<RecStats> RunReconstruction(
    const ReconstructionGameConfig& config);

struct KnownInstanceConfig {
  LearnerSpec learner;
  DatasetDistribution data;
  // Fixed lambda; when empty it is tuned on attacker-sampled data.
  std::optional<double> lambda;
  std::vector<double> lambda_grid;
  int64_t tuning_trials = 200;
  int64_t trials = 500;
  uint64_t seed = 0;
  int workers = 1;
};

struct KnownInstanceTrial {
  int64_t trial = 0;
  double attacker_distance = 0.0;  // |y~ - y|
  double baseline_distance = 0.0;  // min(|h(x) - y|, |h_del(x) - y|)
};

struct KnownInstanceStats {
  double lambda = 0.0;
  double mean_attacker = 0.0;
  double mean_baseline = 0.0;
  double ratio = 0.0;  // mean_attacker / mean_baseline
  std::vector<KnownInstanceTrial> rows;
};

absl::StatusOr<KnownInstanceStats> RunKnownInstance(
    const KnownInstanceConfig& config);

}  // namespace unlearnaudit

#endif  // UNLEARNAUDIT_GAMES_H_
