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

// Adversaries against ideal deletion. Every attack sees the models only
// through Oracles, and queries the before-deletion oracle strictly before
// the after-deletion one.
//
// Two surfaces are provided:
//   * free functions (DelInfExm, DelInsRec, ...) that run an attack given
//     both oracles at once, and
//   * two-phase attacker objects (InferenceAttacker, ReconstructionAttacker)
//     that the games drive step by step, closing the first oracle before
//     handing out the second.

#ifndef UNLEARNAUDIT_ATTACKS_H_
#define UNLEARNAUDIT_ATTACKS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "unlearnaudit/core.h"
#include "unlearnaudit/data.h"
#include "unlearnaudit/learners.h"
#include "unlearnaudit/random.h"

namespace unlearnaudit {

// The attacker's answer in an inference game. `tie_broken` is set when the
// decision statistic was exactly zero and a fair coin decided.
struct GuessBit {
  int value = 0;
  bool tie_broken = false;
};

// Sign rule shared by the inference attacks: 0 if stat > 0, 1 if stat < 0,
// coin otherwise.
GuessBit DecideBySign(double statistic, Rng& rng);

enum class MetricKind {
  kAbsDiff,            // |a - b| on reals.
  kL1Confidence,       // sum_c |p_c - q_c| on class distributions.
  kHamming,            // Differing coordinates of binary instances.
  kNormalizedHamming,  // Hamming / d, in [0, 1].
  kZeroOneExact,       // 1[a != b].
};

// Which part of an example a metric looks at.
enum class MetricScope { kExample, kInstance, kLabel };

struct DistanceMetric {
  MetricKind kind = MetricKind::kZeroOneExact;
  MetricScope scope = MetricScope::kExample;
};

const char* MetricKindName(MetricKind kind);
absl::StatusOr<MetricKind> ParseMetricKind(std::string_view name);

// AbsDiff compares real or sequence-probability predictions, L1Confidence
// compares class distributions, ZeroOneExact compares any two predictions.
absl::StatusOr<double> PredictionDistance(MetricKind kind, const Prediction& a,
                                          const Prediction& b);
absl::StatusOr<double> ExampleDistance(const DistanceMetric& metric,
                                       const Example& a, const Example& b);
double HammingDistance(const Instance& a, const Instance& b);

// ---------------------------------------------------------------------------
// Deletion inference.

// Loss-increase attack. alpha = delta(e0) - delta(e1) with
// delta(e) = l(h_del, e) - l(h, e); 2 queries per oracle.
absl::StatusOr<GuessBit> DelInfExm(const Example& e0, const Example& e1,
                                   Oracle& before, Oracle& after, LossKind loss,
                                   Rng& rng);

// Instance-only attack. beta = dis(h(x0), h_del(x0)) - dis(h(x1), h_del(x1));
// 2 queries per oracle.
absl::StatusOr<GuessBit> DelInfIns(const Instance& x0, const Instance& x1,
                                   Oracle& before, Oracle& after,
                                   MetricKind metric, Rng& rng);

// A membership-inference procedure M(e, h).
class MembershipInference {
 public:
  virtual ~MembershipInference() = default;
  // 1 if `e` looks like a training member of the oracle's model.
  virtual absl::StatusOr<int> Member(const Example& e, Oracle& oracle) = 0;
  // Larger means more member-like.
  virtual absl::StatusOr<double> Confidence(const Example& e,
                                            Oracle& oracle) = 0;
};

// Loss-threshold membership inference: member iff loss <= tau. Confidence
// is the negated loss.
class LossThresholdMi : public MembershipInference {
 public:
  LossThresholdMi(double tau, LossKind loss) : tau_(tau), loss_(loss) {}
  absl::StatusOr<int> Member(const Example& e, Oracle& oracle) override;
  absl::StatusOr<double> Confidence(const Example& e, Oracle& oracle) override;

  double tau() const { return tau_; }
  void set_tau(double tau) { tau_ = tau; }

 private:
  double tau_;
  LossKind loss_;
};

absl::StatusOr<int> MiThreshold(const Example& e, Oracle& oracle, double tau,
                                LossKind loss);

// Median loss of `holdout` under the oracle (non-member reference).
absl::StatusOr<double> CalibrateThreshold(const Dataset& holdout,
                                          Oracle& oracle, LossKind loss);

enum class ReductionMode { kLabel, kConfidence };

// Membership-to-deletion reduction. Label mode only queries the
// after-deletion model: (b0, b1) = (0, 1) -> 0, (1, 0) -> 1, coin otherwise.
// Confidence mode returns 0 iff e0's confidence dropped more than e1's.
absl::StatusOr<GuessBit> MiToDi(MembershipInference& mi, const Example& e0,
                                const Example& e1, Oracle& before,
                                Oracle& after, ReductionMode mode, Rng& rng);

// ---------------------------------------------------------------------------
// Reconstruction.

struct InstanceReconstruction {
  Instance instance;
  bool empty_disagreement = false;  // No aux point changed label.
  int64_t disagreement_size = 0;
};

// Coordinate-wise majority over the aux points whose predicted class changed
// across the deletion. Per-coordinate ties resolve to 0. |aux| queries per
// oracle.
absl::StatusOr<InstanceReconstruction> DelInsRec(
    Oracle& before, Oracle& after, const std::vector<Instance>& aux);

// Coordinate-wise majority of `points` (ties to 0); all-zeros when empty.
Instance CoordinateMajority(const std::vector<const Instance*>& points,
                            size_t dimension);

struct NGramDiffOptions {
  // Decreased iff ratio < median ratio - tolerance (or the deleted count
  // vanished).
  double tolerance = 1e-9;
  // Fidelity mode: h(g) > h_del(g), which every n-gram satisfies after a
  // deletion because all frequencies are renormalized.
  bool raw_rule = false;
  // Fragment queries per oracle allowed for full |D|^N enumeration. Above
  // it, N-grams are enumerated only where the before-model gives both
  // (N-1)-gram halves positive probability.
  int64_t query_cap = 30'000'000;
  // Estimate how many occurrences of each decreased N-gram were deleted.
  bool estimate_multiplicity = true;
};

struct DiffNode {
  std::vector<TokenId> gram;
  int multiplicity = 1;  // Estimated deleted occurrences.
};

// N-grams whose frequency dropped across the deletion, linked by
// (N-1)-token overlaps.
struct DiffGraph {
  int order = 0;
  std::vector<DiffNode> nodes;               // Sorted by gram.
  std::vector<std::vector<int>> successors;  // Sorted by target gram.
  std::vector<int> start_nodes;              // First token is <s>.
  int repeat_budget = 0;                     // sum(multiplicity - 1).
  bool pruned = false;
  int64_t queries_per_oracle = 0;
};

// Records fragment probabilities from the before-deletion model, then
// compares them against the after-deletion model. Splitting the two phases
// lets games close the first oracle before opening the second.
class NGramDiffer {
 public:
  NGramDiffer(const Dictionary& dictionary, int order,
              NGramDiffOptions options = {});

  // Errors: DictionaryTooLarge when even the pruned enumeration exceeds the
  // query cap.
  absl::Status ObserveBefore(Oracle& before);
  absl::StatusOr<DiffGraph> Compare(Oracle& after);

 private:
  absl::StatusOr<double> Fragment(Oracle& oracle,
                                  const std::vector<TokenId>& gram);

  int64_t vocabulary_;
  int order_;
  NGramDiffOptions options_;
  std::vector<std::vector<TokenId>> candidates_;
  std::vector<double> before_probs_;
  bool pruned_ = false;
  int64_t before_queries_ = 0;
};

absl::StatusOr<DiffGraph> NGramDiff(Oracle& before, Oracle& after,
                                    const Dictionary& dictionary, int order,
                                    const NGramDiffOptions& options = {});

// Builds edges and start nodes for a node set.
DiffGraph BuildDiffGraph(int order, std::vector<DiffNode> nodes);

struct PathSearchOptions {
  int max_repeats = 2;
  int64_t expansion_cap = 2'000'000;
};

// Shortest covering walk through the diff graph: every node visited at least
// min(multiplicity, 1 + max_repeats) times and at most 1 + max_repeats
// times; fewest total visits, then lexicographically smallest. Boundary
// tokens are stripped. NotFound when no covering walk exists;
// ResourceExhausted (SearchBudgetExceeded) past the expansion cap.
absl::StatusOr<std::vector<TokenId>> NGramPathSearch(
    const DiffGraph& graph, const PathSearchOptions& options = {});

// Distinct non-boundary tokens of the graph's nodes, ascending.
std::vector<TokenId> BagOfWords(const DiffGraph& graph);

// Class whose summed confidence fell the most across the deletion; ties go
// to the smallest class id.
absl::StatusOr<int> DelLblRec(Oracle& before, Oracle& after,
                              const std::vector<Instance>& probes,
                              int num_classes);

// Probes uniform over the per-feature bounding box of `reference`.
std::vector<Instance> BoundingBoxProbes(const Dataset& reference, int count,
                                        Rng& rng);

// y~ = y^ + lambda * (y^ - y^'), one query per oracle.
absl::StatusOr<double> InsRevLblRec(const Instance& x, Oracle& before,
                                    Oracle& after, double lambda);

// Simulates the known-instance game on attacker-sampled data for each
// lambda and returns the one with the smallest mean |y~ - y| (ties: the
// smallest lambda). Errors only on invalid input (empty grid).
absl::StatusOr<double> TuneLambda(const LearnerSpec& spec,
                                  const DatasetDistribution& attacker_data,
                                  const std::vector<double>& grid, int trials,
                                  uint64_t seed);

// ---------------------------------------------------------------------------
// Two-phase attacker objects.

// What the challenger reveals in the inference game. Hidden parts are left
// default-constructed.
struct Challenge {
  Example e0;
  Example e1;
  bool instances_revealed = true;
  bool labels_revealed = true;
};

class InferenceAttacker {
 public:
  virtual ~InferenceAttacker() = default;
  virtual std::string name() const = 0;
  virtual bool needs_instances() const { return true; }
  virtual bool needs_labels() const { return true; }
  virtual absl::Status ObserveBefore(const Challenge& challenge, Oracle& before,
                                     Rng& rng) = 0;
  virtual absl::StatusOr<GuessBit> GuessAfter(Oracle& after, Rng& rng) = 0;
};

// Builds a fresh attacker for one trial. The seed drives any auxiliary data
// the attacker samples for itself.
using InferenceAttackerFactory =
    std::function<absl::StatusOr<std::unique_ptr<InferenceAttacker>>(
        uint64_t seed)>;

struct ReconstructionGuess {
  std::optional<Instance> instance;
  std::optional<Label> label;
  std::vector<TokenId> tokens;  // Sentence guesses.
  bool failed = false;          // No confident answer (fallback used).
};

class ReconstructionAttacker {
 public:
  virtual ~ReconstructionAttacker() = default;
  virtual std::string name() const = 0;
  // Known-instance games reveal x_i before oracle access starts.
  virtual void RevealInstance(const Instance& /*x*/) {}
  virtual absl::Status ObserveBefore(Oracle& before, Rng& rng) = 0;
  virtual absl::StatusOr<ReconstructionGuess> GuessAfter(Oracle& after,
                                                         Rng& rng) = 0;
};

using ReconstructionAttackerFactory =
    std::function<absl::StatusOr<std::unique_ptr<ReconstructionAttacker>>(
        uint64_t seed)>;

std::unique_ptr<InferenceAttacker> MakeDelInfExm(LossKind loss);
std::unique_ptr<InferenceAttacker> MakeDelInfIns(MetricKind metric);
// Always answers 0 without querying.
std::unique_ptr<InferenceAttacker> MakeConstantGuess(int bit = 0);
// Loss-threshold MI reduction; tau is the median loss of `holdout` on the
// after-deletion model.
std::unique_ptr<InferenceAttacker> MakeMiThresholdReduction(Dataset holdout,
                                                            LossKind loss,
                                                            ReductionMode mode);
// Generic reduction over a caller-supplied membership procedure.
std::unique_ptr<InferenceAttacker> MakeMiReduction(
    std::shared_ptr<MembershipInference> mi, ReductionMode mode);
// Reconstruction-to-inference adapter: output 0 if dis(e0, rec) <= eps,
// else 1 if dis(e1, rec) <= eps, else a coin.
std::unique_ptr<InferenceAttacker> MakeRecToInf(
    std::unique_ptr<ReconstructionAttacker> rec, DistanceMetric metric,
    double eps);

std::unique_ptr<ReconstructionAttacker> MakeDelInsRec(
    std::vector<Instance> aux);
// The same majority attack with a single oracle standing in for both
// models, so no deletion signal is available (baseline).
std::unique_ptr<ReconstructionAttacker> MakeSingleOracleDelInsRec(
    std::vector<Instance> aux, Phase phase);
std::unique_ptr<ReconstructionAttacker> MakeNGramRec(
    const Dictionary& dictionary, int order, NGramDiffOptions diff = {},
    PathSearchOptions search = {});
std::unique_ptr<ReconstructionAttacker> MakeDelLblRec(
    std::vector<Instance> probes, int num_classes);
std::unique_ptr<ReconstructionAttacker> MakeInsRevLblRec(double lambda);

}  // namespace unlearnaudit

#endif  // UNLEARNAUDIT_ATTACKS_H_
