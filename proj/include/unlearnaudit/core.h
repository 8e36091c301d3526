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

// Shared domain types: instances, labels, examples, datasets, predictions,
// losses, and the query-counted oracle through which attackers see a model.

#ifndef UNLEARNAUDIT_CORE_H_
#define UNLEARNAUDIT_CORE_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace unlearnaudit {

using TokenId = int32_t;

// Reserved dictionary ids for sentence boundaries.
inline constexpr TokenId kStartToken = 0;
inline constexpr TokenId kEndToken = 1;

enum class InstanceKind { kDense, kBinary, kTokens };

const char* InstanceKindName(InstanceKind kind);

// A point of the instance space. Dense and binary instances store their
// coordinates as doubles (binary ones hold only 0/1). Token instances are
// either whole sentences or fixed-length fragments (N-gram queries).
class Instance {
 public:
  static Instance Dense(std::vector<double> coords);
  // Fails with InvalidArgument if any entry is not 0 or 1.
  static absl::StatusOr<Instance> Binary(std::span<const int> bits);
  static Instance BinaryUnchecked(std::vector<double> bits);
  static Instance Sentence(std::vector<TokenId> tokens);
  static Instance Fragment(std::vector<TokenId> tokens);

  InstanceKind kind() const { return kind_; }
  bool is_vector() const { return kind_ != InstanceKind::kTokens; }
  bool is_fragment() const { return fragment_; }
  size_t dimension() const { return coords_.size(); }
  const std::vector<double>& coords() const { return coords_; }
  const std::vector<TokenId>& tokens() const { return tokens_; }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.kind_ == b.kind_ && a.fragment_ == b.fragment_ &&
           a.coords_ == b.coords_ && a.tokens_ == b.tokens_;
  }

 private:
  InstanceKind kind_ = InstanceKind::kDense;
  bool fragment_ = false;
  std::vector<double> coords_;
  std::vector<TokenId> tokens_;
};

enum class LabelKind { kReal, kClass, kSequenceProb };

struct Label {
  LabelKind kind = LabelKind::kReal;
  double value = 0.0;  // kReal and kSequenceProb
  int class_id = -1;   // kClass

  static Label Real(double v) { return {LabelKind::kReal, v, -1}; }
  static Label Class(int id) { return {LabelKind::kClass, 0.0, id}; }
  static Label SequenceProb(double p) {
    return {LabelKind::kSequenceProb, p, -1};
  }

  friend bool operator==(const Label& a, const Label& b) {
    return a.kind == b.kind && a.value == b.value && a.class_id == b.class_id;
  }
};

struct Example {
  Instance instance;
  Label label;

  friend bool operator==(const Example& a, const Example& b) {
    return a.instance == b.instance && a.label == b.label;
  }
};

// Ordered multiset of examples. Index i names the same example until a
// deletion rebuilds the dataset; duplicates are allowed.
struct Dataset {
  std::vector<Example> examples;
  std::string provenance;

  size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
  const Example& operator[](size_t i) const { return examples[i]; }

  // Number of classes referenced by class labels (max id + 1), 0 otherwise.
  int NumClasses() const;
  // Kinds must agree across all examples; checked by ValidateDataset.
  InstanceKind instance_kind() const;
  LabelKind label_kind() const;
};

absl::Status ValidateDataset(const Dataset& dataset);

enum class PredictionKind { kRealValue, kClassDistribution, kSequenceProb };

struct Prediction {
  PredictionKind kind = PredictionKind::kRealValue;
  double value = 0.0;                // kRealValue and kSequenceProb
  std::vector<double> distribution;  // kClassDistribution

  static Prediction RealValue(double v) {
    return {PredictionKind::kRealValue, v, {}};
  }
  static Prediction Distribution(std::vector<double> probs) {
    return {PredictionKind::kClassDistribution, 0.0, std::move(probs)};
  }
  static Prediction SequenceProb(double p) {
    return {PredictionKind::kSequenceProb, p, {}};
  }

  // Class with the highest probability; ties go to the smallest class id.
  int Argmax() const;
  double ProbabilityOf(int class_id) const;

  friend bool operator==(const Prediction& a, const Prediction& b) {
    return a.kind == b.kind && a.value == b.value &&
           a.distribution == b.distribution;
  }
};

// Checks the distribution invariants (entries >= 0, sum 1 +- 1e-9).
absl::Status ValidatePrediction(const Prediction& prediction);

// A trained predictor. Implementations are immutable once built and may be
// shared read-only across threads.
class Model {
 public:
  virtual ~Model() = default;
  virtual InstanceKind instance_kind() const = 0;
  virtual absl::StatusOr<Prediction> Predict(const Instance& x) const = 0;
  virtual std::string Describe() const = 0;
};

using ModelPtr = std::shared_ptr<const Model>;

enum class LossKind { kSquared, kZeroOne, kNegLogLikelihood };

const char* LossKindName(LossKind kind);
absl::StatusOr<LossKind> ParseLossKind(std::string_view name);

inline constexpr double kProbabilityFloor = 1e-12;

absl::StatusOr<double> EvaluateLoss(LossKind kind, const Prediction& prediction,
                                    const Label& label);

// Mean loss of `model` over `dataset`.
absl::StatusOr<double> EmpiricalRisk(const Model& model, const Dataset& dataset,
                                     LossKind kind);

enum class Phase { kBeforeDeletion, kAfterDeletion };

// Shared between the two oracles of one game trial. Advancing it closes the
// before-deletion oracle.
class PhaseGate {
 public:
  Phase current() const { return current_; }
  void Advance() { current_ = Phase::kAfterDeletion; }
  void Revoke() { revoked_ = true; }
  bool revoked() const { return revoked_; }

 private:
  Phase current_ = Phase::kBeforeDeletion;
  bool revoked_ = false;
};

// Query-counted handle to a model. Attackers see predictions only.
class Oracle {
 public:
  Oracle(ModelPtr model, Phase phase, std::shared_ptr<PhaseGate> gate);
  // Standalone oracle with its own always-open gate.
  explicit Oracle(ModelPtr model, Phase phase = Phase::kBeforeDeletion);

  // Errors: InvalidArgument (kind mismatch), FailedPrecondition (phase
  // closed). Only successful queries are counted.
  absl::StatusOr<Prediction> Query(const Instance& x);

  Phase phase() const { return phase_; }
  int64_t query_count() const { return query_count_; }
  InstanceKind instance_kind() const { return model_->instance_kind(); }

 private:
  ModelPtr model_;
  Phase phase_;
  std::shared_ptr<PhaseGate> gate_;
  int64_t query_count_ = 0;
};

// Error constructors. The error name leads the message so callers and
// reports can match on it.
absl::Status KindMismatch(std::string_view what);
absl::Status PhaseClosed();
bool IsPhaseClosed(const absl::Status& status);

}  // namespace unlearnaudit

#endif  // UNLEARNAUDIT_CORE_H_
