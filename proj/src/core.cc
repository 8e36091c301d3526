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

#include "unlearnaudit/core.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"

namespace unlearnaudit {

const char* InstanceKindName(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kDense:
      return "dense";
    case InstanceKind::kBinary:
      return "binary";
    case InstanceKind::kTokens:
      return "tokens";
  }
  return "unknown";
}

Instance Instance::Dense(std::vector<double> coords) {
  Instance x;
  x.kind_ = InstanceKind::kDense;
  x.coords_ = std::move(coords);
  return x;
}

absl::StatusOr<Instance> Instance::Binary(std::span<const int> bits) {
  std::vector<double> coords;
  coords.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("binary instance entry must be 0 or 1, got ", b));
    }
    coords.push_back(static_cast<double>(b));
  }
  return BinaryUnchecked(std::move(coords));
}

Instance Instance::BinaryUnchecked(std::vector<double> bits) {
  Instance x;
  x.kind_ = InstanceKind::kBinary;
  x.coords_ = std::move(bits);
  return x;
}

Instance Instance::Sentence(std::vector<TokenId> tokens) {
  Instance x;
  x.kind_ = InstanceKind::kTokens;
  x.tokens_ = std::move(tokens);
  return x;
}

Instance Instance::Fragment(std::vector<TokenId> tokens) {
  Instance x = Sentence(std::move(tokens));
  x.fragment_ = true;
  return x;
}

int Dataset::NumClasses() const {
  int max_id = -1;
  for (const Example& e : examples) {
    if (e.label.kind == LabelKind::kClass) {
      max_id = std::max(max_id, e.label.class_id);
    }
  }
  return max_id + 1;
}

InstanceKind Dataset::instance_kind() const {
  return examples.empty() ? InstanceKind::kDense
                          : examples.front().instance.kind();
}

LabelKind Dataset::label_kind() const {
  return examples.empty() ? LabelKind::kReal : examples.front().label.kind;
}

absl::Status ValidateDataset(const Dataset& dataset) {
  if (dataset.empty()) {
    return absl::InvalidArgumentError("EmptyDataset: dataset has no examples");
  }
  const Example& first = dataset.examples.front();
  for (size_t i = 0; i < dataset.size(); ++i) {
    const Example& e = dataset.examples[i];
    if (e.instance.kind() != first.instance.kind() ||
        e.label.kind != first.label.kind) {
      return KindMismatch(
          absl::StrCat("example ", i, " differs in kind from example 0"));
    }
    if (e.instance.is_vector()) {
      if (e.instance.dimension() == 0 ||
          e.instance.dimension() != first.instance.dimension()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "example ", i, " has dimension ", e.instance.dimension(),
            ", expected ", first.instance.dimension(), " (>= 1)"));
      }
    }
    if (e.label.kind == LabelKind::kClass && e.label.class_id < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("example ", i, " has a negative class id"));
    }
  }
  return absl::OkStatus();
}

int Prediction::Argmax() const {
  if (distribution.empty()) return -1;
  return static_cast<int>(
      std::max_element(distribution.begin(), distribution.end()) -
      distribution.begin());
}

double Prediction::ProbabilityOf(int class_id) const {
  if (class_id < 0 || class_id >= static_cast<int>(distribution.size())) {
    return 0.0;
  }
  return distribution[class_id];
}

absl::Status ValidatePrediction(const Prediction& prediction) {
  switch (prediction.kind) {
    case PredictionKind::kRealValue:
      return absl::OkStatus();
    case PredictionKind::kSequenceProb:
      if (prediction.value < 0.0 || prediction.value > 1.0) {
        return absl::InvalidArgumentError("sequence probability outside [0,1]");
      }
      return absl::OkStatus();
    case PredictionKind::kClassDistribution: {
      double sum = 0.0;
      for (double p : prediction.distribution) {
        if (p < 0.0) {
          return absl::InvalidArgumentError("negative class probability");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        return absl::InvalidArgumentError(
            absl::StrCat("class distribution sums to ", sum));
      }
      return absl::OkStatus();
    }
  }
  return absl::OkStatus();
}

const char* LossKindName(LossKind kind) {
  switch (kind) {
    case LossKind::kSquared:
      return "squared";
    case LossKind::kZeroOne:
      return "zero_one";
    case LossKind::kNegLogLikelihood:
      return "nll";
  }
  return "unknown";
}

absl::StatusOr<LossKind> ParseLossKind(std::string_view name) {
  if (name == "squared") return LossKind::kSquared;
  if (name == "zero_one") return LossKind::kZeroOne;
  if (name == "nll") return LossKind::kNegLogLikelihood;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown loss '", std::string(name), "' (squared, zero_one, nll)"));
}

absl::StatusOr<double> EvaluateLoss(LossKind kind, const Prediction& prediction,
                                    const Label& label) {
  switch (kind) {
    case LossKind::kSquared: {
      if (prediction.kind == PredictionKind::kClassDistribution ||
          label.kind == LabelKind::kClass) {
        break;
      }
      const double diff = prediction.value - label.value;
      return diff * diff;
    }
    case LossKind::kZeroOne:
      if (prediction.kind != PredictionKind::kClassDistribution ||
          label.kind != LabelKind::kClass) {
        break;
      }
      return prediction.Argmax() == label.class_id ? 0.0 : 1.0;
    case LossKind::kNegLogLikelihood:
      if (prediction.kind != PredictionKind::kClassDistribution ||
          label.kind != LabelKind::kClass) {
        break;
      }
      return -std::log(std::max(prediction.ProbabilityOf(label.class_id),
                                kProbabilityFloor));
  }
  return absl::InvalidArgumentError(
      absl::StrCat("IncompatibleKinds: loss ", LossKindName(kind),
                   " does not apply to this prediction/label pair"));
}

absl::StatusOr<double> EmpiricalRisk(const Model& model, const Dataset& dataset,
                                     LossKind kind) {
  if (dataset.empty()) {
    return absl::InvalidArgumentError(
        "EmptyDataset: empirical risk of nothing");
  }
  double total = 0.0;
  for (const Example& e : dataset.examples) {
    absl::StatusOr<Prediction> p = model.Predict(e.instance);
    if (!p.ok()) return p.status();
    absl::StatusOr<double> loss = EvaluateLoss(kind, *p, e.label);
    if (!loss.ok()) return loss.status();
    total += *loss;
  }
  return total / static_cast<double>(dataset.size());
}

Oracle::Oracle(ModelPtr model, Phase phase, std::shared_ptr<PhaseGate> gate)
    : model_(std::move(model)), phase_(phase), gate_(std::move(gate)) {}

Oracle::Oracle(ModelPtr model, Phase phase)
    : model_(std::move(model)),
      phase_(phase),
      gate_(std::make_shared<PhaseGate>()) {
  if (phase == Phase::kAfterDeletion) gate_->Advance();
}

absl::StatusOr<Prediction> Oracle::Query(const Instance& x) {
  if (gate_->revoked() || gate_->current() != phase_) return PhaseClosed();
  if (x.kind() != model_->instance_kind()) {
    return KindMismatch(absl::StrCat(
        "oracle serves ", InstanceKindName(model_->instance_kind()),
        " instances, got ", InstanceKindName(x.kind())));
  }
  ++query_count_;
  return model_->Predict(x);
}

absl::Status KindMismatch(std::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("KindMismatch: ", std::string(what)));
}

absl::Status PhaseClosed() {
  return absl::FailedPreconditionError(
      "PhaseClosed: this oracle is no longer available");
}

bool IsPhaseClosed(const absl::Status& status) {
  return absl::IsFailedPrecondition(status) &&
         absl::StartsWith(status.message(), "PhaseClosed");
}

}  // namespace unlearnaudit
