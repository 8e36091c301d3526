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

#include "unlearnaudit/unlearning.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "unlearnaudit/random.h"

namespace unlearnaudit {

uint64_t DeletionSeed(uint64_t master_seed, uint64_t trial) {
  return DeriveSeed(master_seed, trial, "del");
}

absl::StatusOr<Dataset> RemoveExamples(const Dataset& dataset,
                                       const DeletionRequest& request) {
  if (request.targets.empty()) {
    return absl::InvalidArgumentError("deletion request has no targets");
  }
  std::vector<bool> drop(dataset.size(), false);
  for (size_t t : request.targets) {
    if (t >= dataset.size()) {
      return absl::OutOfRangeError(absl::StrCat("IndexOutOfRange: index ", t,
                                                " in a dataset of size ",
                                                dataset.size()));
    }
    if (drop[t]) {
      return absl::InvalidArgumentError(
          absl::StrCat("deletion target ", t, " repeated"));
    }
    drop[t] = true;
  }
  if (request.targets.size() == dataset.size()) {
    return absl::InvalidArgumentError(
        "EmptyResult: deleting every example leaves nothing to train on");
  }
  Dataset out;
  out.provenance = dataset.provenance;
  out.examples.reserve(dataset.size() - request.targets.size());
  for (size_t i = 0; i < dataset.size(); ++i) {
    if (!drop[i]) out.examples.push_back(dataset.examples[i]);
  }
  return out;
}

absl::StatusOr<DeletionResult> DeleteExamples(const LearnerSpec& spec,
                                              const Dataset& dataset,
                                              const DeletionRequest& request,
                                              uint64_t seed) {
  absl::StatusOr<Dataset> remaining = RemoveExamples(dataset, request);
  if (!remaining.ok()) return remaining.status();
  absl::StatusOr<ModelPtr> model = Train(spec, *remaining, seed);
  if (!model.ok()) return model.status();
  return DeletionResult{*std::move(remaining), *std::move(model)};
}

absl::StatusOr<LossIncrease> MeasureLossIncrease(const Model& before,
                                                 const Model& after,
                                                 const Dataset& dataset,
                                                 size_t index, LossKind loss) {
  if (index >= dataset.size()) {
    return absl::OutOfRangeError("IndexOutOfRange: loss increase index");
  }
  if (dataset.size() < 2) {
    return absl::InvalidArgumentError("need at least two examples");
  }
  auto increase = [&](const Example& e) -> absl::StatusOr<double> {
    absl::StatusOr<Prediction> p0 = before.Predict(e.instance);
    if (!p0.ok()) return p0.status();
    absl::StatusOr<Prediction> p1 = after.Predict(e.instance);
    if (!p1.ok()) return p1.status();
    absl::StatusOr<double> l0 = EvaluateLoss(loss, *p0, e.label);
    if (!l0.ok()) return l0.status();
    absl::StatusOr<double> l1 = EvaluateLoss(loss, *p1, e.label);
    if (!l1.ok()) return l1.status();
    return *l1 - *l0;
  };
  LossIncrease out;
  absl::StatusOr<double> deleted = increase(dataset[index]);
  if (!deleted.ok()) return deleted.status();
  out.deleted = *deleted;
  double sum = 0.0;
  for (size_t i = 0; i < dataset.size(); ++i) {
    if (i == index) continue;
    absl::StatusOr<double> d = increase(dataset[i]);
    if (!d.ok()) return d.status();
    sum += *d;
  }
  out.remaining_mean = sum / static_cast<double>(dataset.size() - 1);
  return out;
}

}  // namespace unlearnaudit
