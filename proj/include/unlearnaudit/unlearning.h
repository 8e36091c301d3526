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

// Ideal deletion: retrain from scratch on the dataset without the deleted
// examples, with fresh (derived) randomness.

#ifndef UNLEARNAUDIT_UNLEARNING_H_
#define UNLEARNAUDIT_UNLEARNING_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "unlearnaudit/core.h"
#include "unlearnaudit/learners.h"

namespace unlearnaudit {

struct DeletionRequest {
  std::vector<size_t> targets;  // Distinct dataset indices, at least one.
};

struct DeletionResult {
  Dataset remaining;  // Original order, targets removed.
  ModelPtr model;
};

// Seed used for the retraining that follows a deletion.
uint64_t DeletionSeed(uint64_t master_seed, uint64_t trial);

// Dataset without the requested indices. Errors: IndexOutOfRange,
// InvalidArgument (empty or repeated targets), EmptyResult.
absl::StatusOr<Dataset> RemoveExamples(const Dataset& dataset,
                                       const DeletionRequest& request);

absl::StatusOr<DeletionResult> DeleteExamples(const LearnerSpec& spec,
                                              const Dataset& dataset,
                                              const DeletionRequest& request,
                                              uint64_t seed);

// Loss increases across the deletion of example `index`:
//   deleted:   l(h_del, e) - l(h, e)
//   remaining: mean over S \ {e} of l(h_del, e') - l(h, e')
struct LossIncrease {
  double deleted = 0.0;
  double remaining_mean = 0.0;
};

absl::StatusOr<LossIncrease> MeasureLossIncrease(const Model& before,
                                                 const Model& after,
                                                 const Dataset& dataset,
                                                 size_t index, LossKind loss);

}  // namespace unlearnaudit

#endif  // UNLEARNAUDIT_UNLEARNING_H_
