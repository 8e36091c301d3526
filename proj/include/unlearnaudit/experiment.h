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

// Resolves an ExperimentConfig into a game, runs it, and renders the
// report (JSON) and the flat per-trial table (CSV).

#ifndef UNLEARNAUDIT_EXPERIMENT_H_
#define UNLEARNAUDIT_EXPERIMENT_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "unlearnaudit/compliance.h"
#include "unlearnaudit/config.h"
#include "unlearnaudit/data.h"
#include "unlearnaudit/games.h"
#include "unlearnaudit/learners.h"

namespace unlearnaudit {

inline constexpr int kReportSchemaVersion = 1;
const char* ToolVersion();

// $UNLEARNAUDIT_DATA_DIR/corpus.txt if set, else the source tree copy.
std::string BundledCorpusPath();
// output.dir, else $UNLEARNAUDIT_OUTPUT_DIR, else "unlearnaudit-out".
std::string OutputDirectory(const ExperimentConfig& config);

absl::StatusOr<LearnerSpec> BuildLearner(const ExperimentConfig& config);
absl::StatusOr<DatasetDistribution> BuildData(const ExperimentConfig& config);
absl::StatusOr<InferenceAttackerFactory> BuildInferenceAttacker(
    const ExperimentConfig& config, const DatasetDistribution& data);
absl::StatusOr<ReconstructionAttackerFactory> BuildReconstructionAttacker(
    const ExperimentConfig& config, const DatasetDistribution& data);

nlohmann::json ToJson(const SuccessStats& stats);
nlohmann::json ToJson(const RecStats& stats);
nlohmann::json ToJson(const KnownInstanceStats& stats);
nlohmann::json ToJson(const ComplianceStats& stats);

struct Report {
  // schema_version, tool, version, config, seed, result, assertions,
  // wall_clock_seconds.
  nlohmann::json document;
  std::string table_csv;
  bool assertions_passed = true;
};

// The `result` member holds only deterministic fields, so two runs with the
// same config produce identical results.
absl::StatusOr<Report> RunExperiment(const ExperimentConfig& config);

}  // namespace unlearnaudit

#endif  // UNLEARNAUDIT_EXPERIMENT_H_
