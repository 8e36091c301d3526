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

// Named desk-scale experiment suites. Each preset runs one or more
// acceptance criteria and reports a pass/fail outcome per criterion.

#ifndef UNLEARNAUDIT_PRESETS_H_
#define UNLEARNAUDIT_PRESETS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace unlearnaudit {

struct PresetInfo {
  const char* name;
  const char* description;
  std::vector<int> criteria;
};

std::span<const PresetInfo> Presets();

struct PresetOptions {
  uint64_t seed = 0;
  int workers = 1;
};

struct CriterionOutcome {
  int id = 0;
  std::string title;
  bool checks_passed = false;
  bool passed = false;  // checks_passed and within the time budget.
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;
  nlohmann::json metrics;
};

// Intermediate measurements shared between criteria in one process.
struct CriterionCache {
  std::optional<nlohmann::json> table3;
  std::optional<nlohmann::json> singletons_rec;
};

inline constexpr int kNumCriteria = 12;

absl::StatusOr<CriterionOutcome> RunCriterion(int id,
                                              const PresetOptions& options,
                                              CriterionCache& cache);

// Errors: NotFound ("UnknownPreset: <name>"). "all" runs every criterion.
absl::StatusOr<std::vector<CriterionOutcome>> RunPreset(
    std::string_view name, const PresetOptions& options,
    const std::function<void(const CriterionOutcome&)>& on_outcome = {});

// "PASS [ 3] lemma34-style title: detail (0.4 s / 30 s)".
std::string FormatOutcome(const CriterionOutcome& outcome);
nlohmann::json ToJson(const CriterionOutcome& outcome);

}  // namespace unlearnaudit

#endif  // UNLEARNAUDIT_PRESETS_H_
