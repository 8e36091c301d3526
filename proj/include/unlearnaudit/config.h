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

// Experiment configuration: an INI file with sections game, learner, data,
// attacker and output. Every key has a default; unknown keys are errors.

#ifndef UNLEARNAUDIT_CONFIG_H_
#define UNLEARNAUDIT_CONFIG_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace unlearnaudit {

struct ConfigKey {
  const char* section;
  const char* key;
  const char* default_value;
  const char* help;
};

// All accepted keys, in documentation order.
std::span<const ConfigKey> ConfigSchema();

// "ConfigInvalid: <field>: <what>".
absl::Status ConfigError(std::string_view field, std::string_view what);

class ExperimentConfig {
 public:
  // Every key at its default.
  ExperimentConfig();

  static absl::StatusOr<ExperimentConfig> FromIni(std::string_view text);
  // IO failures are NotFound; content errors are ConfigInvalid.
  static absl::StatusOr<ExperimentConfig> Load(const std::string& path);

  absl::Status Set(std::string_view field, std::string_view value);
  // "section.key=value".
  absl::Status Apply(std::string_view assignment);

  // `field` must be a schema key.
  const std::string& Get(std::string_view field) const;
  bool IsSet(std::string_view field) const { return !Get(field).empty(); }
  absl::StatusOr<int64_t> GetInt(std::string_view field) const;
  absl::StatusOr<double> GetDouble(std::string_view field) const;
  absl::StatusOr<bool> GetBool(std::string_view field) const;
  // Comma-separated doubles; "a:b:step" expands to an inclusive range.
  absl::StatusOr<std::vector<double>> GetDoubleList(
      std::string_view field) const;

  // "section.key" -> value, including defaults.
  const std::map<std::string, std::string>& values() const { return values_; }
  std::string ToIni() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace unlearnaudit

#endif  // UNLEARNAUDIT_CONFIG_H_
