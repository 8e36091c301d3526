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

// Python bindings. Reports cross the boundary as JSON text; the Python
// package parses them into dicts.

#include <string>
#include <utility>
#include <vector>

#include "pybind11/pybind11.h"
#include "pybind11/stl.h"
#include "unlearnaudit/compliance.h"
#include "unlearnaudit/config.h"
#include "unlearnaudit/experiment.h"
#include "unlearnaudit/games.h"
#include "unlearnaudit/presets.h"

namespace py = pybind11;

namespace unlearnaudit {
namespace {

[[noreturn]] void Raise(const absl::Status& status) {
  const std::string message(status.message());
  if (absl::IsNotFound(status)) throw py::key_error(message);
  if (absl::IsInvalidArgument(status)) throw py::value_error(message);
  throw std::runtime_error(message);
}

ExperimentConfig MakeConfig(const std::string& ini,
                            const std::vector<std::string>& overrides) {
  auto config = ExperimentConfig::FromIni(ini);
  if (!config.ok()) Raise(config.status());
  for (const std::string& o : overrides) {
    if (absl::Status s = config->Apply(o); !s.ok()) Raise(s);
  }
  return *std::move(config);
}

std::pair<std::string, std::string> Run(
    const std::string& ini, const std::vector<std::string>& overrides) {
  ExperimentConfig config = MakeConfig(ini, overrides);
  absl::StatusOr<Report> report;
  {
    py::gil_scoped_release release;
    report = RunExperiment(config);
  }
  if (!report.ok()) Raise(report.status());
  return {report->document.dump(), report->table_csv};
}

std::string Reproduce(const std::string& name, uint64_t seed, int workers) {
  PresetOptions options;
  options.seed = seed;
  options.workers = workers;
  absl::StatusOr<std::vector<CriterionOutcome>> outcomes;
  {
    py::gil_scoped_release release;
    outcomes = RunPreset(name, options);
  }
  if (!outcomes.ok()) Raise(outcomes.status());
  nlohmann::json out = nlohmann::json::array();
  for (const CriterionOutcome& o : *outcomes) out.push_back(ToJson(o));
  return out.dump();
}

}  // namespace
}  // namespace unlearnaudit

PYBIND11_MODULE(_core, m) {
  using namespace unlearnaudit;
  m.doc() = "unlearnaudit native core";
  m.def("version", [] { return std::string(ToolVersion()); });
  m.def("report_schema_version", [] { return kReportSchemaVersion; });
  m.def("run_experiment", &Run, py::arg("ini") = "",
        py::arg("overrides") = std::vector<std::string>{},
        "Runs one game; returns (report_json, table_csv).");
  m.def("reproduce", &Reproduce, py::arg("preset"), py::arg("seed") = 0,
        py::arg("workers") = 1,
        "Runs a preset; returns the criterion outcomes as JSON.");
  m.def("list_presets", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const PresetInfo& p : Presets())
      out.emplace_back(p.name, p.description);
    return out;
  });
  m.def("config_schema", [] {
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    for (const ConfigKey& k : ConfigSchema()) {
      out.emplace_back(std::string(k.section) + "." + k.key, k.default_value,
                       k.help);
    }
    return out;
  });
  m.def(
      "resolve_config",
      [](const std::string& ini, const std::vector<std::string>& overrides) {
        return MakeConfig(ini, overrides).ToIni();
      },
      py::arg("ini") = "", py::arg("overrides") = std::vector<std::string>{});
  m.def("wilson_interval", &WilsonInterval, py::arg("wins"), py::arg("trials"));
  m.def(
      "encode_roundtrip",
      [](const std::string& line) {
        auto msg = DecodeMessage(line);
        if (!msg.ok()) Raise(msg.status());
        return EncodeMessage(*msg);
      },
      "Decodes a protocol line and re-encodes it canonically.");
}
