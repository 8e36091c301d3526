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

// unlearnaudit: config-driven runner for deletion privacy games.
//
//   unlearnaudit run --config exp.ini --set learner.kind=ols --trials 200
//   unlearnaudit reproduce table4
//   unlearnaudit list-presets
//   unlearnaudit version
//
// Exit codes: 0 all assertions pass, 1 an assertion failed, 2 config or IO
// error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "unlearnaudit/config.h"
#include "unlearnaudit/experiment.h"
#include "unlearnaudit/presets.h"

namespace {

using unlearnaudit::ExperimentConfig;

constexpr int kOk = 0;
constexpr int kAssertionFailed = 1;
constexpr int kError = 2;

int Fail(const std::string& message) {
  std::cerr << "unlearnaudit: " << message << "\n";
  return kError;
}

bool WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  out << text;
  return static_cast<bool>(out);
}

struct RunFlags {
  std::string config;
  std::vector<std::string> sets;
  std::string seed;
  std::string trials;
  std::string workers;
  std::string output;
  std::string format = "report";
};

int CmdRun(const RunFlags& f) {
  ExperimentConfig config;
  if (!f.config.empty()) {
    auto loaded = ExperimentConfig::Load(f.config);
    if (!loaded.ok()) return Fail(std::string(loaded.status().message()));
    config = *std::move(loaded);
  }
  std::vector<std::string> overrides = f.sets;
  if (!f.seed.empty()) overrides.push_back("game.seed=" + f.seed);
  if (!f.trials.empty()) overrides.push_back("game.trials=" + f.trials);
  if (!f.workers.empty()) overrides.push_back("game.workers=" + f.workers);
  if (!f.output.empty()) overrides.push_back("output.dir=" + f.output);
  for (const std::string& s : overrides) {
    if (absl::Status st = config.Apply(s); !st.ok()) {
      return Fail(std::string(st.message()));
    }
  }
  auto report = unlearnaudit::RunExperiment(config);
  if (!report.ok()) return Fail(std::string(report.status().message()));

  const std::filesystem::path dir = unlearnaudit::OutputDirectory(config);
  const std::string text = report->document.dump(2) + "\n";
  if (!WriteFile(dir / config.Get("output.report"), text)) {
    return Fail("cannot write report under " + dir.string());
  }
  std::string table = config.Get("output.table");
  if (table.empty() && f.format == "flat-table") table = "table.csv";
  if (!table.empty() && !WriteFile(dir / table, report->table_csv)) {
    return Fail("cannot write table under " + dir.string());
  }
  std::cout << (f.format == "flat-table" ? report->table_csv : text);
  return report->assertions_passed ? kOk : kAssertionFailed;
}

int CmdReproduce(const std::string& preset, const RunFlags& f) {
  unlearnaudit::PresetOptions options;
  try {
    if (!f.seed.empty()) options.seed = std::stoull(f.seed);
    if (!f.workers.empty()) options.workers = std::stoi(f.workers);
  } catch (const std::exception&) {
    return Fail("ConfigInvalid: --seed/--workers: expected an integer");
  }
  if (options.workers < 1)
    return Fail("ConfigInvalid: --workers: must be >= 1");
  auto outcomes = unlearnaudit::RunPreset(
      preset, options, [](const unlearnaudit::CriterionOutcome& o) {
        std::cout << unlearnaudit::FormatOutcome(o) << std::endl;
      });
  if (!outcomes.ok()) return Fail(std::string(outcomes.status().message()));
  bool all = true;
  nlohmann::json criteria = nlohmann::json::array();
  for (const auto& o : *outcomes) {
    all &= o.passed;
    criteria.push_back(unlearnaudit::ToJson(o));
  }
  nlohmann::json doc = {{"schema_version", unlearnaudit::kReportSchemaVersion},
                        {"tool", "unlearnaudit"},
                        {"version", unlearnaudit::ToolVersion()},
                        {"command", "reproduce"},
                        {"preset", preset},
                        {"seed", options.seed},
                        {"workers", options.workers},
                        {"criteria", criteria},
                        {"assertions_passed", all}};
  ExperimentConfig config;
  if (!f.output.empty()) (void)config.Set("output.dir", f.output);
  const std::filesystem::path dir = unlearnaudit::OutputDirectory(config);
  if (!WriteFile(dir / ("reproduce-" + preset + ".json"), doc.dump(2) + "\n")) {
    return Fail("cannot write report under " + dir.string());
  }
  return all ? kOk : kAssertionFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deletion inference, reconstruction and compliance audits"};
  app.require_subcommand(1);
  RunFlags flags;
  std::string preset;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", flags.seed, "Master seed");
    cmd->add_option("--workers", flags.workers, "Worker threads");
    cmd->add_option("--output", flags.output,
                    "Output directory (default $UNLEARNAUDIT_OUTPUT_DIR or "
                    "./unlearnaudit-out)");
  };

  CLI::App* run = app.add_subcommand("run", "Run one configured game");
  run->add_option("--config", flags.config, "INI config file");
  run->add_option("--set", flags.sets, "Override, section.key=value")
      ->take_all();
  run->add_option("--trials", flags.trials, "Trials (sessions)");
  run->add_option("--format", flags.format, "stdout format")
      ->check(CLI::IsMember({"report", "flat-table"}));
  add_common(run);

  CLI::App* reproduce =
      app.add_subcommand("reproduce", "Run a preset and check its criteria");
  reproduce->add_option("preset", preset, "Preset name")->required();
  add_common(reproduce);

  CLI::App* list = app.add_subcommand("list-presets", "List presets");
  CLI::App* version = app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  if (*run) return CmdRun(flags);
  if (*reproduce) return CmdReproduce(preset, flags);
  if (*list) {
    for (const auto& p : unlearnaudit::Presets()) {
      std::cout << p.name << "\t" << p.description << "\n";
    }
    return kOk;
  }
  if (*version) {
    std::cout << "unlearnaudit " << unlearnaudit::ToolVersion() << " (report "
              << "schema " << unlearnaudit::kReportSchemaVersion << ")\n";
    return kOk;
  }
  return kError;
}
