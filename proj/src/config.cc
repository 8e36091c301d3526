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

#include "unlearnaudit/config.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "boost/property_tree/ini_parser.hpp"
#include "boost/property_tree/ptree.hpp"
#include "status_macros.h"

namespace unlearnaudit {

namespace {

constexpr ConfigKey kSchema[] = {
    {"game", "type", "inference",
     "inference | reconstruction | known_instance | compliance"},
    {"game", "trials", "1000", "trials (sessions for compliance)"},
    {"game", "seed", "0", "master seed"},
    {"game", "workers", "1", "worker threads"},
    {"game", "instance_only", "false", "hide labels from the attacker"},
    {"game", "label_only", "false", "hide instances from the attacker"},
    {"game", "deletion_hiding", "false", "non-deleted challenge is fresh"},
    {"game", "batch_size", "1", "deleted batch size k"},
    {"game", "metric", "zero_one_exact",
     "reconstruction distance: abs_diff | l1_confidence | hamming | "
     "normalized_hamming | zero_one_exact"},
    {"game", "metric_scope", "example", "example | instance | label"},
    {"game", "eps", "0", "reconstruction radius"},
    {"game", "budget", "1", "compliance deletion budget k"},
    {"game", "collector", "honest", "honest | ignoring | leaky"},
    {"game", "assert_min", "", "fail unless the headline metric >= value"},
    {"game", "assert_max", "", "fail unless the headline metric <= value"},

    {"learner", "kind", "decision_tree",
     "ols | ridge | lasso | logistic | knn | decision_tree | ngram | "
     "constant"},
    {"learner", "alpha", "0.1", "ridge / lasso penalty"},
    {"learner", "k", "5", "knn neighbours"},
    {"learner", "order", "2", "ngram order N"},
    {"learner", "l2", "1", "logistic L2 penalty"},
    {"learner", "max_iter", "100", "logistic Newton iterations"},
    {"learner", "tol", "1e-9", "logistic gradient tolerance"},
    {"learner", "num_classes", "0", "0 = from the data distribution"},

    {"data", "kind", "blobs",
     "blobs | linear_regression | hypercube | corpus | csv"},
    {"data", "n", "135", "dataset size"},
    {"data", "d", "4", "dimension"},
    {"data", "classes", "3", "classes (hypercube: 0 = singleton labels)"},
    {"data", "spread", "0.8", "blob standard deviation"},
    {"data", "noise_sigma", "0.1", "linear regression noise"},
    {"data", "param_seed", "7", "hidden regression weights seed"},
    {"data", "path", "", "csv / corpus file (corpus: bundled when empty)"},
    {"data", "label_column", "", "csv label header (empty = last)"},
    {"data", "label_kind", "class", "csv labels: class | real"},
    {"data", "train_fraction", "0.9", "csv training slice"},

    {"attacker", "kind", "del_inf_exm",
     "del_inf_exm | del_inf_ins | constant | mi_threshold | rec_to_inf | "
     "del_ins_rec | single_oracle_del_ins_rec | ngram_rec | del_lbl_rec | "
     "ins_rev_lbl_rec | coin | echo_reader"},
    {"attacker", "loss", "auto", "squared | zero_one | nll | auto"},
    {"attacker", "metric", "auto", "del_inf_ins / rec_to_inf distance"},
    {"attacker", "bit", "0", "constant guess"},
    {"attacker", "mode", "label", "mi reduction: label | confidence"},
    {"attacker", "holdout", "0", "mi holdout size (0 = data n)"},
    {"attacker", "aux", "2000", "del_ins_rec aux samples"},
    {"attacker", "probes", "200", "del_lbl_rec probes"},
    {"attacker", "phase", "before", "single-oracle baseline: before | after"},
    {"attacker", "eps", "1", "rec_to_inf radius"},
    {"attacker", "query_cap", "30000000", "ngram fragment queries per oracle"},
    {"attacker", "raw_rule", "false", "ngram decrease rule h > h_del"},
    {"attacker", "max_repeats", "2", "ngram path search repeats"},
    {"attacker", "expansion_cap", "2000000", "ngram path search expansions"},
    {"attacker", "lambda", "", "ins_rev_lbl_rec lambda (empty = tune)"},
    {"attacker", "lambda_grid", "0:40:1", "tuning grid"},
    {"attacker", "tuning_trials", "200", "tuning games per lambda"},

    {"output", "dir", "",
     "output directory (default $UNLEARNAUDIT_OUTPUT_DIR or "
     "./unlearnaudit-out)"},
    {"output", "report", "report.json", "report file name"},
    {"output", "table", "", "flat per-trial table file name (csv)"},
};

std::string Field(std::string_view section, std::string_view key) {
  return absl::StrCat(AsAbsl(section), ".", AsAbsl(key));
}

}  // namespace

std::span<const ConfigKey> ConfigSchema() { return kSchema; }

absl::Status ConfigError(std::string_view field, std::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("ConfigInvalid: ", AsAbsl(field), ": ", AsAbsl(what)));
}

ExperimentConfig::ExperimentConfig() {
  for (const ConfigKey& k : kSchema) {
    values_[Field(k.section, k.key)] = k.default_value;
  }
}

absl::StatusOr<ExperimentConfig> ExperimentConfig::FromIni(
    std::string_view text) {
  boost::property_tree::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    return ConfigError(absl::StrCat("line ", e.line()), e.message());
  }
  ExperimentConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      return ConfigError(section, "key outside a section");
    }
    for (const auto& [key, value] : body) {
      UA_RETURN_IF_ERROR(config.Set(Field(section, key), value.data()));
    }
  }
  return config;
}

absl::StatusOr<ExperimentConfig> ExperimentConfig::Load(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return FromIni(buf.str());
}

absl::Status ExperimentConfig::Set(std::string_view field,
                                   std::string_view value) {
  auto it = values_.find(std::string(field));
  if (it == values_.end()) {
    return ConfigError(field, "unknown key");
  }
  it->second = std::string(absl::StripAsciiWhitespace(AsAbsl(value)));
  return absl::OkStatus();
}

absl::Status ExperimentConfig::Apply(std::string_view assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    return ConfigError(assignment, "expected section.key=value");
  }
  return Set(
      std::string(absl::StripAsciiWhitespace(AsAbsl(assignment.substr(0, eq)))),
      assignment.substr(eq + 1));
}

const std::string& ExperimentConfig::Get(std::string_view field) const {
  return values_.at(std::string(field));
}

absl::StatusOr<int64_t> ExperimentConfig::GetInt(std::string_view field) const {
  int64_t v = 0;
  if (!absl::SimpleAtoi(Get(field), &v)) {
    return ConfigError(
        field, absl::StrCat("expected an integer, got '", Get(field), "'"));
  }
  return v;
}

absl::StatusOr<double> ExperimentConfig::GetDouble(
    std::string_view field) const {
  double v = 0;
  if (!absl::SimpleAtod(Get(field), &v) || !std::isfinite(v)) {
    return ConfigError(
        field, absl::StrCat("expected a number, got '", Get(field), "'"));
  }
  return v;
}

absl::StatusOr<bool> ExperimentConfig::GetBool(std::string_view field) const {
  bool v = false;
  if (!absl::SimpleAtob(Get(field), &v)) {
    return ConfigError(
        field, absl::StrCat("expected true/false, got '", Get(field), "'"));
  }
  return v;
}

absl::StatusOr<std::vector<double>> ExperimentConfig::GetDoubleList(
    std::string_view field) const {
  const std::string& text = Get(field);
  std::vector<double> out;
  auto bad = [&] {
    return ConfigError(
        field, absl::StrCat("expected a list or a:b:step, got '", text, "'"));
  };
  std::vector<std::string> range = absl::StrSplit(text, ':');
  if (range.size() == 3) {
    double lo, hi, step;
    if (!absl::SimpleAtod(range[0], &lo) || !absl::SimpleAtod(range[1], &hi) ||
        !absl::SimpleAtod(range[2], &step) || step <= 0 || hi < lo) {
      return bad();
    }
    const int64_t count =
        static_cast<int64_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (int64_t i = 0; i < count; ++i) out.push_back(lo + i * step);
    return out;
  }
  for (absl::string_view part : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    double v;
    if (!absl::SimpleAtod(part, &v)) return bad();
    out.push_back(v);
  }
  if (out.empty()) return bad();
  return out;
}

std::string ExperimentConfig::ToIni() const {
  std::string out;
  std::string section;
  for (const ConfigKey& k : kSchema) {
    if (section != k.section) {
      if (!section.empty()) out += "\n";
      section = k.section;
      absl::StrAppend(&out, "[", section, "]\n");
    }
    absl::StrAppend(&out, k.key, " = ", Get(Field(k.section, k.key)), "\n");
  }
  return out;
}

}  // namespace unlearnaudit
