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

#include "unlearnaudit/data.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "absl/container/flat_hash_set.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "status_macros.h"

namespace unlearnaudit {
namespace {

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> SplitRow(std::string_view line) {
  std::vector<std::string> cells;
  for (absl::string_view cell : absl::StrSplit(AsAbsl(line), ',')) {
    cells.emplace_back(absl::StripAsciiWhitespace(cell));
  }
  return cells;
}

}  // namespace

absl::StatusOr<CsvData> ParseCsv(std::string_view text,
                                 const CsvSchema& schema) {
  std::vector<std::string_view> lines;
  int line_number = 0;
  std::vector<int> line_numbers;
  for (absl::string_view raw : absl::StrSplit(AsAbsl(text), '\n')) {
    ++line_number;
    absl::string_view line = absl::StripTrailingAsciiWhitespace(raw);
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    lines.emplace_back(line.data(), line.size());
    line_numbers.push_back(line_number);
  }
  if (lines.empty()) {
    return absl::InvalidArgumentError("ParseError: line 1: missing header");
  }
  const std::vector<std::string> header = SplitRow(lines[0]);
  if (header.size() < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "SchemaMismatch: header needs at least one feature and a label, got ",
        header.size(), " column(s)"));
  }
  size_t label_col = header.size() - 1;
  if (!schema.label_column.empty()) {
    auto it = std::find(header.begin(), header.end(), schema.label_column);
    if (it == header.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("SchemaMismatch: label column '", schema.label_column,
                       "' not in header"));
    }
    label_col = static_cast<size_t>(it - header.begin());
  }
  if (schema.label_kind == LabelKind::kSequenceProb) {
    return absl::InvalidArgumentError(
        "SchemaMismatch: CSV labels must be real or class");
  }

  CsvData out;
  for (size_t c = 0; c < header.size(); ++c) {
    if (c != label_col) out.feature_names.push_back(header[c]);
  }
  const size_t d = out.feature_names.size();
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  absl::flat_hash_map<std::string, int> class_ids;
  for (size_t r = 1; r < lines.size(); ++r) {
    const std::vector<std::string> cells = SplitRow(lines[r]);
    if (cells.size() != header.size()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("ParseError: line %d: expected %d fields, found %d",
                          line_numbers[r], header.size(), cells.size()));
    }
    std::vector<double> features;
    features.reserve(d);
    for (size_t c = 0; c < cells.size(); ++c) {
      if (c == label_col) continue;
      double v;
      if (!absl::SimpleAtod(cells[c], &v)) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "NonNumericFeature: line %d: column '%s' value '%s'",
            line_numbers[r], header[c], cells[c]));
      }
      features.push_back(v);
    }
    const std::string& raw_label = cells[label_col];
    if (schema.label_kind == LabelKind::kReal) {
      double v;
      if (!absl::SimpleAtod(raw_label, &v)) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "ParseError: line %d: real label '%s' is not a number",
            line_numbers[r], raw_label));
      }
      labels.push_back(Label::Real(v));
    } else {
      auto [it, inserted] = class_ids.try_emplace(
          raw_label, static_cast<int>(out.class_names.size()));
      if (inserted) out.class_names.push_back(raw_label);
      labels.push_back(Label::Class(it->second));
    }
    rows.push_back(std::move(features));
  }
  if (rows.empty()) {
    return absl::InvalidArgumentError("EmptyDataset: CSV has no data rows");
  }
  out.feature_min.assign(d, 0.0);
  out.feature_max.assign(d, 0.0);
  for (size_t j = 0; j < d; ++j) {
    double lo = rows[0][j], hi = rows[0][j];
    for (const auto& row : rows) {
      lo = std::min(lo, row[j]);
      hi = std::max(hi, row[j]);
    }
    out.feature_min[j] = lo;
    out.feature_max[j] = hi;
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    std::vector<double> coords(d);
    for (size_t j = 0; j < d; ++j) {
      const double range = out.feature_max[j] - out.feature_min[j];
      coords[j] = range > 0.0 ? (rows[i][j] - out.feature_min[j]) / range : 0.0;
    }
    out.dataset.examples.push_back(
        {Instance::Dense(std::move(coords)), labels[i]});
  }
  out.dataset.provenance = "csv";
  return out;
}

absl::StatusOr<CsvData> LoadCsv(const std::string& path,
                                const CsvSchema& schema) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<CsvData> data = ParseCsv(*text, schema);
  if (data.ok()) data->dataset.provenance = absl::StrCat("csv:", path);
  return data;
}

std::vector<double> Denormalize(const CsvData& data,
                                std::span<const double> coords) {
  std::vector<double> raw(coords.size());
  for (size_t j = 0; j < coords.size(); ++j) {
    raw[j] = data.feature_min[j] +
             coords[j] * (data.feature_max[j] - data.feature_min[j]);
  }
  return raw;
}

Dictionary::Dictionary() {
  Intern("<s>");
  Intern("</s>");
}

TokenId Dictionary::Intern(const std::string& word) {
  auto [it, inserted] =
      ids_.try_emplace(word, static_cast<TokenId>(words_.size()));
  if (inserted) words_.push_back(word);
  return it->second;
}

TokenId Dictionary::Find(std::string_view word) const {
  const auto it = ids_.find(AsAbsl(word));
  return it == ids_.end() ? -1 : it->second;
}

std::vector<TokenId> Dictionary::Encode(std::string_view sentence) const {
  std::vector<TokenId> out;
  for (absl::string_view w : absl::StrSplit(
           AsAbsl(sentence), absl::ByAnyChar(" \t\r"), absl::SkipEmpty())) {
    out.push_back(Find(absl::AsciiStrToLower(w)));
  }
  return out;
}

std::string Dictionary::Decode(std::span<const TokenId> tokens) const {
  std::string out;
  for (TokenId t : tokens) {
    if (!out.empty()) out += ' ';
    out += (t >= 0 && static_cast<size_t>(t) < words_.size()) ? words_[t]
                                                              : "<unk>";
  }
  return out;
}

absl::StatusOr<Corpus> ParseCorpus(std::string_view text) {
  std::vector<std::vector<std::string>> sentences;
  std::set<std::string> vocabulary;
  for (absl::string_view line : absl::StrSplit(AsAbsl(text), '\n')) {
    std::vector<std::string> words;
    for (absl::string_view w :
         absl::StrSplit(line, absl::ByAnyChar(" \t\r"), absl::SkipEmpty())) {
      words.push_back(absl::AsciiStrToLower(w));
    }
    if (words.empty()) continue;
    vocabulary.insert(words.begin(), words.end());
    sentences.push_back(std::move(words));
  }
  if (sentences.empty()) {
    return absl::InvalidArgumentError("EmptyCorpus: no sentences found");
  }
  if (vocabulary.count("<s>") || vocabulary.count("</s>")) {
    return absl::InvalidArgumentError(
        "ParseError: corpus uses a reserved boundary token");
  }
  Corpus corpus;
  for (const std::string& w : vocabulary) corpus.dictionary.Intern(w);
  for (const auto& words : sentences) {
    std::vector<TokenId> tokens;
    tokens.reserve(words.size());
    for (const std::string& w : words)
      tokens.push_back(corpus.dictionary.Find(w));
    corpus.token_count += static_cast<int64_t>(tokens.size());
    corpus.sentences.examples.push_back(
        {Instance::Sentence(std::move(tokens)), Label::SequenceProb(1.0)});
  }
  corpus.unique_words = static_cast<int64_t>(vocabulary.size());
  corpus.sentences.provenance = "corpus";
  return corpus;
}

absl::StatusOr<Corpus> LoadCorpus(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<Corpus> corpus = ParseCorpus(*text);
  if (corpus.ok()) corpus->sentences.provenance = absl::StrCat("corpus:", path);
  return corpus;
}

absl::StatusOr<Dataset> GenUniformHypercube(int n, int d, int classes,
                                            uint64_t seed) {
  if (n < 1 || d < 1 || classes < 0) {
    return absl::InvalidArgumentError("hypercube needs n >= 1, d >= 1");
  }
  const bool singleton = classes == 0;
  if (singleton && d < 63 && static_cast<uint64_t>(n) > (1ULL << d)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InfeasibleSingleton: ", n,
                     " distinct points do not fit in {0,1}^", d));
  }
  Rng rng(seed);
  Dataset out;
  absl::flat_hash_set<std::vector<double>> seen;
  while (static_cast<int>(out.size()) < n) {
    std::vector<double> bits(d);
    for (double& b : bits) b = rng.Bit();
    if (singleton && !seen.insert(bits).second) continue;
    const int label = singleton ? static_cast<int>(out.size())
                                : static_cast<int>(rng.UniformInt(classes));
    out.examples.push_back(
        {Instance::BinaryUnchecked(std::move(bits)), Label::Class(label)});
  }
  out.provenance =
      singleton
          ? absl::StrFormat("hypercube(n=%d,d=%d,singleton)", n, d)
          : absl::StrFormat("hypercube(n=%d,d=%d,classes=%d)", n, d, classes);
  return out;
}

std::vector<double> LinearRegressionWeights(int d, uint64_t weight_seed) {
  Rng rng(DeriveSeed(weight_seed, 0, "weights"));
  std::vector<double> w(d);
  for (double& v : w) v = rng.Normal();
  return w;
}

Dataset GenLinearRegression(int n, int d, double noise_sigma, uint64_t seed,
                            uint64_t weight_seed) {
  const std::vector<double> w = LinearRegressionWeights(d, weight_seed);
  Rng rng(seed);
  Dataset out;
  out.examples.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> x(d);
    double y = 0.0;
    for (int j = 0; j < d; ++j) {
      x[j] = rng.Uniform01();
      y += w[j] * x[j];
    }
    y += noise_sigma * rng.Normal();
    out.examples.push_back({Instance::Dense(std::move(x)), Label::Real(y)});
  }
  out.provenance = absl::StrFormat("linear_regression(n=%d,d=%d,sigma=%g)", n,
                                   d, noise_sigma);
  return out;
}

Dataset GenLinearRegression(int n, int d, double noise_sigma, uint64_t seed) {
  return GenLinearRegression(n, d, noise_sigma, seed, seed);
}

absl::StatusOr<Dataset> GenBlobs(int n, int d, int classes, double spread,
                                 uint64_t seed) {
  if (classes < 2) return absl::InvalidArgumentError("blobs need classes >= 2");
  if (classes > d + 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("blobs place ", classes, " centres on a simplex in ", d,
                     " dimensions; need classes <= d + 1"));
  }
  if (n < 1 || spread < 0.0) {
    return absl::InvalidArgumentError("blobs need n >= 1 and spread >= 0");
  }
  Rng rng(seed);
  Dataset out;
  out.examples.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int c = i % classes;
    std::vector<double> x(d);
    for (int j = 0; j < d; ++j) {
      x[j] = (j == c ? 1.0 : 0.0) + spread * rng.Normal();
    }
    out.examples.push_back({Instance::Dense(std::move(x)), Label::Class(c)});
  }
  out.provenance = absl::StrFormat("blobs(n=%d,d=%d,classes=%d,spread=%g)", n,
                                   d, classes, spread);
  return out;
}

const char* DistributionKindName(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::kCsvFile:
      return "csv";
    case DistributionKind::kUniformHypercube:
      return "hypercube";
    case DistributionKind::kLinearRegression:
      return "linear_regression";
    case DistributionKind::kGaussianBlobs:
      return "blobs";
    case DistributionKind::kCorpusFile:
      return "corpus";
  }
  return "unknown";
}

absl::StatusOr<DistributionKind> ParseDistributionKind(std::string_view name) {
  for (DistributionKind k :
       {DistributionKind::kCsvFile, DistributionKind::kUniformHypercube,
        DistributionKind::kLinearRegression, DistributionKind::kGaussianBlobs,
        DistributionKind::kCorpusFile}) {
    if (name == DistributionKindName(k)) return k;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown data kind '", AsAbsl(name), "'"));
}

absl::StatusOr<Dataset> DatasetDistribution::Sample(uint64_t seed) const {
  switch (kind) {
    case DistributionKind::kUniformHypercube:
      return GenUniformHypercube(n, d, classes, seed);
    case DistributionKind::kLinearRegression:
      return GenLinearRegression(n, d, noise_sigma, seed, param_seed);
    case DistributionKind::kGaussianBlobs:
      return GenBlobs(n, d, classes, spread, seed);
    case DistributionKind::kCorpusFile: {
      absl::StatusOr<Corpus> corpus = LoadCorpus(path);
      if (!corpus.ok()) return corpus.status();
      return std::move(corpus->sentences);
    }
    case DistributionKind::kCsvFile: {
      absl::StatusOr<CsvData> data = LoadCsv(path, schema);
      if (!data.ok()) return data.status();
      Dataset& all = data->dataset;
      // Seeded training slice; the rest is the held-out remainder.
      const size_t keep = std::max<size_t>(
          1, static_cast<size_t>(train_fraction *
                                 static_cast<double>(all.size())));
      Rng rng(seed);
      std::vector<size_t> idx = rng.SampleWithoutReplacement(all.size(), keep);
      std::sort(idx.begin(), idx.end());
      Dataset out;
      out.provenance = all.provenance;
      for (size_t i : idx) out.examples.push_back(all.examples[i]);
      return out;
    }
  }
  return absl::InternalError("unhandled distribution");
}

absl::StatusOr<Example> DatasetDistribution::SampleOne(uint64_t seed) const {
  Rng rng(seed);
  switch (kind) {
    case DistributionKind::kUniformHypercube: {
      std::vector<double> bits(d);
      for (double& b : bits) b = rng.Bit();
      const int width = classes == 0 ? n : classes;
      return Example{Instance::BinaryUnchecked(std::move(bits)),
                     Label::Class(static_cast<int>(rng.UniformInt(width)))};
    }
    case DistributionKind::kLinearRegression: {
      Dataset one = GenLinearRegression(1, d, noise_sigma, seed, param_seed);
      return one.examples.front();
    }
    case DistributionKind::kGaussianBlobs: {
      const int c = static_cast<int>(rng.UniformInt(classes));
      std::vector<double> x(d);
      for (int j = 0; j < d; ++j) {
        x[j] = (j == c ? 1.0 : 0.0) + spread * rng.Normal();
      }
      return Example{Instance::Dense(std::move(x)), Label::Class(c)};
    }
    case DistributionKind::kCsvFile:
    case DistributionKind::kCorpusFile: {
      // Finite sources: a uniformly chosen record of the full file.
      absl::StatusOr<Dataset> all = [&]() -> absl::StatusOr<Dataset> {
        if (kind == DistributionKind::kCorpusFile) {
          absl::StatusOr<Corpus> c = LoadCorpus(path);
          if (!c.ok()) return c.status();
          return std::move(c->sentences);
        }
        absl::StatusOr<CsvData> data = LoadCsv(path, schema);
        if (!data.ok()) return data.status();
        return std::move(data->dataset);
      }();
      if (!all.ok()) return all.status();
      return all->examples[rng.UniformInt(all->size())];
    }
  }
  return absl::InternalError("unhandled distribution");
}

int DatasetDistribution::NumClasses() const {
  switch (kind) {
    case DistributionKind::kUniformHypercube:
      return classes == 0 ? n : classes;
    case DistributionKind::kGaussianBlobs:
      return classes;
    case DistributionKind::kCsvFile:
      if (schema.label_kind == LabelKind::kClass) {
        absl::StatusOr<CsvData> data = LoadCsv(path, schema);
        if (data.ok()) return static_cast<int>(data->class_names.size());
      }
      return 0;
    default:
      return 0;
  }
}

std::string DatasetDistribution::Describe() const {
  switch (kind) {
    case DistributionKind::kUniformHypercube:
      return classes == 0
                 ? absl::StrFormat("hypercube(n=%d, d=%d, singleton)", n, d)
                 : absl::StrFormat("hypercube(n=%d, d=%d, classes=%d)", n, d,
                                   classes);
    case DistributionKind::kLinearRegression:
      return absl::StrFormat("linear_regression(n=%d, d=%d, sigma=%g)", n, d,
                             noise_sigma);
    case DistributionKind::kGaussianBlobs:
      return absl::StrFormat("blobs(n=%d, d=%d, classes=%d, spread=%g)", n, d,
                             classes, spread);
    case DistributionKind::kCorpusFile:
      return absl::StrCat("corpus(", path, ")");
    case DistributionKind::kCsvFile:
      return absl::StrCat("csv(", path, ")");
  }
  return "unknown";
}

DatasetDistribution UniformSingletons(int n, int d) {
  DatasetDistribution dist;
  dist.kind = DistributionKind::kUniformHypercube;
  dist.n = n;
  dist.d = d;
  dist.classes = 0;
  return dist;
}

DatasetDistribution UniformKClasses(int n, int d, int classes) {
  DatasetDistribution dist = UniformSingletons(n, d);
  dist.classes = classes;
  return dist;
}

DatasetDistribution LinearRegressionData(int n, int d, double noise_sigma,
                                         uint64_t param_seed) {
  DatasetDistribution dist;
  dist.kind = DistributionKind::kLinearRegression;
  dist.n = n;
  dist.d = d;
  dist.noise_sigma = noise_sigma;
  dist.param_seed = param_seed;
  dist.classes = 0;
  return dist;
}

DatasetDistribution BlobsData(int n, int d, int classes, double spread) {
  DatasetDistribution dist;
  dist.kind = DistributionKind::kGaussianBlobs;
  dist.n = n;
  dist.d = d;
  dist.classes = classes;
  dist.spread = spread;
  return dist;
}

DatasetDistribution CorpusData(std::string path) {
  DatasetDistribution dist;
  dist.kind = DistributionKind::kCorpusFile;
  dist.path = std::move(path);
  dist.classes = 0;
  return dist;
}

}  // namespace unlearnaudit
