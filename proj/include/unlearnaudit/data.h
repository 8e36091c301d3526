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

// Dataset ingestion (CSV, plain-text corpora) and the seeded synthetic
// generators that stand in for the tabular, image, and text benchmarks.

#ifndef UNLEARNAUDIT_DATA_H_
#define UNLEARNAUDIT_DATA_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "unlearnaudit/core.h"
#include "unlearnaudit/random.h"

namespace unlearnaudit {

struct CsvSchema {
  // Header name of the label column; empty means the last column.
  std::string label_column;
  LabelKind label_kind = LabelKind::kClass;
};

struct CsvData {
  Dataset dataset;
  std::vector<std::string> feature_names;
  // Per-feature min and max before normalization. Constant columns
  // normalize to 0.
  std::vector<double> feature_min;
  std::vector<double> feature_max;
  // Class names in first-appearance order (class labels only).
  std::vector<std::string> class_names;
};

// Errors: NotFound, ParseError (with line number), SchemaMismatch,
// NonNumericFeature.
absl::StatusOr<CsvData> LoadCsv(const std::string& path,
                                const CsvSchema& schema);
absl::StatusOr<CsvData> ParseCsv(std::string_view text,
                                 const CsvSchema& schema);
// Maps normalized coordinates back to raw feature values.
std::vector<double> Denormalize(const CsvData& data,
                                std::span<const double> coords);

class Dictionary {
 public:
  Dictionary();  // Holds only the boundary tokens.

  TokenId Intern(const std::string& word);
  // -1 if absent.
  TokenId Find(std::string_view word) const;
  const std::string& Word(TokenId id) const { return words_[id]; }
  size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  std::vector<TokenId> Encode(std::string_view sentence) const;
  std::string Decode(std::span<const TokenId> tokens) const;

 private:
  std::vector<std::string> words_;
  absl::flat_hash_map<std::string, TokenId> ids_;
};

struct Corpus {
  Dataset sentences;  // Token instances, SequenceProb(1) labels.
  Dictionary dictionary;
  int64_t token_count = 0;
  int64_t unique_words = 0;  // Excluding the boundary tokens.
};

// Lowercases and splits on whitespace; one sentence per non-empty line.
// Word ids are assigned in sorted word order after the boundary tokens.
absl::StatusOr<Corpus> LoadCorpus(const std::string& path);
absl::StatusOr<Corpus> ParseCorpus(std::string_view text);

// Binary instances uniform on {0,1}^d. Singleton mode (classes == 0) gives
// every example its own class 0..n-1 and resamples colliding instances;
// otherwise labels are uniform over `classes`.
absl::StatusOr<Dataset> GenUniformHypercube(int n, int d, int classes,
                                            uint64_t seed);

// y = <w, x> + N(0, sigma^2) with x uniform on [0,1]^d and w drawn from
// `weight_seed` (standard normal entries).
Dataset GenLinearRegression(int n, int d, double noise_sigma, uint64_t seed,
                            uint64_t weight_seed);
Dataset GenLinearRegression(int n, int d, double noise_sigma, uint64_t seed);
std::vector<double> LinearRegressionWeights(int d, uint64_t weight_seed);

// Isotropic Gaussian blobs around simplex vertices (unit basis vectors, plus
// the origin when classes == d + 1). Example i has class i % classes.
absl::StatusOr<Dataset> GenBlobs(int n, int d, int classes, double spread,
                                 uint64_t seed);

enum class DistributionKind {
  kCsvFile,
  kUniformHypercube,
  kLinearRegression,
  kGaussianBlobs,
  kCorpusFile,
};

const char* DistributionKindName(DistributionKind kind);
absl::StatusOr<DistributionKind> ParseDistributionKind(std::string_view name);

// A seeded source of datasets of a fixed shape. Sample(seed) draws one
// dataset S ~ S_n; different seeds give independent draws from the same
// underlying distribution (same regression weights, same blob centres).
struct DatasetDistribution {
  DistributionKind kind = DistributionKind::kGaussianBlobs;
  int n = 100;
  int d = 4;
  int classes = 3;           // Hypercube: 0 selects singleton labels.
  double noise_sigma = 0.1;  // Linear regression.
  double spread = 0.5;       // Blobs.
  uint64_t param_seed = 0;   // Fixes hidden parameters (weights).
  std::string path;          // CSV / corpus files.
  CsvSchema schema;
  // CSV: fraction of rows in each sampled training set.
  double train_fraction = 0.9;

  absl::StatusOr<Dataset> Sample(uint64_t seed) const;
  // One fresh example from the underlying distribution.
  absl::StatusOr<Example> SampleOne(uint64_t seed) const;
  // Label-space width for classifiers (0 for regression and text).
  int NumClasses() const;
  std::string Describe() const;
};

DatasetDistribution UniformSingletons(int n, int d);
DatasetDistribution UniformKClasses(int n, int d, int classes);
DatasetDistribution LinearRegressionData(int n, int d, double noise_sigma,
                                         uint64_t param_seed = 7);
DatasetDistribution BlobsData(int n, int d, int classes, double spread);
DatasetDistribution CorpusData(std::string path);

}  // namespace unlearnaudit

#endif  // UNLEARNAUDIT_DATA_H_
