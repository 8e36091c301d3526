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

// From-scratch learners. Train() is a pure function of (spec, dataset, seed);
// every learner here is deterministic, so the seed only matters for
// protocol fidelity (fresh randomness on retraining).

#ifndef UNLEARNAUDIT_LEARNERS_H_
#define UNLEARNAUDIT_LEARNERS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "unlearnaudit/core.h"

namespace unlearnaudit {

enum class LearnerKind {
  kOls,
  kRidge,
  kLasso,
  kLogistic,
  kKnn,
  kDecisionTree,
  kNGram,
  // Ignores its training data. Used as the sanity floor for attacks.
  kConstant,
};

const char* LearnerKindName(LearnerKind kind);
absl::StatusOr<LearnerKind> ParseLearnerKind(std::string_view name);

struct LearnerSpec {
  LearnerKind kind = LearnerKind::kOls;
  double alpha = 0.1;   // Ridge / Lasso penalty strength.
  int max_iter = 100;   // Logistic Newton iterations.
  double tol = 1e-9;    // Logistic gradient-norm tolerance.
  double l2 = 1.0;      // Logistic L2 penalty on weights (not intercepts).
  int k = 5;            // Knn neighbours.
  int ngram_order = 2;  // NGram N in {1, 2, 3}.
  // Width of classifier output distributions; 0 infers it from the data.
  // Games pin it so deleting the last example of a class keeps the width.
  int num_classes = 0;

  static LearnerSpec Ols();
  static LearnerSpec Ridge(double alpha);
  static LearnerSpec Lasso(double alpha);
  static LearnerSpec Logistic(int max_iter = 100, double tol = 1e-9);
  static LearnerSpec Knn(int k);
  static LearnerSpec DecisionTree();
  static LearnerSpec NGram(int order);
  static LearnerSpec Constant();
};

absl::Status ValidateSpec(const LearnerSpec& spec);
std::string DescribeSpec(const LearnerSpec& spec);

// Errors: EmptyDataset, KindMismatch, InvalidArgument for bad
// hyperparameters. Non-convergence of Lasso/Logistic is reported through the
// model's converged() flag, not as an error.
absl::StatusOr<ModelPtr> Train(const LearnerSpec& spec, const Dataset& dataset,
                               uint64_t seed);

// OLS, Ridge, and Lasso: h(x) = <w, x> + b.
class LinearModel : public Model {
 public:
  LinearModel(std::vector<double> weights, double intercept, bool converged,
              int iterations);

  InstanceKind instance_kind() const override { return InstanceKind::kDense; }
  absl::StatusOr<Prediction> Predict(const Instance& x) const override;
  std::string Describe() const override;

  const std::vector<double>& weights() const { return weights_; }
  double intercept() const { return intercept_; }
  bool converged() const { return converged_; }
  int iterations() const { return iterations_; }

 private:
  std::vector<double> weights_;
  double intercept_;
  bool converged_;
  int iterations_;
};

// Multinomial logistic regression. Row c of `weights` holds class c's
// coefficients followed by its intercept.
class LogisticModel : public Model {
 public:
  LogisticModel(int num_classes, int dimension, std::vector<double> weights,
                bool converged, int iterations, double gradient_norm);

  InstanceKind instance_kind() const override { return InstanceKind::kDense; }
  absl::StatusOr<Prediction> Predict(const Instance& x) const override;
  std::string Describe() const override;

  int num_classes() const { return num_classes_; }
  int dimension() const { return dimension_; }
  const std::vector<double>& weights() const { return weights_; }
  bool converged() const { return converged_; }
  int iterations() const { return iterations_; }
  double gradient_norm() const { return gradient_norm_; }

 private:
  int num_classes_;
  int dimension_;
  std::vector<double> weights_;
  bool converged_;
  int iterations_;
  double gradient_norm_;
};

// The training objective minimized by the logistic learner: summed negative
// log likelihood plus (l2 / 2) * ||weights||^2 (intercepts carry a 1e-8
// penalty so the optimum is unique). `params` uses LogisticModel's layout.
double LogisticObjective(const Dataset& dataset, int num_classes, double l2,
                         std::span<const double> params);

// Stores its training set. Classification returns neighbour vote fractions;
// distance ties are broken by the smaller stored index.
class KnnModel : public Model {
 public:
  KnnModel(Dataset stored, int k, int num_classes);

  InstanceKind instance_kind() const override { return kind_; }
  absl::StatusOr<Prediction> Predict(const Instance& x) const override;
  std::string Describe() const override;

  // Stored indices of the k nearest neighbours, nearest first.
  std::vector<size_t> Neighbours(const Instance& x) const;

 private:
  InstanceKind kind_;
  Dataset stored_;
  int k_;
  int num_classes_;
};

// CART without a depth limit: Gini impurity for class labels, variance for
// real labels.
class DecisionTreeModel : public Model {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf.
    double threshold = 0.0;
    int left = -1;  // x[feature] <= threshold
    int right = -1;
    int num_samples = 0;
    double impurity = 0.0;
    std::vector<double> distribution;  // Class leaves / internal nodes.
    double value = 0.0;                // Regression.
  };

  DecisionTreeModel(bool regression, int dimension, std::vector<Node> nodes);

  InstanceKind instance_kind() const override { return InstanceKind::kDense; }
  absl::StatusOr<Prediction> Predict(const Instance& x) const override;
  std::string Describe() const override;

  bool regression() const { return regression_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  int num_leaves() const;

 private:
  bool regression_;
  int dimension_;
  std::vector<Node> nodes_;
};

// Maximum-likelihood N-gram language model over boundary-padded sentences:
// N-1 start tokens in front, one end token behind. No smoothing.
class NGramModel : public Model {
 public:
  explicit NGramModel(int order);

  // Adds one sentence's counts for every order 1..N.
  void AddSentence(std::span<const TokenId> tokens);

  InstanceKind instance_kind() const override { return InstanceKind::kTokens; }
  // Sentences get the chain-rule probability; fragments of length n <= N get
  // the joint frequency c(g) / C_n.
  absl::StatusOr<Prediction> Predict(const Instance& x) const override;
  std::string Describe() const override;

  int order() const { return order_; }
  int64_t Count(std::span<const TokenId> gram) const;
  // Total number of n-grams of order n (C_n).
  int64_t Total(int n) const { return totals_[n]; }
  // Sum of c(prefix, w) over w for an (N-1)-gram prefix.
  int64_t ContextCount(std::span<const TokenId> prefix) const;
  // Every observed N-gram with its count, in unspecified order.
  std::vector<std::pair<std::vector<TokenId>, int64_t>> Grams(int n) const;

  // Hash key of a gram of up to 3 tokens (20 bits each plus the length).
  static uint64_t Pack(std::span<const TokenId> gram);

 private:
  int order_;
  std::vector<absl::flat_hash_map<uint64_t, int64_t>> counts_;  // by order
  absl::flat_hash_map<uint64_t, int64_t> context_counts_;
  std::vector<int64_t> totals_;
};

// Errors: KindMismatch if `model` is not an N-gram model or `seq` is not a
// token instance; FragmentLengthMismatch for fragments outside [1, N].
absl::StatusOr<double> SequenceProbability(const Model& model,
                                           const Instance& seq);

class ConstantModel : public Model {
 public:
  ConstantModel(InstanceKind kind, LabelKind label_kind, int num_classes);

  InstanceKind instance_kind() const override { return kind_; }
  absl::StatusOr<Prediction> Predict(const Instance& x) const override;
  std::string Describe() const override;

 private:
  InstanceKind kind_;
  LabelKind label_kind_;
  int num_classes_;
};

}  // namespace unlearnaudit

#endif  // UNLEARNAUDIT_LEARNERS_H_
