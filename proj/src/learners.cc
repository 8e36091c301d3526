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

#include "unlearnaudit/learners.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "Eigen/Dense"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace unlearnaudit {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInterceptPenalty = 1e-8;
constexpr int kLassoMaxSweeps = 10000;
constexpr double kLassoTol = 1e-8;

MatrixXd FeatureMatrix(const Dataset& dataset) {
  const size_t d = dataset[0].instance.dimension();
  MatrixXd x(dataset.size(), d);
  for (size_t i = 0; i < dataset.size(); ++i) {
    const auto& c = dataset[i].instance.coords();
    for (size_t j = 0; j < d; ++j) x(i, j) = c[j];
  }
  return x;
}

VectorXd RealLabels(const Dataset& dataset) {
  VectorXd y(dataset.size());
  for (size_t i = 0; i < dataset.size(); ++i) y(i) = dataset[i].label.value;
  return y;
}

absl::Status CheckDimension(const Instance& x, size_t expected) {
  if (!x.is_vector()) return KindMismatch("expected a vector instance");
  if (x.dimension() != expected) {
    return KindMismatch(absl::StrCat("instance dimension ", x.dimension(),
                                     ", model expects ", expected));
  }
  return absl::OkStatus();
}

ModelPtr TrainOls(const Dataset& dataset) {
  const MatrixXd x = FeatureMatrix(dataset);
  MatrixXd augmented(x.rows(), x.cols() + 1);
  augmented << x, VectorXd::Ones(x.rows());
  // Minimum-norm least squares; rank-deficient designs (tiny datasets after
  // deletion) get the pseudo-inverse solution.
  const VectorXd beta =
      augmented.completeOrthogonalDecomposition().solve(RealLabels(dataset));
  std::vector<double> w(beta.data(), beta.data() + x.cols());
  return std::make_shared<LinearModel>(std::move(w), beta(x.cols()), true, 1);
}

ModelPtr TrainRidge(const Dataset& dataset, double alpha) {
  const MatrixXd x = FeatureMatrix(dataset);
  const VectorXd y = RealLabels(dataset);
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const double y_mean = y.mean();
  const MatrixXd xc = x.rowwise() - x_mean;
  const VectorXd yc = y.array() - y_mean;
  MatrixXd gram = xc.transpose() * xc;
  gram.diagonal().array() += alpha;
  const VectorXd w = gram.ldlt().solve(xc.transpose() * yc);
  const double b = y_mean - x_mean.dot(w);
  return std::make_shared<LinearModel>(
      std::vector<double>(w.data(), w.data() + w.size()), b, true, 1);
}

double SoftThreshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

// Minimizes (1 / 2n) ||y - Xw - b||^2 + alpha ||w||_1 by cyclic coordinate
// descent on centred data.
ModelPtr TrainLasso(const Dataset& dataset, double alpha) {
  const MatrixXd x = FeatureMatrix(dataset);
  const VectorXd y = RealLabels(dataset);
  const double n = static_cast<double>(x.rows());
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const double y_mean = y.mean();
  const MatrixXd xc = x.rowwise() - x_mean;
  VectorXd residual = y.array() - y_mean;
  const VectorXd col_sq = xc.colwise().squaredNorm().transpose() / n;
  VectorXd w = VectorXd::Zero(x.cols());
  bool converged = false;
  int sweep = 0;
  for (; sweep < kLassoMaxSweeps && !converged; ++sweep) {
    double max_step = 0.0;
    for (int j = 0; j < x.cols(); ++j) {
      if (col_sq(j) == 0.0) continue;
      const double old = w(j);
      const double rho = xc.col(j).dot(residual) / n + col_sq(j) * old;
      const double updated = SoftThreshold(rho, alpha) / col_sq(j);
      if (updated != old) {
        residual -= (updated - old) * xc.col(j);
        w(j) = updated;
        max_step = std::max(max_step, std::abs(updated - old));
      }
    }
    converged = max_step < kLassoTol;
  }
  const double b = y_mean - x_mean.dot(w);
  return std::make_shared<LinearModel>(
      std::vector<double>(w.data(), w.data() + w.size()), b, converged, sweep);
}

// Softmax probabilities for every row; params is (classes x (d + 1)).
MatrixXd SoftmaxRows(const MatrixXd& x_aug, const MatrixXd& params) {
  MatrixXd scores = x_aug * params.transpose();
  for (int i = 0; i < scores.rows(); ++i) {
    const double m = scores.row(i).maxCoeff();
    scores.row(i) = (scores.row(i).array() - m).exp();
    scores.row(i) /= scores.row(i).sum();
  }
  return scores;
}

MatrixXd AugmentedFeatures(const Dataset& dataset) {
  const MatrixXd x = FeatureMatrix(dataset);
  MatrixXd x_aug(x.rows(), x.cols() + 1);
  x_aug << x, VectorXd::Ones(x.rows());
  return x_aug;
}

double PenaltyWeight(int feature, int dimension, double l2) {
  return feature == dimension ? kInterceptPenalty : l2;
}

double ObjectiveAt(const MatrixXd& x_aug, const std::vector<int>& labels,
                   const MatrixXd& params, double l2) {
  const int d = static_cast<int>(params.cols()) - 1;
  const MatrixXd scores = x_aug * params.transpose();
  double total = 0.0;
  for (int i = 0; i < scores.rows(); ++i) {
    const double m = scores.row(i).maxCoeff();
    const double lse = m + std::log((scores.row(i).array() - m).exp().sum());
    total += lse - scores(i, labels[i]);
  }
  for (int c = 0; c < params.rows(); ++c) {
    for (int j = 0; j <= d; ++j) {
      total += 0.5 * PenaltyWeight(j, d, l2) * params(c, j) * params(c, j);
    }
  }
  return total;
}

std::vector<int> ClassLabels(const Dataset& dataset) {
  std::vector<int> labels(dataset.size());
  for (size_t i = 0; i < dataset.size(); ++i) {
    labels[i] = dataset[i].label.class_id;
  }
  return labels;
}

// Damped Newton on the strictly convex penalized objective.
ModelPtr TrainLogistic(const Dataset& dataset, const LearnerSpec& spec,
                       int num_classes) {
  const MatrixXd x_aug = AugmentedFeatures(dataset);
  const std::vector<int> labels = ClassLabels(dataset);
  const int n = static_cast<int>(x_aug.rows());
  const int p = static_cast<int>(x_aug.cols());
  const int d = p - 1;
  const int c_count = num_classes;
  const int dim = c_count * p;

  MatrixXd params = MatrixXd::Zero(c_count, p);
  double objective = ObjectiveAt(x_aug, labels, params, spec.l2);
  double grad_norm = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iter = 0;
  for (; iter < spec.max_iter; ++iter) {
    const MatrixXd probs = SoftmaxRows(x_aug, params);
    MatrixXd residual = probs;
    for (int i = 0; i < n; ++i) residual(i, labels[i]) -= 1.0;
    MatrixXd grad = residual.transpose() * x_aug;  // classes x p
    for (int c = 0; c < c_count; ++c) {
      for (int j = 0; j < p; ++j) {
        grad(c, j) += PenaltyWeight(j, d, spec.l2) * params(c, j);
      }
    }
    grad_norm = grad.norm();
    if (grad_norm <= spec.tol) {
      converged = true;
      break;
    }
    MatrixXd hessian = MatrixXd::Zero(dim, dim);
    for (int i = 0; i < n; ++i) {
      const Eigen::RowVectorXd xi = x_aug.row(i);
      const MatrixXd outer = xi.transpose() * xi;
      for (int a = 0; a < c_count; ++a) {
        for (int b = a; b < c_count; ++b) {
          const double w = probs(i, a) * ((a == b ? 1.0 : 0.0) - probs(i, b));
          if (w == 0.0) continue;
          hessian.block(a * p, b * p, p, p) += w * outer;
        }
      }
    }
    for (int a = 0; a < c_count; ++a) {
      for (int b = a + 1; b < c_count; ++b) {
        hessian.block(b * p, a * p, p, p) =
            hessian.block(a * p, b * p, p, p).transpose();
      }
      for (int j = 0; j < p; ++j) {
        hessian(a * p + j, a * p + j) += PenaltyWeight(j, d, spec.l2);
      }
    }
    VectorXd g(dim);
    for (int c = 0; c < c_count; ++c) g.segment(c * p, p) = grad.row(c);
    VectorXd step = hessian.ldlt().solve(-g);
    if (!step.allFinite() || step.dot(g) >= 0.0) step = -g;
    // Armijo backtracking.
    double t = 1.0;
    MatrixXd candidate = params;
    double candidate_objective = objective;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      for (int c = 0; c < c_count; ++c) {
        candidate.row(c) =
            params.row(c) + t * step.segment(c * p, p).transpose();
      }
      candidate_objective = ObjectiveAt(x_aug, labels, candidate, spec.l2);
      if (candidate_objective <= objective + 1e-4 * t * step.dot(g)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // No further decrease representable.
    params = candidate;
    objective = candidate_objective;
  }
  std::vector<double> flat(static_cast<size_t>(dim));
  for (int c = 0; c < c_count; ++c) {
    for (int j = 0; j < p; ++j) flat[c * p + j] = params(c, j);
  }
  return std::make_shared<LogisticModel>(c_count, d, std::move(flat), converged,
                                         iter, grad_norm);
}

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double weighted_impurity = std::numeric_limits<double>::infinity();
};

double Gini(const std::vector<double>& counts, double total) {
  if (total <= 0.0) return 0.0;
  double sum_sq = 0.0;
  for (double c : counts) sum_sq += (c / total) * (c / total);
  return 1.0 - sum_sq;
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& dataset, bool regression, int num_classes)
      : x_(FeatureMatrix(dataset)),
        regression_(regression),
        num_classes_(num_classes) {
    labels_.resize(dataset.size());
    values_.resize(dataset.size());
    for (size_t i = 0; i < dataset.size(); ++i) {
      labels_[i] = dataset[i].label.class_id;
      values_[i] = dataset[i].label.value;
    }
  }

  std::vector<DecisionTreeModel::Node> Build() {
    std::vector<size_t> all(x_.rows());
    std::iota(all.begin(), all.end(), 0);
    nodes_.clear();
    Grow(all);
    return std::move(nodes_);
  }

 private:
  int Grow(const std::vector<size_t>& idx) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    FillStats(idx, nodes_[id]);
    if (nodes_[id].impurity <= 0.0) return id;
    const SplitCandidate split = BestSplit(idx);
    if (split.feature < 0) return id;
    std::vector<size_t> left, right;
    for (size_t i : idx) {
      (x_(i, split.feature) <= split.threshold ? left : right).push_back(i);
    }
    nodes_[id].feature = split.feature;
    nodes_[id].threshold = split.threshold;
    const int l = Grow(left);
    const int r = Grow(right);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  void FillStats(const std::vector<size_t>& idx,
                 DecisionTreeModel::Node& node) const {
    node.num_samples = static_cast<int>(idx.size());
    const double n = static_cast<double>(idx.size());
    if (regression_) {
      double mean = 0.0;
      for (size_t i : idx) mean += values_[i];
      mean /= n;
      double var = 0.0;
      for (size_t i : idx) var += (values_[i] - mean) * (values_[i] - mean);
      node.value = mean;
      node.impurity = var / n;
    } else {
      std::vector<double> counts(num_classes_, 0.0);
      for (size_t i : idx) counts[labels_[i]] += 1.0;
      node.impurity = Gini(counts, n);
      node.distribution = counts;
      for (double& c : node.distribution) c /= n;
    }
  }

  // Lowest weighted child impurity; ties keep the lowest feature index and
  // then the lowest threshold.
  SplitCandidate BestSplit(const std::vector<size_t>& idx) const {
    SplitCandidate best;
    const double n = static_cast<double>(idx.size());
    std::vector<size_t> order = idx;
    for (int f = 0; f < x_.cols(); ++f) {
      std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return x_(a, f) != x_(b, f) ? x_(a, f) < x_(b, f) : a < b;
      });
      std::vector<double> left_counts(num_classes_, 0.0);
      std::vector<double> right_counts(num_classes_, 0.0);
      double left_sum = 0.0, left_sq = 0.0, right_sum = 0.0, right_sq = 0.0;
      for (size_t i : order) {
        if (regression_) {
          right_sum += values_[i];
          right_sq += values_[i] * values_[i];
        } else {
          right_counts[labels_[i]] += 1.0;
        }
      }
      for (size_t pos = 0; pos + 1 < order.size(); ++pos) {
        const size_t i = order[pos];
        if (regression_) {
          left_sum += values_[i];
          left_sq += values_[i] * values_[i];
          right_sum -= values_[i];
          right_sq -= values_[i] * values_[i];
        } else {
          left_counts[labels_[i]] += 1.0;
          right_counts[labels_[i]] -= 1.0;
        }
        const double lo = x_(i, f);
        const double hi = x_(order[pos + 1], f);
        if (!(lo < hi)) continue;
        const double nl = static_cast<double>(pos + 1);
        const double nr = n - nl;
        double impurity;
        if (regression_) {
          const double lv =
              std::max(0.0, left_sq / nl - (left_sum / nl) * (left_sum / nl));
          const double rv = std::max(
              0.0, right_sq / nr - (right_sum / nr) * (right_sum / nr));
          impurity = (nl * lv + nr * rv) / n;
        } else {
          impurity =
              (nl * Gini(left_counts, nl) + nr * Gini(right_counts, nr)) / n;
        }
        // Strictly-better comparison with a relative guard keeps ties
        // resolved by iteration order (feature, then threshold ascending).
        if (impurity < best.weighted_impurity - 1e-12) {
          best.feature = f;
          best.threshold = lo + (hi - lo) / 2.0;
          best.weighted_impurity = impurity;
        }
      }
    }
    return best;
  }

  MatrixXd x_;
  bool regression_;
  int num_classes_;
  std::vector<int> labels_;
  std::vector<double> values_;
  std::vector<DecisionTreeModel::Node> nodes_;
};

}  // namespace

const char* LearnerKindName(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kOls:
      return "ols";
    case LearnerKind::kRidge:
      return "ridge";
    case LearnerKind::kLasso:
      return "lasso";
    case LearnerKind::kLogistic:
      return "logistic";
    case LearnerKind::kKnn:
      return "knn";
    case LearnerKind::kDecisionTree:
      return "decision_tree";
    case LearnerKind::kNGram:
      return "ngram";
    case LearnerKind::kConstant:
      return "constant";
  }
  return "unknown";
}

absl::StatusOr<LearnerKind> ParseLearnerKind(std::string_view name) {
  for (LearnerKind k :
       {LearnerKind::kOls, LearnerKind::kRidge, LearnerKind::kLasso,
        LearnerKind::kLogistic, LearnerKind::kKnn, LearnerKind::kDecisionTree,
        LearnerKind::kNGram, LearnerKind::kConstant}) {
    if (name == LearnerKindName(k)) return k;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown learner '", std::string(name), "'"));
}

LearnerSpec LearnerSpec::Ols() { return LearnerSpec{}; }

LearnerSpec LearnerSpec::Ridge(double alpha) {
  LearnerSpec s;
  s.kind = LearnerKind::kRidge;
  s.alpha = alpha;
  return s;
}

LearnerSpec LearnerSpec::Lasso(double alpha) {
  LearnerSpec s;
  s.kind = LearnerKind::kLasso;
  s.alpha = alpha;
  return s;
}

LearnerSpec LearnerSpec::Logistic(int max_iter, double tol) {
  LearnerSpec s;
  s.kind = LearnerKind::kLogistic;
  s.max_iter = max_iter;
  s.tol = tol;
  return s;
}

LearnerSpec LearnerSpec::Knn(int k) {
  LearnerSpec s;
  s.kind = LearnerKind::kKnn;
  s.k = k;
  return s;
}

LearnerSpec LearnerSpec::DecisionTree() {
  LearnerSpec s;
  s.kind = LearnerKind::kDecisionTree;
  return s;
}

LearnerSpec LearnerSpec::NGram(int order) {
  LearnerSpec s;
  s.kind = LearnerKind::kNGram;
  s.ngram_order = order;
  return s;
}

LearnerSpec LearnerSpec::Constant() {
  LearnerSpec s;
  s.kind = LearnerKind::kConstant;
  return s;
}

absl::Status ValidateSpec(const LearnerSpec& spec) {
  switch (spec.kind) {
    case LearnerKind::kRidge:
    case LearnerKind::kLasso:
      if (!(spec.alpha > 0.0)) {
        return absl::InvalidArgumentError("alpha must be > 0");
      }
      break;
    case LearnerKind::kLogistic:
      if (spec.max_iter < 1 || !(spec.tol > 0.0) || spec.l2 < 0.0) {
        return absl::InvalidArgumentError(
            "logistic needs max_iter >= 1, tol > 0, l2 >= 0");
      }
      break;
    case LearnerKind::kKnn:
      if (spec.k < 1) return absl::InvalidArgumentError("k must be >= 1");
      break;
    case LearnerKind::kNGram:
      if (spec.ngram_order < 1 || spec.ngram_order > 3) {
        return absl::InvalidArgumentError("ngram order must be 1, 2 or 3");
      }
      break;
    default:
      break;
  }
  if (spec.num_classes < 0) {
    return absl::InvalidArgumentError("num_classes must be >= 0");
  }
  return absl::OkStatus();
}

std::string DescribeSpec(const LearnerSpec& spec) {
  switch (spec.kind) {
    case LearnerKind::kRidge:
    case LearnerKind::kLasso:
      return absl::StrFormat("%s(alpha=%g)", LearnerKindName(spec.kind),
                             spec.alpha);
    case LearnerKind::kLogistic:
      return absl::StrFormat("logistic(max_iter=%d, tol=%g, l2=%g)",
                             spec.max_iter, spec.tol, spec.l2);
    case LearnerKind::kKnn:
      return absl::StrFormat("knn(k=%d)", spec.k);
    case LearnerKind::kNGram:
      return absl::StrFormat("ngram(N=%d)", spec.ngram_order);
    default:
      return LearnerKindName(spec.kind);
  }
}

absl::StatusOr<ModelPtr> Train(const LearnerSpec& spec, const Dataset& dataset,
                               uint64_t /*seed*/) {
  if (absl::Status s = ValidateSpec(spec); !s.ok()) return s;
  if (absl::Status s = ValidateDataset(dataset); !s.ok()) return s;
  const InstanceKind ikind = dataset.instance_kind();
  const LabelKind lkind = dataset.label_kind();
  const int classes = std::max(spec.num_classes, dataset.NumClasses());

  if (spec.kind == LearnerKind::kConstant) {
    return std::make_shared<ConstantModel>(ikind, lkind, classes);
  }
  if (spec.kind == LearnerKind::kNGram) {
    if (ikind != InstanceKind::kTokens) {
      return KindMismatch("ngram learner needs token-sequence data");
    }
    auto model = std::make_shared<NGramModel>(spec.ngram_order);
    for (const Example& e : dataset.examples) {
      model->AddSentence(e.instance.tokens());
    }
    return model;
  }
  if (ikind == InstanceKind::kTokens) {
    return KindMismatch(
        absl::StrCat(LearnerKindName(spec.kind), " needs vector data"));
  }
  const bool real_labels = lkind == LabelKind::kReal;
  switch (spec.kind) {
    case LearnerKind::kOls:
    case LearnerKind::kRidge:
    case LearnerKind::kLasso:
      if (!real_labels) return KindMismatch("regression needs real labels");
      if (spec.kind == LearnerKind::kOls) return TrainOls(dataset);
      if (spec.kind == LearnerKind::kRidge) {
        return TrainRidge(dataset, spec.alpha);
      }
      return TrainLasso(dataset, spec.alpha);
    case LearnerKind::kLogistic:
      if (lkind != LabelKind::kClass) {
        return KindMismatch("logistic regression needs class labels");
      }
      return TrainLogistic(dataset, spec, std::max(classes, 2));
    case LearnerKind::kKnn:
      return std::make_shared<KnnModel>(dataset, spec.k, classes);
    case LearnerKind::kDecisionTree: {
      if (lkind == LabelKind::kSequenceProb) {
        return KindMismatch("decision tree needs real or class labels");
      }
      TreeBuilder builder(dataset, real_labels, classes);
      return std::make_shared<DecisionTreeModel>(
          real_labels, static_cast<int>(dataset[0].instance.dimension()),
          builder.Build());
    }
    default:
      break;
  }
  return absl::InternalError("unhandled learner kind");
}

LinearModel::LinearModel(std::vector<double> weights, double intercept,
                         bool converged, int iterations)
    : weights_(std::move(weights)),
      intercept_(intercept),
      converged_(converged),
      iterations_(iterations) {}

absl::StatusOr<Prediction> LinearModel::Predict(const Instance& x) const {
  if (absl::Status s = CheckDimension(x, weights_.size()); !s.ok()) return s;
  double y = intercept_;
  for (size_t j = 0; j < weights_.size(); ++j) y += weights_[j] * x.coords()[j];
  return Prediction::RealValue(y);
}

std::string LinearModel::Describe() const {
  return absl::StrFormat("linear(d=%d, converged=%d, iterations=%d)",
                         weights_.size(), converged_, iterations_);
}

LogisticModel::LogisticModel(int num_classes, int dimension,
                             std::vector<double> weights, bool converged,
                             int iterations, double gradient_norm)
    : num_classes_(num_classes),
      dimension_(dimension),
      weights_(std::move(weights)),
      converged_(converged),
      iterations_(iterations),
      gradient_norm_(gradient_norm) {}

absl::StatusOr<Prediction> LogisticModel::Predict(const Instance& x) const {
  if (absl::Status s = CheckDimension(x, dimension_); !s.ok()) return s;
  const int p = dimension_ + 1;
  std::vector<double> scores(num_classes_);
  for (int c = 0; c < num_classes_; ++c) {
    double s = weights_[c * p + dimension_];
    for (int j = 0; j < dimension_; ++j)
      s += weights_[c * p + j] * x.coords()[j];
    scores[c] = s;
  }
  const double m = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (double& s : scores) {
    s = std::exp(s - m);
    total += s;
  }
  for (double& s : scores) s /= total;
  return Prediction::Distribution(std::move(scores));
}

std::string LogisticModel::Describe() const {
  return absl::StrFormat(
      "logistic(classes=%d, d=%d, converged=%d, iterations=%d, |grad|=%g)",
      num_classes_, dimension_, converged_, iterations_, gradient_norm_);
}

double LogisticObjective(const Dataset& dataset, int num_classes, double l2,
                         std::span<const double> params) {
  const MatrixXd x_aug = AugmentedFeatures(dataset);
  const int p = static_cast<int>(x_aug.cols());
  MatrixXd m(num_classes, p);
  for (int c = 0; c < num_classes; ++c) {
    for (int j = 0; j < p; ++j) m(c, j) = params[c * p + j];
  }
  return ObjectiveAt(x_aug, ClassLabels(dataset), m, l2);
}

KnnModel::KnnModel(Dataset stored, int k, int num_classes)
    : kind_(stored.instance_kind()),
      stored_(std::move(stored)),
      k_(k),
      num_classes_(num_classes) {}

std::vector<size_t> KnnModel::Neighbours(const Instance& x) const {
  std::vector<std::pair<double, size_t>> dist(stored_.size());
  for (size_t i = 0; i < stored_.size(); ++i) {
    const auto& c = stored_[i].instance.coords();
    double d2 = 0.0;
    for (size_t j = 0; j < c.size(); ++j) {
      const double diff = c[j] - x.coords()[j];
      d2 += diff * diff;
    }
    dist[i] = {d2, i};
  }
  const size_t k = std::min<size_t>(static_cast<size_t>(k_), dist.size());
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
  std::vector<size_t> out(k);
  for (size_t i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

absl::StatusOr<Prediction> KnnModel::Predict(const Instance& x) const {
  if (x.kind() != kind_) return KindMismatch("knn instance kind");
  if (absl::Status s = CheckDimension(x, stored_[0].instance.dimension());
      !s.ok()) {
    return s;
  }
  const std::vector<size_t> nn = Neighbours(x);
  const double k = static_cast<double>(nn.size());
  if (stored_.label_kind() == LabelKind::kReal) {
    double mean = 0.0;
    for (size_t i : nn) mean += stored_[i].label.value;
    return Prediction::RealValue(mean / k);
  }
  std::vector<double> votes(std::max(num_classes_, 1), 0.0);
  for (size_t i : nn) votes[stored_[i].label.class_id] += 1.0 / k;
  return Prediction::Distribution(std::move(votes));
}

std::string KnnModel::Describe() const {
  return absl::StrFormat("knn(k=%d, stored=%d)", k_, stored_.size());
}

DecisionTreeModel::DecisionTreeModel(bool regression, int dimension,
                                     std::vector<Node> nodes)
    : regression_(regression),
      dimension_(dimension),
      nodes_(std::move(nodes)) {}

absl::StatusOr<Prediction> DecisionTreeModel::Predict(const Instance& x) const {
  if (absl::Status s = CheckDimension(x, dimension_); !s.ok()) return s;
  int id = 0;
  while (nodes_[id].feature >= 0) {
    const Node& node = nodes_[id];
    id = x.coords()[node.feature] <= node.threshold ? node.left : node.right;
  }
  if (regression_) return Prediction::RealValue(nodes_[id].value);
  return Prediction::Distribution(nodes_[id].distribution);
}

int DecisionTreeModel::num_leaves() const {
  int leaves = 0;
  for (const Node& n : nodes_) leaves += n.feature < 0 ? 1 : 0;
  return leaves;
}

std::string DecisionTreeModel::Describe() const {
  return absl::StrFormat("decision_tree(%s, nodes=%d, leaves=%d)",
                         regression_ ? "regression" : "gini", nodes_.size(),
                         num_leaves());
}

NGramModel::NGramModel(int order)
    : order_(order), counts_(order + 1), totals_(order + 1, 0) {}

uint64_t NGramModel::Pack(std::span<const TokenId> gram) {
  // 20 bits per token, order <= 3; the length tag keeps orders apart.
  uint64_t key = gram.size();
  for (TokenId t : gram) key = (key << 20) | static_cast<uint64_t>(t);
  return key;
}

void NGramModel::AddSentence(std::span<const TokenId> tokens) {
  std::vector<TokenId> padded(order_ - 1, kStartToken);
  padded.insert(padded.end(), tokens.begin(), tokens.end());
  padded.push_back(kEndToken);
  for (int n = 1; n <= order_; ++n) {
    for (size_t i = 0; i + n <= padded.size(); ++i) {
      ++counts_[n][Pack(std::span(padded).subspan(i, n))];
      ++totals_[n];
      if (n == order_ && n > 1) {
        ++context_counts_[Pack(std::span(padded).subspan(i, n - 1))];
      }
    }
  }
}

int64_t NGramModel::Count(std::span<const TokenId> gram) const {
  if (gram.empty() || static_cast<int>(gram.size()) > order_) return 0;
  const auto& table = counts_[gram.size()];
  const auto it = table.find(Pack(gram));
  return it == table.end() ? 0 : it->second;
}

int64_t NGramModel::ContextCount(std::span<const TokenId> prefix) const {
  if (order_ == 1) return totals_[1];
  const auto it = context_counts_.find(Pack(prefix));
  return it == context_counts_.end() ? 0 : it->second;
}

std::vector<std::pair<std::vector<TokenId>, int64_t>> NGramModel::Grams(
    int n) const {
  std::vector<std::pair<std::vector<TokenId>, int64_t>> out;
  if (n < 1 || n > order_) return out;
  for (const auto& [key, count] : counts_[n]) {
    std::vector<TokenId> gram(n);
    uint64_t k = key;
    for (int i = n - 1; i >= 0; --i) {
      gram[i] = static_cast<TokenId>(k & 0xFFFFF);
      k >>= 20;
    }
    out.emplace_back(std::move(gram), count);
  }
  return out;
}

absl::StatusOr<Prediction> NGramModel::Predict(const Instance& x) const {
  if (x.kind() != InstanceKind::kTokens) {
    return KindMismatch("ngram model needs token instances");
  }
  const auto& tokens = x.tokens();
  if (x.is_fragment()) {
    if (tokens.empty() || static_cast<int>(tokens.size()) > order_) {
      return absl::InvalidArgumentError(
          absl::StrCat("FragmentLengthMismatch: fragment of length ",
                       tokens.size(), " for an order-", order_, " model"));
    }
    const int n = static_cast<int>(tokens.size());
    if (totals_[n] == 0) return Prediction::SequenceProb(0.0);
    return Prediction::SequenceProb(static_cast<double>(Count(tokens)) /
                                    static_cast<double>(totals_[n]));
  }
  std::vector<TokenId> padded(order_ - 1, kStartToken);
  padded.insert(padded.end(), tokens.begin(), tokens.end());
  padded.push_back(kEndToken);
  double prob = 1.0;
  for (size_t end = order_; end <= padded.size(); ++end) {
    const std::span<const TokenId> gram =
        std::span(padded).subspan(end - order_, order_);
    const int64_t denominator = ContextCount(gram.first(order_ - 1));
    if (denominator == 0) return Prediction::SequenceProb(0.0);
    prob *= static_cast<double>(Count(gram)) / static_cast<double>(denominator);
    if (prob == 0.0) break;
  }
  return Prediction::SequenceProb(prob);
}

std::string NGramModel::Describe() const {
  return absl::StrFormat("ngram(N=%d, C_N=%d, distinct=%d)", order_,
                         totals_[order_], counts_[order_].size());
}

absl::StatusOr<double> SequenceProbability(const Model& model,
                                           const Instance& seq) {
  if (dynamic_cast<const NGramModel*>(&model) == nullptr) {
    return KindMismatch("sequence probability needs an ngram model");
  }
  absl::StatusOr<Prediction> p = model.Predict(seq);
  if (!p.ok()) return p.status();
  return p->value;
}

ConstantModel::ConstantModel(InstanceKind kind, LabelKind label_kind,
                             int num_classes)
    : kind_(kind), label_kind_(label_kind), num_classes_(num_classes) {}

absl::StatusOr<Prediction> ConstantModel::Predict(const Instance& x) const {
  if (x.kind() != kind_) return KindMismatch("constant model instance kind");
  switch (label_kind_) {
    case LabelKind::kClass: {
      const int c = std::max(num_classes_, 1);
      return Prediction::Distribution(std::vector<double>(c, 1.0 / c));
    }
    case LabelKind::kSequenceProb:
      return Prediction::SequenceProb(0.0);
    case LabelKind::kReal:
      break;
  }
  return Prediction::RealValue(0.0);
}

std::string ConstantModel::Describe() const { return "constant"; }

}  // namespace unlearnaudit
