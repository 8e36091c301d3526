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

#include "unlearnaudit/attacks.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "status_macros.h"
#include "unlearnaudit/unlearning.h"

namespace unlearnaudit {

namespace {

int VectorArgmax(const Prediction& p) { return p.Argmax(); }

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

bool IsBoundary(TokenId t) { return t == kStartToken || t == kEndToken; }

}  // namespace

GuessBit DecideBySign(double statistic, Rng& rng) {
  if (statistic > 0) return {0, false};
  if (statistic < 0) return {1, false};
  return {rng.Bit(), true};
}

const char* MetricKindName(MetricKind kind) {
  switch (kind) {
    case MetricKind::kAbsDiff:
      return "abs_diff";
    case MetricKind::kL1Confidence:
      return "l1_confidence";
    case MetricKind::kHamming:
      return "hamming";
    case MetricKind::kNormalizedHamming:
      return "normalized_hamming";
    case MetricKind::kZeroOneExact:
      return "zero_one_exact";
  }
  return "unknown";
}

absl::StatusOr<MetricKind> ParseMetricKind(std::string_view name) {
  for (MetricKind k :
       {MetricKind::kAbsDiff, MetricKind::kL1Confidence, MetricKind::kHamming,
        MetricKind::kNormalizedHamming, MetricKind::kZeroOneExact}) {
    if (name == MetricKindName(k)) return k;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("ConfigInvalid: unknown metric '", std::string(name), "'"));
}

absl::StatusOr<double> PredictionDistance(MetricKind kind, const Prediction& a,
                                          const Prediction& b) {
  if (a.kind != b.kind) return KindMismatch("predictions of different kinds");
  switch (kind) {
    case MetricKind::kAbsDiff:
      if (a.kind == PredictionKind::kClassDistribution) {
        return KindMismatch("abs_diff needs real-valued predictions");
      }
      return std::abs(a.value - b.value);
    case MetricKind::kL1Confidence: {
      if (a.kind != PredictionKind::kClassDistribution) {
        return KindMismatch("l1_confidence needs class distributions");
      }
      const size_t n = std::max(a.distribution.size(), b.distribution.size());
      double total = 0.0;
      for (size_t c = 0; c < n; ++c) {
        total += std::abs(a.ProbabilityOf(static_cast<int>(c)) -
                          b.ProbabilityOf(static_cast<int>(c)));
      }
      return total;
    }
    case MetricKind::kZeroOneExact:
      return a == b ? 0.0 : 1.0;
    case MetricKind::kHamming:
    case MetricKind::kNormalizedHamming:
      break;
  }
  return KindMismatch("hamming metrics compare instances, not predictions");
}

double HammingDistance(const Instance& a, const Instance& b) {
  const auto& x = a.coords();
  const auto& y = b.coords();
  const size_t n = std::max(x.size(), y.size());
  double diff = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double u = i < x.size() ? x[i] : 0.0;
    const double v = i < y.size() ? y[i] : 0.0;
    if (u != v) diff += 1.0;
  }
  return diff;
}

absl::StatusOr<double> ExampleDistance(const DistanceMetric& metric,
                                       const Example& a, const Example& b) {
  switch (metric.kind) {
    case MetricKind::kHamming:
    case MetricKind::kNormalizedHamming: {
      if (!a.instance.is_vector() || !b.instance.is_vector()) {
        return KindMismatch("hamming needs vector instances");
      }
      if (a.instance.dimension() != b.instance.dimension()) {
        return KindMismatch("hamming needs equal dimensions");
      }
      const double h = HammingDistance(a.instance, b.instance);
      if (metric.kind == MetricKind::kHamming) return h;
      const size_t d = a.instance.dimension();
      return d == 0 ? 0.0 : h / static_cast<double>(d);
    }
    case MetricKind::kAbsDiff:
      if (a.label.kind == LabelKind::kClass ||
          b.label.kind == LabelKind::kClass) {
        return KindMismatch("abs_diff needs real labels");
      }
      return std::abs(a.label.value - b.label.value);
    case MetricKind::kL1Confidence:
      return KindMismatch("l1_confidence compares predictions only");
    case MetricKind::kZeroOneExact:
      switch (metric.scope) {
        case MetricScope::kExample:
          return a == b ? 0.0 : 1.0;
        case MetricScope::kInstance:
          return a.instance == b.instance ? 0.0 : 1.0;
        case MetricScope::kLabel:
          return a.label == b.label ? 0.0 : 1.0;
      }
  }
  return absl::InvalidArgumentError("unknown metric");
}

absl::StatusOr<GuessBit> DelInfExm(const Example& e0, const Example& e1,
                                   Oracle& before, Oracle& after, LossKind loss,
                                   Rng& rng) {
  UA_ASSIGN(p0, before.Query(e0.instance));
  UA_ASSIGN(p1, before.Query(e1.instance));
  UA_ASSIGN(q0, after.Query(e0.instance));
  UA_ASSIGN(q1, after.Query(e1.instance));
  UA_ASSIGN(l_p0, EvaluateLoss(loss, p0, e0.label));
  UA_ASSIGN(l_p1, EvaluateLoss(loss, p1, e1.label));
  UA_ASSIGN(l_q0, EvaluateLoss(loss, q0, e0.label));
  UA_ASSIGN(l_q1, EvaluateLoss(loss, q1, e1.label));
  const double alpha = (l_q0 - l_p0) - (l_q1 - l_p1);
  return DecideBySign(alpha, rng);
}

absl::StatusOr<GuessBit> DelInfIns(const Instance& x0, const Instance& x1,
                                   Oracle& before, Oracle& after,
                                   MetricKind metric, Rng& rng) {
  UA_ASSIGN(p0, before.Query(x0));
  UA_ASSIGN(p1, before.Query(x1));
  UA_ASSIGN(q0, after.Query(x0));
  UA_ASSIGN(q1, after.Query(x1));
  UA_ASSIGN(d0, PredictionDistance(metric, p0, q0));
  UA_ASSIGN(d1, PredictionDistance(metric, p1, q1));
  return DecideBySign(d0 - d1, rng);
}

absl::StatusOr<int> LossThresholdMi::Member(const Example& e, Oracle& oracle) {
  UA_ASSIGN(p, oracle.Query(e.instance));
  UA_ASSIGN(l, EvaluateLoss(loss_, p, e.label));
  return l <= tau_ ? 1 : 0;
}

absl::StatusOr<double> LossThresholdMi::Confidence(const Example& e,
                                                   Oracle& oracle) {
  UA_ASSIGN(p, oracle.Query(e.instance));
  UA_ASSIGN(l, EvaluateLoss(loss_, p, e.label));
  return -l;
}

absl::StatusOr<int> MiThreshold(const Example& e, Oracle& oracle, double tau,
                                LossKind loss) {
  LossThresholdMi mi(tau, loss);
  return mi.Member(e, oracle);
}

absl::StatusOr<double> CalibrateThreshold(const Dataset& holdout,
                                          Oracle& oracle, LossKind loss) {
  if (holdout.empty()) {
    return absl::InvalidArgumentError("EmptyDataset: calibration holdout");
  }
  std::vector<double> losses;
  losses.reserve(holdout.size());
  for (const Example& e : holdout.examples) {
    UA_ASSIGN(p, oracle.Query(e.instance));
    UA_ASSIGN(l, EvaluateLoss(loss, p, e.label));
    losses.push_back(l);
  }
  return Median(std::move(losses));
}

absl::StatusOr<GuessBit> MiToDi(MembershipInference& mi, const Example& e0,
                                const Example& e1, Oracle& before,
                                Oracle& after, ReductionMode mode, Rng& rng) {
  if (mode == ReductionMode::kLabel) {
    UA_ASSIGN(b0, mi.Member(e0, after));
    UA_ASSIGN(b1, mi.Member(e1, after));
    if (b0 == 0 && b1 == 1) return GuessBit{0, false};
    if (b0 == 1 && b1 == 0) return GuessBit{1, false};
    return GuessBit{rng.Bit(), true};
  }
  UA_ASSIGN(c0, mi.Confidence(e0, before));
  UA_ASSIGN(c1, mi.Confidence(e1, before));
  UA_ASSIGN(d0, mi.Confidence(e0, after));
  UA_ASSIGN(d1, mi.Confidence(e1, after));
  // The deleted example loses more confidence.
  return DecideBySign((d1 - c1) - (d0 - c0), rng);
}

Instance CoordinateMajority(const std::vector<const Instance*>& points,
                            size_t dimension) {
  std::vector<double> bits(dimension, 0.0);
  if (points.empty()) return Instance::BinaryUnchecked(std::move(bits));
  std::vector<int64_t> ones(dimension, 0);
  for (const Instance* p : points) {
    const auto& c = p->coords();
    for (size_t j = 0; j < dimension && j < c.size(); ++j) {
      if (c[j] != 0.0) ++ones[j];
    }
  }
  const int64_t n = static_cast<int64_t>(points.size());
  for (size_t j = 0; j < dimension; ++j) {
    bits[j] = 2 * ones[j] > n ? 1.0 : 0.0;
  }
  return Instance::BinaryUnchecked(std::move(bits));
}

namespace {

absl::StatusOr<std::vector<int>> ArgmaxAll(Oracle& oracle,
                                           const std::vector<Instance>& xs) {
  std::vector<int> out;
  out.reserve(xs.size());
  for (const Instance& x : xs) {
    UA_ASSIGN(p, oracle.Query(x));
    if (p.kind != PredictionKind::kClassDistribution) {
      return KindMismatch("expected class distributions");
    }
    out.push_back(VectorArgmax(p));
  }
  return out;
}

InstanceReconstruction MajorityOfChanged(const std::vector<Instance>& aux,
                                         const std::vector<int>& before,
                                         const std::vector<int>& after) {
  std::vector<const Instance*> changed;
  for (size_t i = 0; i < aux.size(); ++i) {
    if (before[i] != after[i]) changed.push_back(&aux[i]);
  }
  const size_t d = aux.empty() ? 0 : aux.front().dimension();
  InstanceReconstruction out;
  out.instance = CoordinateMajority(changed, d);
  out.empty_disagreement = changed.empty();
  out.disagreement_size = static_cast<int64_t>(changed.size());
  return out;
}

}  // namespace

absl::StatusOr<InstanceReconstruction> DelInsRec(
    Oracle& before, Oracle& after, const std::vector<Instance>& aux) {
  UA_ASSIGN(b, ArgmaxAll(before, aux));
  UA_ASSIGN(a, ArgmaxAll(after, aux));
  return MajorityOfChanged(aux, b, a);
}

// ---------------------------------------------------------------------------
// N-gram differencing.

NGramDiffer::NGramDiffer(const Dictionary& dictionary, int order,
                         NGramDiffOptions options)
    : vocabulary_(static_cast<int64_t>(dictionary.size())),
      order_(order),
      options_(options) {}

absl::StatusOr<double> NGramDiffer::Fragment(Oracle& oracle,
                                             const std::vector<TokenId>& gram) {
  UA_ASSIGN(p, oracle.Query(Instance::Fragment(gram)));
  return p.value;
}

namespace {

// Enumerates all V^n token tuples in lexicographic order.
std::vector<std::vector<TokenId>> AllTuples(int64_t vocabulary, int n) {
  std::vector<std::vector<TokenId>> out;
  std::vector<TokenId> cur(n, 0);
  if (n == 0 || vocabulary == 0) return out;
  while (true) {
    out.push_back(cur);
    int pos = n - 1;
    while (pos >= 0 && cur[pos] + 1 >= vocabulary) cur[pos--] = 0;
    if (pos < 0) break;
    ++cur[pos];
  }
  return out;
}

double SafePow(int64_t base, int exp) {
  return std::pow(static_cast<double>(base), static_cast<double>(exp));
}

}  // namespace

absl::Status NGramDiffer::ObserveBefore(Oracle& before) {
  if (order_ < 1) return absl::InvalidArgumentError("order must be >= 1");
  candidates_.clear();
  before_probs_.clear();
  pruned_ = false;
  const double cap = static_cast<double>(options_.query_cap);
  const int64_t start_count = before.query_count();
  if (SafePow(vocabulary_, order_) <= cap) {
    candidates_ = AllTuples(vocabulary_, order_);
  } else {
    if (order_ < 2 || SafePow(vocabulary_, order_ - 1) > cap) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "DictionaryTooLarge: ", vocabulary_, "^", order_,
          " fragment queries exceed the cap of ", options_.query_cap));
    }
    pruned_ = true;
    // Support of the (N-1)-grams under the before-deletion model. An N-gram
    // can only have positive probability if both of its (N-1)-token halves
    // do, so nothing with h(g) > 0 is skipped.
    const auto halves = AllTuples(vocabulary_, order_ - 1);
    absl::flat_hash_set<uint64_t> support;
    std::vector<std::vector<TokenId>> by_first(vocabulary_);
    for (const auto& g : halves) {
      UA_ASSIGN(p, Fragment(before, g));
      if (p > 0.0) support.insert(NGramModel::Pack(g));
    }
    std::vector<std::vector<TokenId>> live;
    for (const auto& g : halves) {
      if (support.contains(NGramModel::Pack(g))) live.push_back(g);
    }
    // live is sorted, so extensions come out in lexicographic order.
    const int64_t budget =
        options_.query_cap - before.query_count() + start_count;
    for (const auto& prefix : live) {
      std::vector<TokenId> suffix(prefix.begin() + 1, prefix.end());
      suffix.push_back(0);
      for (TokenId t = 0; t < vocabulary_; ++t) {
        suffix.back() = t;
        if (!support.contains(NGramModel::Pack(suffix))) continue;
        std::vector<TokenId> g = prefix;
        g.push_back(t);
        candidates_.push_back(std::move(g));
      }
      if (static_cast<int64_t>(candidates_.size()) > budget) {
        return absl::ResourceExhaustedError(absl::StrCat(
            "DictionaryTooLarge: pruned enumeration exceeds the cap of ",
            options_.query_cap));
      }
    }
  }
  before_probs_.reserve(candidates_.size());
  for (const auto& g : candidates_) {
    UA_ASSIGN(p, Fragment(before, g));
    before_probs_.push_back(p);
  }
  before_queries_ = before.query_count() - start_count;
  return absl::OkStatus();
}

absl::StatusOr<DiffGraph> NGramDiffer::Compare(Oracle& after) {
  std::vector<double> after_probs;
  after_probs.reserve(candidates_.size());
  for (const auto& g : candidates_) {
    UA_ASSIGN(p, Fragment(after, g));
    after_probs.push_back(p);
  }
  std::vector<double> ratios;
  double min_positive = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < candidates_.size(); ++i) {
    if (before_probs_[i] > 0.0) {
      ratios.push_back(after_probs[i] / before_probs_[i]);
      min_positive = std::min(min_positive, before_probs_[i]);
    }
  }
  const double r0 = Median(ratios);

  // Multiplicities: the total count C of the before model is recovered as
  // 1 / (smallest positive frequency) when that makes every frequency an
  // integer count; the after total is C / r0.
  bool counts_ok = options_.estimate_multiplicity && order_ >= 2 &&
                   std::isfinite(min_positive) && r0 > 0.0;
  double total = 0.0;
  if (counts_ok) {
    total = std::round(1.0 / min_positive);
    for (size_t i = 0; i < candidates_.size() && counts_ok; ++i) {
      const double c = total * before_probs_[i];
      if (std::abs(c - std::round(c)) > 1e-6 * std::max(1.0, c)) {
        counts_ok = false;
      }
    }
  }

  std::vector<DiffNode> nodes;
  for (size_t i = 0; i < candidates_.size(); ++i) {
    const double h = before_probs_[i];
    const double hd = after_probs[i];
    bool decreased;
    if (options_.raw_rule) {
      decreased = h > hd;
    } else {
      decreased = h > 0.0 && (hd == 0.0 || hd / h < r0 - options_.tolerance);
    }
    if (!decreased) continue;
    const auto& g = candidates_[i];
    if (order_ == 1 && IsBoundary(g[0])) continue;
    DiffNode node;
    node.gram = g;
    if (counts_ok) {
      const double k = std::round(total * h - (total / r0) * hd);
      node.multiplicity = std::max(1, static_cast<int>(k));
    }
    nodes.push_back(std::move(node));
  }
  DiffGraph graph = BuildDiffGraph(order_, std::move(nodes));
  graph.pruned = pruned_;
  graph.queries_per_oracle = before_queries_;
  return graph;
}

absl::StatusOr<DiffGraph> NGramDiff(Oracle& before, Oracle& after,
                                    const Dictionary& dictionary, int order,
                                    const NGramDiffOptions& options) {
  NGramDiffer differ(dictionary, order, options);
  if (auto s = differ.ObserveBefore(before); !s.ok()) return s;
  return differ.Compare(after);
}

DiffGraph BuildDiffGraph(int order, std::vector<DiffNode> nodes) {
  std::sort(
      nodes.begin(), nodes.end(),
      [](const DiffNode& a, const DiffNode& b) { return a.gram < b.gram; });
  DiffGraph graph;
  graph.order = order;
  graph.nodes = std::move(nodes);
  const size_t n = graph.nodes.size();
  graph.successors.assign(n, {});
  for (size_t i = 0; i < n; ++i) {
    graph.repeat_budget += graph.nodes[i].multiplicity - 1;
    const auto& g = graph.nodes[i].gram;
    if (order >= 2 && !g.empty() && g.front() == kStartToken) {
      graph.start_nodes.push_back(static_cast<int>(i));
    }
  }
  if (order < 2) return graph;
  for (size_t i = 0; i < n; ++i) {
    const auto& a = graph.nodes[i].gram;
    for (size_t j = 0; j < n; ++j) {
      const auto& b = graph.nodes[j].gram;
      if (std::equal(a.begin() + 1, a.end(), b.begin())) {
        graph.successors[i].push_back(static_cast<int>(j));
      }
    }
  }
  return graph;
}

namespace {

class PathSearcher {
 public:
  PathSearcher(const DiffGraph& graph, const PathSearchOptions& options)
      : graph_(graph), options_(options) {
    const size_t n = graph.nodes.size();
    max_visits_ = 1 + std::max(0, options.max_repeats);
    required_.resize(n);
    for (size_t i = 0; i < n; ++i) {
      required_[i] = std::min(graph.nodes[i].multiplicity, max_visits_);
      required_total_ += required_[i];
    }
    visits_.assign(n, 0);
  }

  absl::StatusOr<std::vector<int>> Run() {
    const int64_t n = static_cast<int64_t>(graph_.nodes.size());
    const int64_t longest = n * max_visits_;
    for (int64_t limit = required_total_; limit <= longest; ++limit) {
      limit_ = limit;
      for (int s : graph_.start_nodes) {
        unmet_ = required_total_;
        std::fill(visits_.begin(), visits_.end(), 0);
        path_.clear();
        UA_ASSIGN(found, Visit(s));
        if (found) return path_;
      }
    }
    return absl::NotFoundError("NoCoveringPath: diff graph has no walk");
  }

 private:
  absl::StatusOr<bool> Visit(int v) {
    if (++expansions_ > options_.expansion_cap) {
      return absl::ResourceExhaustedError(
          absl::StrCat("SearchBudgetExceeded: more than ",
                       options_.expansion_cap, " node expansions"));
    }
    if (visits_[v] >= max_visits_) return false;
    const bool counts = visits_[v] < required_[v];
    ++visits_[v];
    if (counts) --unmet_;
    path_.push_back(v);
    if (unmet_ == 0) return true;
    if (static_cast<int64_t>(path_.size()) + unmet_ <= limit_) {
      for (int w : graph_.successors[v]) {
        UA_ASSIGN(found, Visit(w));
        if (found) return true;
      }
    }
    path_.pop_back();
    if (counts) ++unmet_;
    --visits_[v];
    return false;
  }

  const DiffGraph& graph_;
  PathSearchOptions options_;
  int max_visits_ = 1;
  std::vector<int> required_;
  int64_t required_total_ = 0;
  std::vector<int> visits_;
  int64_t unmet_ = 0;
  int64_t limit_ = 0;
  int64_t expansions_ = 0;
  std::vector<int> path_;
};

bool AllReachable(const DiffGraph& graph) {
  std::vector<bool> seen(graph.nodes.size(), false);
  std::vector<int> stack(graph.start_nodes.begin(), graph.start_nodes.end());
  for (int s : stack) seen[s] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : graph.successors[v]) {
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

}  // namespace

absl::StatusOr<std::vector<TokenId>> NGramPathSearch(
    const DiffGraph& graph, const PathSearchOptions& options) {
  if (graph.order < 2) {
    return absl::NotFoundError("NoCoveringPath: unigram graph has no edges");
  }
  if (graph.nodes.empty() || graph.start_nodes.empty() ||
      !AllReachable(graph)) {
    return absl::NotFoundError("NoCoveringPath: nodes unreachable from <s>");
  }
  PathSearcher searcher(graph, options);
  UA_ASSIGN(path, searcher.Run());
  std::vector<TokenId> tokens = graph.nodes[path.front()].gram;
  for (size_t i = 1; i < path.size(); ++i) {
    tokens.push_back(graph.nodes[path[i]].gram.back());
  }
  std::vector<TokenId> out;
  for (TokenId t : tokens) {
    if (!IsBoundary(t)) out.push_back(t);
  }
  return out;
}

std::vector<TokenId> BagOfWords(const DiffGraph& graph) {
  std::vector<TokenId> out;
  for (const DiffNode& node : graph.nodes) {
    for (TokenId t : node.gram) {
      if (!IsBoundary(t)) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Label reconstruction.

namespace {

absl::StatusOr<std::vector<std::vector<double>>> Distributions(
    Oracle& oracle, const std::vector<Instance>& probes) {
  std::vector<std::vector<double>> out;
  out.reserve(probes.size());
  for (const Instance& x : probes) {
    UA_ASSIGN(p, oracle.Query(x));
    if (p.kind != PredictionKind::kClassDistribution) {
      return KindMismatch("label reconstruction needs class distributions");
    }
    out.push_back(std::move(p.distribution));
  }
  return out;
}

int LeastConfidentChange(const std::vector<std::vector<double>>& before,
                         const std::vector<std::vector<double>>& after,
                         int num_classes) {
  int width = num_classes;
  for (const auto& d : before) width = std::max<int>(width, d.size());
  for (const auto& d : after) width = std::max<int>(width, d.size());
  std::vector<double> change(std::max(width, 1), 0.0);
  for (size_t i = 0; i < before.size(); ++i) {
    for (int c = 0; c < width; ++c) {
      const double b =
          c < static_cast<int>(before[i].size()) ? before[i][c] : 0;
      const double a = c < static_cast<int>(after[i].size()) ? after[i][c] : 0;
      change[c] += a - b;
    }
  }
  return static_cast<int>(std::min_element(change.begin(), change.end()) -
                          change.begin());
}

}  // namespace

absl::StatusOr<int> DelLblRec(Oracle& before, Oracle& after,
                              const std::vector<Instance>& probes,
                              int num_classes) {
  UA_ASSIGN(b, Distributions(before, probes));
  UA_ASSIGN(a, Distributions(after, probes));
  return LeastConfidentChange(b, a, num_classes);
}

std::vector<Instance> BoundingBoxProbes(const Dataset& reference, int count,
                                        Rng& rng) {
  std::vector<Instance> out;
  if (reference.empty() || count <= 0) return out;
  const size_t d = reference[0].instance.dimension();
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (const Example& e : reference.examples) {
    for (size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], e.instance.coords()[j]);
      hi[j] = std::max(hi[j], e.instance.coords()[j]);
    }
  }
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    std::vector<double> x(d);
    for (size_t j = 0; j < d; ++j) x[j] = rng.Uniform(lo[j], hi[j]);
    out.push_back(Instance::Dense(std::move(x)));
  }
  return out;
}

absl::StatusOr<double> InsRevLblRec(const Instance& x, Oracle& before,
                                    Oracle& after, double lambda) {
  UA_ASSIGN(p, before.Query(x));
  UA_ASSIGN(q, after.Query(x));
  if (p.kind != PredictionKind::kRealValue ||
      q.kind != PredictionKind::kRealValue) {
    return KindMismatch("label reversal needs real-valued predictions");
  }
  return p.value + lambda * (p.value - q.value);
}

absl::StatusOr<double> TuneLambda(const LearnerSpec& spec,
                                  const DatasetDistribution& attacker_data,
                                  const std::vector<double>& grid, int trials,
                                  uint64_t seed) {
  if (grid.empty()) return absl::InvalidArgumentError("empty lambda grid");
  if (trials <= 0) return absl::InvalidArgumentError("trials must be > 0");
  std::vector<double> error(grid.size(), 0.0);
  for (int t = 0; t < trials; ++t) {
    UA_ASSIGN(data, attacker_data.Sample(DeriveSeed(seed, t, "tune-data")));
    UA_ASSIGN(model, Train(spec, data, DeriveSeed(seed, t, "tune-train")));
    Rng rng(DeriveSeed(seed, t, "tune-pick"));
    const size_t i = rng.UniformInt(data.size());
    UA_ASSIGN(del, DeleteExamples(spec, data, DeletionRequest{{i}},
                                  DeriveSeed(seed, t, "tune-del")));
    Oracle before(model, Phase::kBeforeDeletion);
    Oracle after(del.model, Phase::kAfterDeletion);
    UA_ASSIGN(p, before.Query(data[i].instance));
    UA_ASSIGN(q, after.Query(data[i].instance));
    for (size_t k = 0; k < grid.size(); ++k) {
      const double guess = p.value + grid[k] * (p.value - q.value);
      error[k] += std::abs(guess - data[i].label.value);
    }
  }
  size_t best = 0;
  for (size_t k = 1; k < grid.size(); ++k) {
    if (error[k] < error[best] ||
        (error[k] == error[best] && grid[k] < grid[best])) {
      best = k;
    }
  }
  return grid[best];
}

// ---------------------------------------------------------------------------
// Two-phase attackers.

namespace {

class DelInfExmAttacker : public InferenceAttacker {
 public:
  explicit DelInfExmAttacker(LossKind loss) : loss_(loss) {}
  std::string name() const override { return "del_inf_exm"; }

  absl::Status ObserveBefore(const Challenge& c, Oracle& before,
                             Rng&) override {
    challenge_ = c;
    for (int b = 0; b < 2; ++b) {
      const Example& e = b == 0 ? c.e0 : c.e1;
      UA_ASSIGN(p, before.Query(e.instance));
      UA_ASSIGN(l, EvaluateLoss(loss_, p, e.label));
      before_loss_[b] = l;
    }
    return absl::OkStatus();
  }

  absl::StatusOr<GuessBit> GuessAfter(Oracle& after, Rng& rng) override {
    double delta[2];
    for (int b = 0; b < 2; ++b) {
      const Example& e = b == 0 ? challenge_.e0 : challenge_.e1;
      UA_ASSIGN(q, after.Query(e.instance));
      UA_ASSIGN(l, EvaluateLoss(loss_, q, e.label));
      delta[b] = l - before_loss_[b];
    }
    return DecideBySign(delta[0] - delta[1], rng);
  }

 private:
  LossKind loss_;
  Challenge challenge_;
  double before_loss_[2] = {0, 0};
};

class DelInfInsAttacker : public InferenceAttacker {
 public:
  explicit DelInfInsAttacker(MetricKind metric) : metric_(metric) {}
  std::string name() const override { return "del_inf_ins"; }
  bool needs_labels() const override { return false; }

  absl::Status ObserveBefore(const Challenge& c, Oracle& before,
                             Rng&) override {
    challenge_ = c;
    UA_ASSIGN(p0, before.Query(c.e0.instance));
    UA_ASSIGN(p1, before.Query(c.e1.instance));
    before_[0] = std::move(p0);
    before_[1] = std::move(p1);
    return absl::OkStatus();
  }

  absl::StatusOr<GuessBit> GuessAfter(Oracle& after, Rng& rng) override {
    UA_ASSIGN(q0, after.Query(challenge_.e0.instance));
    UA_ASSIGN(q1, after.Query(challenge_.e1.instance));
    UA_ASSIGN(d0, PredictionDistance(metric_, before_[0], q0));
    UA_ASSIGN(d1, PredictionDistance(metric_, before_[1], q1));
    return DecideBySign(d0 - d1, rng);
  }

 private:
  MetricKind metric_;
  Challenge challenge_;
  Prediction before_[2];
};

class ConstantGuessAttacker : public InferenceAttacker {
 public:
  explicit ConstantGuessAttacker(int bit) : bit_(bit) {}
  std::string name() const override { return "constant"; }
  bool needs_instances() const override { return false; }
  bool needs_labels() const override { return false; }
  absl::Status ObserveBefore(const Challenge&, Oracle&, Rng&) override {
    return absl::OkStatus();
  }
  absl::StatusOr<GuessBit> GuessAfter(Oracle&, Rng&) override {
    return GuessBit{bit_, false};
  }

 private:
  int bit_;
};

class MiReductionAttacker : public InferenceAttacker {
 public:
  MiReductionAttacker(std::shared_ptr<MembershipInference> mi,
                      ReductionMode mode, std::optional<Dataset> holdout,
                      LossKind loss)
      : mi_(std::move(mi)),
        mode_(mode),
        holdout_(std::move(holdout)),
        loss_(loss) {}

  std::string name() const override {
    return mode_ == ReductionMode::kLabel ? "mi_to_di_label"
                                          : "mi_to_di_confidence";
  }

  absl::Status ObserveBefore(const Challenge& c, Oracle& before,
                             Rng&) override {
    challenge_ = c;
    if (holdout_.has_value() && mode_ == ReductionMode::kLabel) {
      UA_ASSIGN(tau, CalibrateThreshold(*holdout_, before, loss_));
      static_cast<LossThresholdMi&>(*mi_).set_tau(tau);
    }
    if (mode_ == ReductionMode::kConfidence) {
      UA_ASSIGN(c0, mi_->Confidence(c.e0, before));
      UA_ASSIGN(c1, mi_->Confidence(c.e1, before));
      before_conf_[0] = c0;
      before_conf_[1] = c1;
    }
    return absl::OkStatus();
  }

  absl::StatusOr<GuessBit> GuessAfter(Oracle& after, Rng& rng) override {
    if (mode_ == ReductionMode::kLabel) {
      UA_ASSIGN(b0, mi_->Member(challenge_.e0, after));
      UA_ASSIGN(b1, mi_->Member(challenge_.e1, after));
      if (b0 == 0 && b1 == 1) return GuessBit{0, false};
      if (b0 == 1 && b1 == 0) return GuessBit{1, false};
      return GuessBit{rng.Bit(), true};
    }
    UA_ASSIGN(d0, mi_->Confidence(challenge_.e0, after));
    UA_ASSIGN(d1, mi_->Confidence(challenge_.e1, after));
    return DecideBySign((d1 - before_conf_[1]) - (d0 - before_conf_[0]), rng);
  }

 private:
  std::shared_ptr<MembershipInference> mi_;
  ReductionMode mode_;
  std::optional<Dataset> holdout_;
  LossKind loss_;
  Challenge challenge_;
  double before_conf_[2] = {0, 0};
};

Example GuessAsExample(const ReconstructionGuess& guess) {
  Example e;
  if (guess.instance.has_value()) {
    e.instance = *guess.instance;
  } else if (!guess.tokens.empty()) {
    e.instance = Instance::Sentence(guess.tokens);
  }
  if (guess.label.has_value()) e.label = *guess.label;
  return e;
}

class RecToInfAttacker : public InferenceAttacker {
 public:
  RecToInfAttacker(std::unique_ptr<ReconstructionAttacker> rec,
                   DistanceMetric metric, double eps)
      : rec_(std::move(rec)), metric_(metric), eps_(eps) {}

  std::string name() const override {
    return absl::StrCat("rec_to_inf(", rec_->name(), ")");
  }
  bool needs_instances() const override {
    return metric_.scope != MetricScope::kLabel &&
           metric_.kind != MetricKind::kAbsDiff;
  }
  bool needs_labels() const override {
    return metric_.scope != MetricScope::kInstance &&
           metric_.kind != MetricKind::kHamming &&
           metric_.kind != MetricKind::kNormalizedHamming;
  }

  absl::Status ObserveBefore(const Challenge& c, Oracle& before,
                             Rng& rng) override {
    challenge_ = c;
    return rec_->ObserveBefore(before, rng);
  }

  absl::StatusOr<GuessBit> GuessAfter(Oracle& after, Rng& rng) override {
    UA_ASSIGN(guess, rec_->GuessAfter(after, rng));
    const Example e = GuessAsExample(guess);
    UA_ASSIGN(d0, ExampleDistance(metric_, challenge_.e0, e));
    if (d0 <= eps_) return GuessBit{0, false};
    UA_ASSIGN(d1, ExampleDistance(metric_, challenge_.e1, e));
    if (d1 <= eps_) return GuessBit{1, false};
    return GuessBit{rng.Bit(), true};
  }

 private:
  std::unique_ptr<ReconstructionAttacker> rec_;
  DistanceMetric metric_;
  double eps_;
  Challenge challenge_;
};

class DelInsRecAttacker : public ReconstructionAttacker {
 public:
  explicit DelInsRecAttacker(std::vector<Instance> aux)
      : aux_(std::move(aux)) {}
  std::string name() const override { return "del_ins_rec"; }

  absl::Status ObserveBefore(Oracle& before, Rng&) override {
    UA_ASSIGN(b, ArgmaxAll(before, aux_));
    before_ = std::move(b);
    return absl::OkStatus();
  }

  absl::StatusOr<ReconstructionGuess> GuessAfter(Oracle& after, Rng&) override {
    UA_ASSIGN(a, ArgmaxAll(after, aux_));
    InstanceReconstruction r = MajorityOfChanged(aux_, before_, a);
    ReconstructionGuess g;
    g.instance = std::move(r.instance);
    g.failed = r.empty_disagreement;
    return g;
  }

 private:
  std::vector<Instance> aux_;
  std::vector<int> before_;
};

class SingleOracleDelInsRecAttacker : public ReconstructionAttacker {
 public:
  SingleOracleDelInsRecAttacker(std::vector<Instance> aux, Phase phase)
      : aux_(std::move(aux)), phase_(phase) {}
  std::string name() const override {
    return phase_ == Phase::kBeforeDeletion ? "del_ins_rec_before_only"
                                            : "del_ins_rec_after_only";
  }

  absl::Status ObserveBefore(Oracle& before, Rng&) override {
    if (phase_ != Phase::kBeforeDeletion) return absl::OkStatus();
    return Collect(before);
  }

  absl::StatusOr<ReconstructionGuess> GuessAfter(Oracle& after, Rng&) override {
    if (phase_ == Phase::kAfterDeletion) {
      UA_RETURN_IF_ERROR(Collect(after));
    }
    InstanceReconstruction r = MajorityOfChanged(aux_, first_, second_);
    ReconstructionGuess g;
    g.instance = std::move(r.instance);
    g.failed = r.empty_disagreement;
    return g;
  }

 private:
  absl::Status Collect(Oracle& oracle) {
    UA_ASSIGN(a, ArgmaxAll(oracle, aux_));
    UA_ASSIGN(b, ArgmaxAll(oracle, aux_));
    first_ = std::move(a);
    second_ = std::move(b);
    return absl::OkStatus();
  }

  std::vector<Instance> aux_;
  Phase phase_;
  std::vector<int> first_;
  std::vector<int> second_;
};

class NGramRecAttacker : public ReconstructionAttacker {
 public:
  NGramRecAttacker(const Dictionary& dictionary, int order,
                   NGramDiffOptions diff, PathSearchOptions search)
      : differ_(dictionary, order, diff), search_(search) {}
  std::string name() const override { return "ngram_rec"; }

  absl::Status ObserveBefore(Oracle& before, Rng&) override {
    return differ_.ObserveBefore(before);
  }

  absl::StatusOr<ReconstructionGuess> GuessAfter(Oracle& after, Rng&) override {
    UA_ASSIGN(graph, differ_.Compare(after));
    ReconstructionGuess g;
    auto path = NGramPathSearch(graph, search_);
    if (path.ok()) {
      g.tokens = *std::move(path);
    } else {
      g.tokens = BagOfWords(graph);
      g.failed = true;
    }
    return g;
  }

 private:
  NGramDiffer differ_;
  PathSearchOptions search_;
};

class DelLblRecAttacker : public ReconstructionAttacker {
 public:
  DelLblRecAttacker(std::vector<Instance> probes, int num_classes)
      : probes_(std::move(probes)), num_classes_(num_classes) {}
  std::string name() const override { return "del_lbl_rec"; }

  absl::Status ObserveBefore(Oracle& before, Rng&) override {
    UA_ASSIGN(b, Distributions(before, probes_));
    before_ = std::move(b);
    return absl::OkStatus();
  }

  absl::StatusOr<ReconstructionGuess> GuessAfter(Oracle& after, Rng&) override {
    UA_ASSIGN(a, Distributions(after, probes_));
    ReconstructionGuess g;
    g.label = Label::Class(LeastConfidentChange(before_, a, num_classes_));
    return g;
  }

 private:
  std::vector<Instance> probes_;
  int num_classes_;
  std::vector<std::vector<double>> before_;
};

class InsRevLblRecAttacker : public ReconstructionAttacker {
 public:
  explicit InsRevLblRecAttacker(double lambda) : lambda_(lambda) {}
  std::string name() const override { return "ins_rev_lbl_rec"; }
  void RevealInstance(const Instance& x) override { x_ = x; }

  absl::Status ObserveBefore(Oracle& before, Rng&) override {
    if (!x_.has_value()) {
      return absl::FailedPreconditionError(
          "ins_rev_lbl_rec needs the revealed instance");
    }
    UA_ASSIGN(p, before.Query(*x_));
    if (p.kind != PredictionKind::kRealValue) {
      return KindMismatch("label reversal needs real-valued predictions");
    }
    before_ = p.value;
    return absl::OkStatus();
  }

  absl::StatusOr<ReconstructionGuess> GuessAfter(Oracle& after, Rng&) override {
    UA_ASSIGN(q, after.Query(*x_));
    ReconstructionGuess g;
    g.label = Label::Real(before_ + lambda_ * (before_ - q.value));
    return g;
  }

 private:
  double lambda_;
  std::optional<Instance> x_;
  double before_ = 0.0;
};

}  // namespace

std::unique_ptr<InferenceAttacker> MakeDelInfExm(LossKind loss) {
  return std::make_unique<DelInfExmAttacker>(loss);
}

std::unique_ptr<InferenceAttacker> MakeDelInfIns(MetricKind metric) {
  return std::make_unique<DelInfInsAttacker>(metric);
}

std::unique_ptr<InferenceAttacker> MakeConstantGuess(int bit) {
  return std::make_unique<ConstantGuessAttacker>(bit);
}

std::unique_ptr<InferenceAttacker> MakeMiThresholdReduction(
    Dataset holdout, LossKind loss, ReductionMode mode) {
  return std::make_unique<MiReductionAttacker>(
      std::make_shared<LossThresholdMi>(0.0, loss), mode, std::move(holdout),
      loss);
}

std::unique_ptr<InferenceAttacker> MakeMiReduction(
    std::shared_ptr<MembershipInference> mi, ReductionMode mode) {
  return std::make_unique<MiReductionAttacker>(
      std::move(mi), mode, std::nullopt, LossKind::kZeroOne);
}

std::unique_ptr<InferenceAttacker> MakeRecToInf(
    std::unique_ptr<ReconstructionAttacker> rec, DistanceMetric metric,
    double eps) {
  return std::make_unique<RecToInfAttacker>(std::move(rec), metric, eps);
}

std::unique_ptr<ReconstructionAttacker> MakeDelInsRec(
    std::vector<Instance> aux) {
  return std::make_unique<DelInsRecAttacker>(std::move(aux));
}

std::unique_ptr<ReconstructionAttacker> MakeSingleOracleDelInsRec(
    std::vector<Instance> aux, Phase phase) {
  return std::make_unique<SingleOracleDelInsRecAttacker>(std::move(aux), phase);
}

std::unique_ptr<ReconstructionAttacker> MakeNGramRec(
    const Dictionary& dictionary, int order, NGramDiffOptions diff,
    PathSearchOptions search) {
  return std::make_unique<NGramRecAttacker>(dictionary, order, diff, search);
}

std::unique_ptr<ReconstructionAttacker> MakeDelLblRec(
    std::vector<Instance> probes, int num_classes) {
  return std::make_unique<DelLblRecAttacker>(std::move(probes), num_classes);
}

std::unique_ptr<ReconstructionAttacker> MakeInsRevLblRec(double lambda) {
  return std::make_unique<InsRevLblRecAttacker>(lambda);
}

}  // namespace unlearnaudit
