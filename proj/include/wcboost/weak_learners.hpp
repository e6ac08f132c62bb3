/*
 * Copyright 2026 The wcboost Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Weak learning algorithms. A learner receives the training sample and either
// class weights (worst-class booster) or instance weights (average booster)
// and returns a hypothesis minimising the corresponding weighted error.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wcboost/core.hpp"
#include "wcboost/errors.hpp"
#include "wcboost/hedge.hpp"

namespace wcboost {

// ---------------------------------------------------------------------------
// Class-weighted objective
// ---------------------------------------------------------------------------

// Instance i of class k gets w_k / n_k, so that the weighted 0-1 loss of any
// hypothesis equals sum_k w_k * (class-k error rate).
inline std::vector<double> instance_weights_from_class_weights(
    const LabeledDataset& data, const ClassWeights& w) {
  data.require_nonempty_classes();
  if (w.size() != static_cast<std::size_t>(data.num_classes())) {
    throw_contract("class weight count does not match num_classes");
  }
  std::vector<double> per_class(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    per_class[k] = w[k] / static_cast<double>(data.class_count(static_cast<int>(k)));
  }
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out[i] = per_class[static_cast<std::size_t>(data.label(i))];
  }
  return out;
}

inline double weighted_error(std::span<const int> predictions,
                             const LabeledDataset& data,
                             std::span<const double> weights) {
  if (predictions.size() != data.size() || weights.size() != data.size()) {
    throw_contract("weighted_error: length mismatch");
  }
  double err = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (predictions[i] != data.label(i)) err += weights[i];
  }
  return err;
}

// ---------------------------------------------------------------------------
// Weak learnability
// ---------------------------------------------------------------------------

struct WeakLearnabilityCheck {
  double theta = 0.75;
  double gamma = 0.0995;
  double epsilon = 0.0005;
  // Confidence parameter; reported only, never used in a computation.
  double delta = 0.05;

  // Absolute slack on the penalty-mean comparison, absorbing the rounding
  // of 1/2 - gamma (e.g. 0.5 - 0.1 != 0.4 exactly).
  static constexpr double kComparisonSlack = 1e-12;

  void validate() const {
    validate_theta(theta);
    validate_gamma(gamma);
    if (!(epsilon > 0.0)) throw_config("epsilon must be positive");
  }
  double threshold() const { return 0.5 - gamma; }
};

struct WeakLearnabilityResult {
  bool satisfied = false;
  double penalty_mean = 0.0;
  std::size_t failing_classes = 0;
  std::vector<int> penalties;
};

inline WeakLearnabilityResult check_weak_learnability(
    const ClassErrorReport& report, const WeakLearnabilityCheck& check) {
  check.validate();
  WeakLearnabilityResult r;
  r.penalties = penalties(report, check.theta);
  r.failing_classes = static_cast<std::size_t>(
      std::count(r.penalties.begin(), r.penalties.end(), 1));
  r.penalty_mean = static_cast<double>(r.failing_classes) /
                   static_cast<double>(r.penalties.size());
  r.satisfied = r.penalty_mean <=
                check.threshold() + WeakLearnabilityCheck::kComparisonSlack;
  return r;
}

template <Predictor P>
WeakLearnabilityResult check_weak_learnability(
    const P& h, const LabeledDataset& data,
    const WeakLearnabilityCheck& check) {
  return check_weak_learnability(worst_class_error(h, data), check);
}

// floor(0.8 K) / K - 1/2 - epsilon.
inline double default_gamma(int num_classes, double epsilon) {
  if (num_classes < 2) throw_config("default_gamma needs K >= 2");
  if (!(epsilon > 0.0 && epsilon < 0.01)) {
    throw_config("epsilon must lie in (0, 0.01)");
  }
  const int majority = (8 * num_classes) / 10;
  const double gamma = static_cast<double>(majority) /
                           static_cast<double>(num_classes) -
                       0.5 - epsilon;
  if (!(gamma > 0.0)) {
    throw_config("default gamma is not positive for K = " +
                 std::to_string(num_classes) + "; supply gamma explicitly");
  }
  return gamma;
}

// ---------------------------------------------------------------------------
// Learner contract
// ---------------------------------------------------------------------------

class WeakLearner {
 public:
  virtual ~WeakLearner() = default;

  // Minimise sum_k w_k * R_{S_k}(h).
  virtual Hypothesis train(const LabeledDataset& data,
                           const ClassWeights& class_weights) const = 0;

  // Minimise sum_i weights_i * I(h(x_i) != y_i). Optional.
  virtual Hypothesis train_instances(
      const LabeledDataset& /*data*/,
      std::span<const double> /*instance_weights*/) const {
    throw_contract(name() + " does not support instance weights");
  }

  virtual std::string name() const = 0;
};

// ---------------------------------------------------------------------------
// Decision trees
// ---------------------------------------------------------------------------

class DecisionTree final : public HypothesisModel {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;  // x[feature] <= threshold goes left
    int left = -1;
    int right = -1;
    int label = 0;  // weighted-majority class of the node's instances
    int depth = 0;
  };

  DecisionTree(std::vector<Node> nodes, int num_classes, std::size_t dim)
      : nodes_(std::move(nodes)), num_classes_(num_classes), dim_(dim) {
    if (nodes_.empty()) throw_contract("tree needs a root");
  }

  int predict(std::span<const double> x) const override {
    int i = 0;
    while (nodes_[static_cast<std::size_t>(i)].feature >= 0) {
      const Node& n = nodes_[static_cast<std::size_t>(i)];
      i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                : n.right;
    }
    return nodes_[static_cast<std::size_t>(i)].label;
  }

  // Same splits down to `depth`; nodes at that depth become leaves that
  // predict their stored majority label.
  DecisionTree truncated(int depth) const {
    std::vector<Node> out;
    copy_truncated(0, depth, out);
    return DecisionTree(std::move(out), num_classes_, dim_);
  }

  int depth() const {
    int d = 0;
    for (const auto& n : nodes_) d = std::max(d, n.depth);
    return d;
  }
  std::size_t leaf_count() const {
    return static_cast<std::size_t>(std::count_if(
        nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
  }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  int num_classes() const noexcept { return num_classes_; }
  std::size_t dim() const noexcept { return dim_; }

  // {"type":"tree","num_classes":K,"dim":d,"root":node}, where a node is
  // {"feature":f,"threshold":t,"left":node,"right":node} or {"class":k}.
  // Feature indices are 0-based, classes 1-based.
  json to_json() const override {
    return json{{"type", "tree"},
                {"num_classes", num_classes_},
                {"dim", dim_},
                {"root", node_json(0)}};
  }

  static DecisionTree from_json(const json& j) {
    if (j.at("type").get<std::string>() != "tree") {
      throw_contract("not a tree document");
    }
    const int k = j.at("num_classes").get<int>();
    const auto d = j.at("dim").get<std::size_t>();
    std::vector<Node> nodes;
    parse_node(j.at("root"), 0, k, d, nodes);
    return DecisionTree(std::move(nodes), k, d);
  }

 private:
  int copy_truncated(int src, int depth, std::vector<Node>& out) const {
    const Node& n = nodes_[static_cast<std::size_t>(src)];
    const int id = static_cast<int>(out.size());
    out.push_back(n);
    if (n.feature < 0 || n.depth >= depth) {
      out[static_cast<std::size_t>(id)].feature = -1;
      out[static_cast<std::size_t>(id)].left = -1;
      out[static_cast<std::size_t>(id)].right = -1;
      out[static_cast<std::size_t>(id)].threshold = 0.0;
      return id;
    }
    const int l = copy_truncated(n.left, depth, out);
    const int r = copy_truncated(n.right, depth, out);
    out[static_cast<std::size_t>(id)].left = l;
    out[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  json node_json(int i) const {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.feature < 0) return json{{"class", n.label + 1}};
    return json{{"feature", n.feature},
                {"threshold", n.threshold},
                {"left", node_json(n.left)},
                {"right", node_json(n.right)}};
  }

  static int parse_node(const json& j, int depth, int k, std::size_t d,
                        std::vector<Node>& out) {
    const int id = static_cast<int>(out.size());
    out.push_back(Node{});
    out.back().depth = depth;
    if (j.contains("class")) {
      const int c = j.at("class").get<int>() - 1;
      if (c < 0 || c >= k) throw_contract("leaf class out of range");
      out[static_cast<std::size_t>(id)].label = c;
      return id;
    }
    const int f = j.at("feature").get<int>();
    if (f < 0 || static_cast<std::size_t>(f) >= d) {
      throw_contract("split feature out of range");
    }
    const double t = j.at("threshold").get<double>();
    const int l = parse_node(j.at("left"), depth + 1, k, d, out);
    const int r = parse_node(j.at("right"), depth + 1, k, d, out);
    Node& n = out[static_cast<std::size_t>(id)];
    n.feature = f;
    n.threshold = t;
    n.left = l;
    n.right = r;
    n.label = out[static_cast<std::size_t>(l)].label;
    return id;
  }

  std::vector<Node> nodes_;
  int num_classes_;
  std::size_t dim_;
};

namespace detail {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;
};

// Midpoint of two consecutive distinct values, kept in [lo, hi) so that
// `x <= threshold` separates them.
inline double midpoint(double lo, double hi) {
  const double m = lo + (hi - lo) / 2.0;
  return m < hi ? m : lo;
}

// W - sum_c W_c^2 / W, i.e. total weight times Gini impurity.
inline double gini_mass(std::span<const double> totals) {
  double w = 0.0;
  double sq = 0.0;
  for (double t : totals) {
    w += t;
    sq += t * t;
  }
  return w > 0.0 ? w - sq / w : 0.0;
}

// W - max_c W_c: weighted error of predicting the majority class.
inline double majority_error(std::span<const double> totals) {
  double w = 0.0;
  double best = 0.0;
  for (double t : totals) {
    w += t;
    best = std::max(best, t);
  }
  return w - best;
}

// Scans every feature and every midpoint threshold over `rows`, minimising
// `score(left_totals) + score(right_totals)`. Candidates are visited in
// (feature, threshold) order and only a strictly better score (beyond a
// relative tolerance) replaces the incumbent.
template <class Score>
std::optional<SplitChoice> best_split(const LabeledDataset& data,
                                      std::span<const double> weights,
                                      std::span<const std::size_t> rows,
                                      std::span<const double> totals,
                                      Score score) {
  const auto k = static_cast<std::size_t>(data.num_classes());
  double w_total = 0.0;
  for (double t : totals) w_total += t;
  const double tol = 1e-12 * std::max(1.0, w_total);

  std::optional<SplitChoice> best;
  std::vector<std::size_t> order(rows.begin(), rows.end());
  std::vector<double> left(k);
  std::vector<double> right(k);
  for (std::size_t f = 0; f < data.dim(); ++f) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return data.feature(a, f) < data.feature(b, f);
                     });
    std::fill(left.begin(), left.end(), 0.0);
    std::copy(totals.begin(), totals.end(), right.begin());
    for (std::size_t pos = 0; pos + 1 < order.size(); ++pos) {
      const std::size_t i = order[pos];
      const auto c = static_cast<std::size_t>(data.label(i));
      left[c] += weights[i];
      right[c] -= weights[i];
      const double lo = data.feature(i, f);
      const double hi = data.feature(order[pos + 1], f);
      if (!(lo < hi)) continue;
      const double s = score(std::span<const double>(left)) +
                       score(std::span<const double>(right));
      if (!best || s < best->score - tol) {
        best = SplitChoice{static_cast<int>(f), midpoint(lo, hi), s};
      }
    }
  }
  return best;
}

inline std::vector<double> class_totals(const LabeledDataset& data,
                                        std::span<const double> weights,
                                        std::span<const std::size_t> rows) {
  std::vector<double> t(static_cast<std::size_t>(data.num_classes()), 0.0);
  for (std::size_t i : rows) t[static_cast<std::size_t>(data.label(i))] += weights[i];
  return t;
}

class TreeBuilder {
 public:
  TreeBuilder(const LabeledDataset& data, std::span<const double> weights,
              int max_depth)
      : data_(data), weights_(weights), max_depth_(max_depth) {}

  DecisionTree build() {
    std::vector<std::size_t> rows(data_.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    grow(rows, 0);
    return DecisionTree(std::move(nodes_), data_.num_classes(), data_.dim());
  }

 private:
  int grow(std::vector<std::size_t>& rows, int depth) {
    const auto totals = class_totals(data_, weights_, rows);
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(DecisionTree::Node{});
    nodes_.back().label = argmax_lowest<double>(totals);
    nodes_.back().depth = depth;

    const auto occupied =
        std::count_if(totals.begin(), totals.end(), [](double t) { return t > 0.0; });
    if (depth >= max_depth_ || occupied <= 1) return id;

    const auto split = best_split(data_, weights_, rows, totals, gini_mass);
    if (!split) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : rows) {
      (data_.feature(i, static_cast<std::size_t>(split->feature)) <=
               split->threshold
           ? left
           : right)
          .push_back(i);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    auto& n = nodes_[static_cast<std::size_t>(id)];
    n.feature = split->feature;
    n.threshold = split->threshold;
    n.left = l;
    n.right = r;
    return id;
  }

  const LabeledDataset& data_;
  std::span<const double> weights_;
  int max_depth_;
  std::vector<DecisionTree::Node> nodes_;
};

inline void check_instance_weights(const LabeledDataset& data,
                                   std::span<const double> weights) {
  if (weights.size() != data.size()) {
    throw_contract("instance weight count does not match dataset size");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw_contract("instance weights must be finite and non-negative");
    }
  }
}

}  // namespace detail

// Greedy axis-aligned CART on weighted Gini impurity. Leaves predict the
// weighted-majority class (ties to the lowest index). Splits are tried on
// impure nodes even when they do not reduce impurity.
inline DecisionTree grow_gini_tree(const LabeledDataset& data,
                                   std::span<const double> instance_weights,
                                   int max_depth) {
  if (max_depth < 1) throw_config("max_depth must be at least 1");
  if (data.empty()) throw_contract("cannot grow a tree on an empty dataset");
  detail::check_instance_weights(data, instance_weights);
  return detail::TreeBuilder(data, instance_weights, max_depth).build();
}

// Depth-1 tree minimising weighted 0-1 error directly.
inline DecisionTree grow_error_stump(const LabeledDataset& data,
                                     std::span<const double> instance_weights) {
  if (data.empty()) throw_contract("cannot grow a stump on an empty dataset");
  detail::check_instance_weights(data, instance_weights);
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const auto totals = detail::class_totals(data, instance_weights, rows);
  using Node = DecisionTree::Node;
  std::vector<Node> nodes{Node{-1, 0.0, -1, -1, argmax_lowest<double>(totals), 0}};
  const auto split = detail::best_split(data, instance_weights, rows, totals,
                                        detail::majority_error);
  if (!split || !(split->score < detail::majority_error(totals))) {
    return DecisionTree(std::move(nodes), data.num_classes(), data.dim());
  }
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  for (std::size_t i : rows) {
    (data.feature(i, static_cast<std::size_t>(split->feature)) <= split->threshold
         ? left
         : right)
        .push_back(i);
  }
  const auto lt = detail::class_totals(data, instance_weights, left);
  const auto rt = detail::class_totals(data, instance_weights, right);
  nodes[0].feature = split->feature;
  nodes[0].threshold = split->threshold;
  nodes[0].left = 1;
  nodes[0].right = 2;
  nodes.push_back(Node{-1, 0.0, -1, -1, argmax_lowest<double>(lt), 1});
  nodes.push_back(Node{-1, 0.0, -1, -1, argmax_lowest<double>(rt), 1});
  return DecisionTree(std::move(nodes), data.num_classes(), data.dim());
}

template <Predictor P>
double weighted_error(const P& h, const LabeledDataset& data,
                      std::span<const double> weights) {
  return weighted_error(predict_all(h, data), data, weights);
}

// Gate applied while growing: the first candidate depth that passes wins.
using GrowthGate = std::function<bool(const Hypothesis&)>;

namespace detail {

// Candidates at depth d = 1..max_depth: the Gini tree truncated at d, or the
// best error stump when it has strictly lower weighted error. Returns the
// first candidate accepted by `gate` (or the deepest candidate if none is).
inline Hypothesis fit_tree_candidates(const LabeledDataset& data,
                                      std::span<const double> weights,
                                      int max_depth, const GrowthGate& gate) {
  const DecisionTree full = grow_gini_tree(data, weights, max_depth);
  auto stump = std::make_shared<const DecisionTree>(grow_error_stump(data, weights));
  const double stump_err = weighted_error(*stump, data, weights);
  const double tol = 1e-12;
  const int deepest = std::max(1, full.depth());
  const int first = gate ? 1 : deepest;
  Hypothesis chosen;
  for (int d = first; d <= deepest; ++d) {
    auto tree = std::make_shared<const DecisionTree>(full.truncated(d));
    const double tree_err = weighted_error(*tree, data, weights);
    chosen = stump_err < tree_err - tol ? Hypothesis(stump) : Hypothesis(tree);
    if (gate && gate(chosen)) return chosen;
  }
  return chosen;
}

}  // namespace detail

// Weighted tree for the class-weighted objective. `seed` is accepted for the
// learner contract; the greedy construction is deterministic without it.
inline Hypothesis train_weighted_tree(const LabeledDataset& data,
                                      const ClassWeights& w, int max_depth,
                                      std::uint64_t /*seed*/ = 0) {
  const auto iw = instance_weights_from_class_weights(data, w);
  return detail::fit_tree_candidates(data, iw, max_depth, nullptr);
}

inline Hypothesis train_stump(const LabeledDataset& data,
                              std::span<const double> instance_weights) {
  return Hypothesis(std::make_shared<const DecisionTree>(
      grow_error_stump(data, instance_weights)));
}

// Tree learner used by the boosters. With an early-stop check, growth stops
// at the shallowest depth whose tree passes the booster's weak-learning gate:
// the class-penalty check for class weights, weighted error < 1/2 - gamma for
// instance weights.
class TreeLearner final : public WeakLearner {
 public:
  explicit TreeLearner(int max_depth = 6,
                       std::optional<WeakLearnabilityCheck> early_stop = {})
      : max_depth_(max_depth), early_stop_(early_stop) {
    if (max_depth_ < 1) throw_config("max_depth must be at least 1");
    if (early_stop_) early_stop_->validate();
  }

  Hypothesis train(const LabeledDataset& data,
                   const ClassWeights& w) const override {
    const auto iw = instance_weights_from_class_weights(data, w);
    GrowthGate gate;
    if (early_stop_) {
      gate = [&data, &w, check = *early_stop_](const Hypothesis& h) {
        const auto result = check_weak_learnability(h, data, check);
        return result.satisfied &&
               w.dot(std::span<const int>(result.penalties)) <=
                   check.threshold() + WeakLearnabilityCheck::kComparisonSlack;
      };
    }
    return detail::fit_tree_candidates(data, iw, max_depth_, gate);
  }

  Hypothesis train_instances(const LabeledDataset& data,
                             std::span<const double> weights) const override {
    GrowthGate gate;
    if (early_stop_) {
      gate = [&data, weights, limit = early_stop_->threshold()](const Hypothesis& h) {
        return weighted_error(h, data, weights) < limit;
      };
    }
    return detail::fit_tree_candidates(data, weights, max_depth_, gate);
  }

  std::string name() const override { return "tree"; }
  int max_depth() const noexcept { return max_depth_; }

 private:
  int max_depth_;
  std::optional<WeakLearnabilityCheck> early_stop_;
};

class StumpLearner final : public WeakLearner {
 public:
  Hypothesis train(const LabeledDataset& data,
                   const ClassWeights& w) const override {
    return train_stump(data, instance_weights_from_class_weights(data, w));
  }
  Hypothesis train_instances(const LabeledDataset& data,
                             std::span<const double> weights) const override {
    return train_stump(data, weights);
  }
  std::string name() const override { return "stump"; }
};

// ---------------------------------------------------------------------------
// Lookup-table hypotheses and the oracle learner
// ---------------------------------------------------------------------------

// Exact feature-vector lookup; unseen inputs get `fallback`.
class TableModel final : public HypothesisModel {
 public:
  using Index = std::map<std::vector<double>, std::size_t>;

  TableModel(std::shared_ptr<const Index> index, std::vector<int> labels,
             int fallback)
      : index_(std::move(index)), labels_(std::move(labels)), fallback_(fallback) {}

  static std::shared_ptr<const Index> index_of(const LabeledDataset& data) {
    auto index = std::make_shared<Index>();
    for (std::size_t i = 0; i < data.size(); ++i) {
      auto x = data.features(i);
      index->emplace(std::vector<double>(x.begin(), x.end()), i);
    }
    return index;
  }

  int predict(std::span<const double> x) const override {
    auto it = index_->find(std::vector<double>(x.begin(), x.end()));
    return it == index_->end() ? fallback_ : labels_[it->second];
  }

  json to_json() const override {
    json entries = json::array();
    for (const auto& [x, i] : *index_) {
      entries.push_back({{"features", x}, {"class", labels_[i] + 1}});
    }
    return json{{"type", "table"}, {"fallback", fallback_ + 1}, {"entries", entries}};
  }

  static TableModel from_json(const json& j) {
    auto index = std::make_shared<Index>();
    std::vector<int> labels;
    for (const auto& e : j.at("entries")) {
      index->emplace(e.at("features").get<std::vector<double>>(), labels.size());
      labels.push_back(e.at("class").get<int>() - 1);
    }
    return TableModel(std::move(index), std::move(labels),
                      j.at("fallback").get<int>() - 1);
  }

 private:
  std::shared_ptr<const Index> index_;
  std::vector<int> labels_;
  int fallback_;
};

// Test double that satisfies the class-penalty weak-learning condition by
// construction. Each round the floor(K (1/2 - gamma)) classes with the
// smallest weights (ties to the lowest index) are failed outright: every
// instance is predicted as the next class. Every other class misclassifies a
// fixed, seed-chosen subset of floor(0.8 (1 - theta) n_k) instances, which
// keeps its error strictly below 1 - theta.
class OracleWeakLearner final : public WeakLearner {
 public:
  OracleWeakLearner(double gamma, double theta, std::uint64_t seed)
      : gamma_(gamma), theta_(theta), seed_(seed) {
    validate_gamma(gamma_);
    validate_theta(theta_);
  }

  std::size_t failing_class_count(int num_classes) const {
    return static_cast<std::size_t>(
        std::floor(num_classes * (0.5 - gamma_) + 1e-9));
  }

  std::vector<int> failing_classes(const ClassWeights& w) const {
    std::vector<int> order(w.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return w[static_cast<std::size_t>(a)] < w[static_cast<std::size_t>(b)];
    });
    order.resize(failing_class_count(static_cast<int>(w.size())));
    std::sort(order.begin(), order.end());
    return order;
  }

  Hypothesis train(const LabeledDataset& data,
                   const ClassWeights& w) const override {
    const auto parts = partition_by_class(data);
    const int k = data.num_classes();
    if (w.size() != static_cast<std::size_t>(k)) {
      throw_contract("class weight count does not match num_classes");
    }
    std::vector<int> labels(data.labels().begin(), data.labels().end());
    std::vector<bool> fail(static_cast<std::size_t>(k), false);
    for (int c : failing_classes(w)) fail[static_cast<std::size_t>(c)] = true;

    std::mt19937_64 rng(seed_);
    for (int c = 0; c < k; ++c) {
      auto members = parts[static_cast<std::size_t>(c)];
      // Shuffle is drawn for every class so the chosen subsets do not depend
      // on which classes fail this round.
      std::shuffle(members.begin(), members.end(), rng);
      const int wrong_label = (c + 1) % k;
      std::size_t wrong = members.size();
      if (!fail[static_cast<std::size_t>(c)]) {
        wrong = static_cast<std::size_t>(
            std::floor(0.8 * (1.0 - theta_) * static_cast<double>(members.size())));
      }
      for (std::size_t j = 0; j < wrong; ++j) labels[members[j]] = wrong_label;
    }
    return Hypothesis(std::make_shared<const TableModel>(
        TableModel::index_of(data), std::move(labels), 0));
  }

  std::string name() const override { return "oracle"; }

 private:
  double gamma_;
  double theta_;
  std::uint64_t seed_;
};

inline OracleWeakLearner oracle_weak_learner(double gamma, double theta,
                                             std::uint64_t seed) {
  return OracleWeakLearner(gamma, theta, seed);
}

// Loads any serializable hypothesis (tree or table).
inline Hypothesis hypothesis_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "tree") {
    return Hypothesis(std::make_shared<const DecisionTree>(DecisionTree::from_json(j)));
  }
  if (type == "table") {
    return Hypothesis(std::make_shared<const TableModel>(TableModel::from_json(j)));
  }
  throw_contract("cannot deserialize hypothesis of type '" + type + "'");
}

}  // namespace wcboost
