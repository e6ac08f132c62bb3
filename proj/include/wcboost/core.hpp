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

// Core domain types: labelled datasets, simplex weights, binary feedback,
// hypotheses and their majority-vote ensembles, and the class-wise error
// metrics every other module is built on.
//
// Class labels are 0-based everywhere inside the library. Files, JSON
// documents and CLI output use 1-based labels; conversion happens only at
// those boundaries.

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wcboost/errors.hpp"

namespace wcboost {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// LabeledDataset
// ---------------------------------------------------------------------------

// Row-major feature matrix with one class label per row. Construction checks
// label range and dimensionality; empty classes are representable so that
// partitioning can report them (see partition_by_class).
class LabeledDataset {
 public:
  LabeledDataset() = default;

  LabeledDataset(std::vector<double> features, std::size_t dim,
                 std::vector<int> labels, int num_classes)
      : features_(std::move(features)),
        labels_(std::move(labels)),
        dim_(dim),
        num_classes_(num_classes) {
    if (num_classes_ < 1) throw_config("num_classes must be positive");
    if (dim_ == 0) throw_dimension("feature dimension must be positive");
    if (features_.size() != dim_ * labels_.size()) {
      throw_dimension("feature matrix has " + std::to_string(features_.size()) +
                      " values, expected " +
                      std::to_string(dim_ * labels_.size()));
    }
    class_counts_.assign(static_cast<std::size_t>(num_classes_), 0);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      const int y = labels_[i];
      if (y < 0 || y >= num_classes_) {
        throw LabelError(i + 1, "label " + std::to_string(y + 1) +
                                    " outside 1.." +
                                    std::to_string(num_classes_));
      }
      ++class_counts_[static_cast<std::size_t>(y)];
    }
  }

  static LabeledDataset from_rows(const std::vector<std::vector<double>>& rows,
                                  std::vector<int> labels, int num_classes) {
    if (rows.size() != labels.size()) {
      throw_dimension("row count does not match label count");
    }
    const std::size_t d = rows.empty() ? 1 : rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (const auto& row : rows) {
      if (row.size() != d) throw_dimension("ragged feature rows");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return LabeledDataset(std::move(flat), d, std::move(labels), num_classes);
  }

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t dim() const noexcept { return dim_; }
  int num_classes() const noexcept { return num_classes_; }

  std::span<const double> features(std::size_t i) const {
    return {features_.data() + i * dim_, dim_};
  }
  double feature(std::size_t i, std::size_t f) const {
    return features_[i * dim_ + f];
  }
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const noexcept { return labels_; }
  std::span<const double> feature_matrix() const noexcept { return features_; }

  std::size_t class_count(int k) const {
    return class_counts_[static_cast<std::size_t>(k)];
  }
  std::span<const std::size_t> class_counts() const noexcept {
    return class_counts_;
  }
  std::size_t min_class_count() const {
    return class_counts_.empty()
               ? 0
               : *std::min_element(class_counts_.begin(), class_counts_.end());
  }

  // Throws EmptyClassError for the lowest-indexed class with no instances.
  void require_nonempty_classes() const {
    for (int k = 0; k < num_classes_; ++k) {
      if (class_counts_[static_cast<std::size_t>(k)] == 0) {
        throw EmptyClassError(k);
      }
    }
  }

  LabeledDataset subset(std::span<const std::size_t> rows) const {
    std::vector<double> f;
    std::vector<int> y;
    f.reserve(rows.size() * dim_);
    y.reserve(rows.size());
    for (std::size_t r : rows) {
      auto x = features(r);
      f.insert(f.end(), x.begin(), x.end());
      y.push_back(labels_[r]);
    }
    return LabeledDataset(std::move(f), dim_, std::move(y), num_classes_);
  }

  friend bool operator==(const LabeledDataset&,
                         const LabeledDataset&) = default;

 private:
  std::vector<double> features_;
  std::vector<int> labels_;
  std::size_t dim_ = 1;
  int num_classes_ = 1;
  std::vector<std::size_t> class_counts_;
};

// Index sets S_1..S_K. Every set is non-empty or EmptyClassError is thrown.
inline std::vector<std::vector<std::size_t>> partition_by_class(
    const LabeledDataset& data) {
  data.require_nonempty_classes();
  std::vector<std::vector<std::size_t>> parts(
      static_cast<std::size_t>(data.num_classes()));
  for (std::size_t k = 0; k < parts.size(); ++k) {
    parts[k].reserve(data.class_count(static_cast<int>(k)));
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    parts[static_cast<std::size_t>(data.label(i))].push_back(i);
  }
  return parts;
}

// ---------------------------------------------------------------------------
// Simplex weights and binary feedback
// ---------------------------------------------------------------------------

// A point on the probability simplex. Used for the K class weights of the
// worst-class booster and for the n instance weights of the baseline.
class ClassWeights {
 public:
  static constexpr double kTolerance = 1e-9;

  explicit ClassWeights(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw_contract("weights must be non-empty");
    double sum = 0.0;
    for (double v : w_) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw_contract("weights must be finite and non-negative");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kTolerance) {
      throw_contract("weights sum to " + std::to_string(sum) + ", not 1");
    }
  }

  static ClassWeights uniform(std::size_t k) {
    if (k == 0) throw_contract("weights must be non-empty");
    return ClassWeights(std::vector<double>(k, 1.0 / static_cast<double>(k)));
  }

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t k) const { return w_[k]; }
  std::span<const double> values() const noexcept { return w_; }

  template <class T>
  double dot(std::span<const T> v) const {
    double s = 0.0;
    for (std::size_t k = 0; k < w_.size(); ++k) {
      s += w_[k] * static_cast<double>(v[k]);
    }
    return s;
  }

  friend bool operator==(const ClassWeights&, const ClassWeights&) = default;

 private:
  std::vector<double> w_;
};

// r in {0,1}^K.
class FeedbackVector {
 public:
  explicit FeedbackVector(std::vector<int> r) : r_(std::move(r)) {
    for (int v : r_) {
      if (v != 0 && v != 1) {
        throw_contract("feedback entries must be 0 or 1, got " +
                       std::to_string(v));
      }
    }
  }

  std::size_t size() const noexcept { return r_.size(); }
  int operator[](std::size_t k) const { return r_[k]; }
  std::span<const int> values() const noexcept { return r_; }

  friend bool operator==(const FeedbackVector&,
                         const FeedbackVector&) = default;

 private:
  std::vector<int> r_;
};

// ---------------------------------------------------------------------------
// Hypotheses
// ---------------------------------------------------------------------------

// Trained, immutable predictor. Implementations must make predict() a pure
// function of the features.
class HypothesisModel {
 public:
  virtual ~HypothesisModel() = default;
  virtual int predict(std::span<const double> x) const = 0;
  virtual json to_json() const = 0;
};

// Value handle over a shared immutable model; cheap to copy.
class Hypothesis {
 public:
  Hypothesis() = default;
  explicit Hypothesis(std::shared_ptr<const HypothesisModel> model)
      : model_(std::move(model)) {}

  int predict(std::span<const double> x) const { return model_->predict(x); }
  json to_json() const { return model_->to_json(); }

  const HypothesisModel& model() const { return *model_; }
  explicit operator bool() const noexcept { return model_ != nullptr; }

  template <class M>
  const M* as() const {
    return dynamic_cast<const M*>(model_.get());
  }

 private:
  std::shared_ptr<const HypothesisModel> model_;
};

template <class F>
class FunctionModel final : public HypothesisModel {
 public:
  explicit FunctionModel(F f) : f_(std::move(f)) {}
  int predict(std::span<const double> x) const override { return f_(x); }
  json to_json() const override { return {{"type", "function"}}; }

 private:
  F f_;
};

// Wraps any callable `int(std::span<const double>)`. Not serializable.
template <class F>
Hypothesis make_function_hypothesis(F f) {
  return Hypothesis(std::make_shared<FunctionModel<F>>(std::move(f)));
}

template <class P>
concept Predictor = requires(const P& p, std::span<const double> x) {
  { p.predict(x) } -> std::convertible_to<int>;
};

template <Predictor P>
std::vector<int> predict_all(const P& predictor, const LabeledDataset& data) {
  std::vector<int> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out[i] = predictor.predict(data.features(i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Majority vote
// ---------------------------------------------------------------------------

// Index of the largest tally; ties go to the smallest class index.
template <class T>
int argmax_lowest(std::span<const T> tally) {
  int best = 0;
  for (std::size_t k = 1; k < tally.size(); ++k) {
    if (tally[k] > tally[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(k);
    }
  }
  return best;
}

// Plurality over member predictions (0-based classes in [0, num_classes)).
inline int vote(std::span<const int> member_predictions, int num_classes) {
  std::vector<std::size_t> tally(static_cast<std::size_t>(num_classes), 0);
  for (int p : member_predictions) {
    if (p < 0 || p >= num_classes) throw_contract("vote outside class range");
    ++tally[static_cast<std::size_t>(p)];
  }
  return argmax_lowest<std::size_t>(tally);
}

// Unweighted majority vote of T >= 1 hypotheses.
class Ensemble {
 public:
  Ensemble() = default;
  explicit Ensemble(int num_classes, std::size_t dim = 0)
      : num_classes_(num_classes), dim_(dim) {}
  Ensemble(int num_classes, std::vector<Hypothesis> members,
           std::size_t dim = 0)
      : members_(std::move(members)), num_classes_(num_classes), dim_(dim) {}

  void add(Hypothesis h) { members_.push_back(std::move(h)); }

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  int num_classes() const noexcept { return num_classes_; }
  // Input dimension, or 0 when unknown.
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Hypothesis>& members() const noexcept { return members_; }

  int predict(std::span<const double> x) const {
    if (members_.empty()) throw_contract("majority vote of an empty ensemble");
    std::vector<std::size_t> tally(static_cast<std::size_t>(num_classes_), 0);
    for (const auto& h : members_) {
      const int p = h.predict(x);
      if (p < 0 || p >= num_classes_) {
        throw_contract("member prediction outside class range");
      }
      ++tally[static_cast<std::size_t>(p)];
    }
    return argmax_lowest<std::size_t>(tally);
  }

  // Member-major evaluation; same result as calling predict() per row.
  std::vector<int> predict_all(const LabeledDataset& data) const {
    if (members_.empty()) throw_contract("majority vote of an empty ensemble");
    const std::size_t n = data.size();
    const auto k = static_cast<std::size_t>(num_classes_);
    std::vector<std::uint32_t> tally(n * k, 0);
    for (const auto& h : members_) {
      for (std::size_t i = 0; i < n; ++i) {
        const int p = h.predict(data.features(i));
        if (p < 0 || p >= num_classes_) {
          throw_contract("member prediction outside class range");
        }
        ++tally[i * k + static_cast<std::size_t>(p)];
      }
    }
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = argmax_lowest<std::uint32_t>({tally.data() + i * k, k});
    }
    return out;
  }

 private:
  std::vector<Hypothesis> members_;
  int num_classes_ = 0;
  std::size_t dim_ = 0;
};

inline int majority_vote(const Ensemble& ensemble, std::span<const double> x) {
  return ensemble.predict(x);
}

// ---------------------------------------------------------------------------
// Error metrics
// ---------------------------------------------------------------------------

struct ClassErrorReport {
  std::vector<double> per_class_error;
  std::vector<std::size_t> misclassified;
  std::vector<std::size_t> class_sizes;
  double worst_class_error = 0.0;
  // Pooled error over all instances, not the mean of per_class_error.
  double average_error = 0.0;

  int worst_class() const {
    return argmax_lowest<double>(per_class_error);
  }
};

inline void to_json(json& j, const ClassErrorReport& r) {
  j = json{{"per_class_error", r.per_class_error},
           {"misclassified", r.misclassified},
           {"class_sizes", r.class_sizes},
           {"worst_class_error", r.worst_class_error},
           {"average_error", r.average_error}};
}

inline void from_json(const json& j, ClassErrorReport& r) {
  j.at("per_class_error").get_to(r.per_class_error);
  j.at("misclassified").get_to(r.misclassified);
  j.at("class_sizes").get_to(r.class_sizes);
  j.at("worst_class_error").get_to(r.worst_class_error);
  j.at("average_error").get_to(r.average_error);
}

// Report from precomputed predictions; requires every class non-empty.
inline ClassErrorReport error_report(std::span<const int> predictions,
                                     const LabeledDataset& data) {
  data.require_nonempty_classes();
  if (predictions.size() != data.size()) {
    throw_contract("prediction count does not match dataset size");
  }
  const auto k = static_cast<std::size_t>(data.num_classes());
  ClassErrorReport r;
  r.misclassified.assign(k, 0);
  r.class_sizes.assign(data.class_counts().begin(), data.class_counts().end());
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (predictions[i] != data.label(i)) {
      ++r.misclassified[static_cast<std::size_t>(data.label(i))];
      ++wrong;
    }
  }
  r.per_class_error.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    r.per_class_error[c] = static_cast<double>(r.misclassified[c]) /
                           static_cast<double>(r.class_sizes[c]);
  }
  r.worst_class_error =
      *std::max_element(r.per_class_error.begin(), r.per_class_error.end());
  r.average_error =
      static_cast<double>(wrong) / static_cast<double>(data.size());
  return r;
}

template <Predictor P>
ClassErrorReport worst_class_error(const P& h, const LabeledDataset& data) {
  data.require_nonempty_classes();
  if constexpr (std::same_as<P, Ensemble>) {
    return error_report(h.predict_all(data), data);
  } else {
    return error_report(predict_all(h, data), data);
  }
}

// Fraction of class-k instances that h misclassifies.
template <Predictor P>
double class_wise_error(const P& h, const LabeledDataset& data, int k) {
  if (k < 0 || k >= data.num_classes()) throw_contract("class out of range");
  const std::size_t nk = data.class_count(k);
  if (nk == 0) throw EmptyClassError(k);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.label(i) == k && h.predict(data.features(i)) != k) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(nk);
}

inline void validate_theta(double theta) {
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw_config("theta must lie in [0, 1), got " + std::to_string(theta));
  }
}

// Zero-one class penalty: 1 iff the class error reaches 1 - theta.
inline int penalty_from_error(double class_error, double theta) {
  validate_theta(theta);
  return class_error >= 1.0 - theta ? 1 : 0;
}

inline std::vector<int> penalties(const ClassErrorReport& report,
                                  double theta) {
  std::vector<int> out(report.per_class_error.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = penalty_from_error(report.per_class_error[k], theta);
  }
  return out;
}

// Success indicators r_k = 1 - penalty_k (exact complement of the penalty).
inline FeedbackVector feedback_from_penalties(std::span<const int> penalty) {
  std::vector<int> r(penalty.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = 1 - penalty[k];
  return FeedbackVector(std::move(r));
}

template <Predictor P>
int zero_one_penalty(const P& h, const LabeledDataset& data, int k,
                     double theta) {
  validate_theta(theta);
  return penalty_from_error(class_wise_error(h, data, k), theta);
}

}  // namespace wcboost
