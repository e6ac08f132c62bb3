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

// Exhaustive comparison of the metric layer against direct counting on every
// labelled dataset with n <= 8 instances and K <= 3 classes (each class
// non-empty) and every prediction vector. Shared by the unit test and the
// acceptance binary.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "test_util.hpp"

namespace wcboost::testing {

struct BruteForceTally {
  std::size_t datasets = 0;
  std::size_t pairs = 0;
  std::size_t comparisons = 0;
  std::size_t mismatches = 0;
  std::string first_mismatch;
};

// Looks predictions up by row index (feature 0 holds the index).
struct IndexedPredictor {
  std::span<const int> table;
  int predict(std::span<const double> x) const {
    return table[static_cast<std::size_t>(x[0])];
  }
};

namespace detail {

inline constexpr std::array<double, 6> kBruteThetas{0.0, 0.25, 0.5, 2.0 / 3.0, 0.75, 0.875};
inline constexpr double kBruteTolerance = 1e-12;

// Advances `digits` as a base-`base` odometer; false after the last value.
inline bool next_word(std::vector<int>& digits, int base) {
  for (int& d : digits) {
    if (++d < base) return true;
    d = 0;
  }
  return false;
}

inline bool covers(std::span<const int> labels, int k) {
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  for (int y : labels) seen[static_cast<std::size_t>(y)] = true;
  for (bool s : seen) {
    if (!s) return false;
  }
  return true;
}

inline std::string describe(std::span<const int> labels, std::span<const int> preds,
                            const std::string& what) {
  std::string s = what + " labels=";
  for (int y : labels) s += std::to_string(y);
  s += " preds=";
  for (int p : preds) s += std::to_string(p);
  return s;
}

class Checker {
 public:
  explicit Checker(BruteForceTally& t) : t_(t) {}

  void expect(bool ok, std::span<const int> labels, std::span<const int> preds,
              const char* what) {
    ++t_.comparisons;
    if (ok) return;
    if (t_.mismatches++ == 0) t_.first_mismatch = describe(labels, preds, what);
  }
  void near(double a, double b, std::span<const int> labels, std::span<const int> preds,
            const char* what) {
    expect(std::fabs(a - b) <= kBruteTolerance, labels, preds, what);
  }

 private:
  BruteForceTally& t_;
};

// Class-weight vectors exercised for the weighted error: the vertices, the
// centre and a fixed interior point.
inline std::vector<std::vector<double>> brute_weights(int k) {
  std::vector<std::vector<double>> out;
  const auto kk = static_cast<std::size_t>(k);
  for (std::size_t v = 0; v < kk; ++v) {
    std::vector<double> w(kk, 0.0);
    w[v] = 1.0;
    out.push_back(w);
  }
  out.emplace_back(kk, 1.0 / k);
  std::vector<double> w(kk);
  double s = 0.0;
  for (std::size_t c = 0; c < kk; ++c) s += (w[c] = 0.1 + 0.37 * static_cast<double>(c));
  for (double& x : w) x /= s;
  out.push_back(w);
  return out;
}

inline void check_pair(const LabeledDataset& data, std::span<const int> labels,
                       std::span<const int> preds, int k,
                       const std::vector<std::vector<double>>& weights,
                       const std::vector<std::vector<double>>& instance_weights,
                       Checker& chk) {
  const auto kk = static_cast<std::size_t>(k);
  const std::size_t n = labels.size();
  // Direct counts.
  std::array<std::size_t, 3> size{};
  std::array<std::size_t, 3> wrong{};
  std::size_t total_wrong = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto y = static_cast<std::size_t>(labels[i]);
    ++size[y];
    if (preds[i] != labels[i]) {
      ++wrong[y];
      ++total_wrong;
    }
  }
  std::array<double, 3> err{};
  double worst = 0.0;
  int worst_k = 0;
  for (std::size_t c = 0; c < kk; ++c) {
    err[c] = static_cast<double>(wrong[c]) / static_cast<double>(size[c]);
    if (err[c] > worst) {
      worst = err[c];
      worst_k = static_cast<int>(c);
    }
  }

  const IndexedPredictor h{preds};
  const auto report = worst_class_error(h, data);
  chk.near(report.worst_class_error, worst, labels, preds, "worst_class_error");
  chk.expect(report.worst_class() == worst_k, labels, preds, "worst_class");
  chk.near(report.average_error,
           static_cast<double>(total_wrong) / static_cast<double>(n), labels, preds,
           "average_error");
  for (std::size_t c = 0; c < kk; ++c) {
    chk.near(report.per_class_error[c], err[c], labels, preds, "per_class_error");
    chk.expect(report.misclassified[c] == wrong[c], labels, preds, "misclassified");
    chk.near(class_wise_error(h, data, static_cast<int>(c)), err[c], labels, preds,
             "class_wise_error");
  }
  const auto direct = error_report(preds, data);
  chk.expect(direct.per_class_error == report.per_class_error, labels, preds, "error_report");

  for (double theta : kBruteThetas) {
    const auto pen = penalties(report, theta);
    const auto fb = feedback_from_penalties(pen);
    for (std::size_t c = 0; c < kk; ++c) {
      const int expected = err[c] >= 1.0 - theta ? 1 : 0;
      chk.expect(pen[c] == expected, labels, preds, "penalties");
      chk.expect(zero_one_penalty(h, data, static_cast<int>(c), theta) == expected, labels,
                 preds, "zero_one_penalty");
      chk.expect(fb[c] == 1 - expected, labels, preds, "feedback");
    }
  }

  for (std::size_t v = 0; v < weights.size(); ++v) {
    double expected = 0.0;
    for (std::size_t c = 0; c < kk; ++c) expected += weights[v][c] * err[c];
    chk.near(weighted_error(preds, data, instance_weights[v]), expected, labels, preds,
             "weighted_error");
  }
}

// Every ensemble of `members` prediction vectors over the dataset, checked
// against a direct plurality count.
inline void check_votes(const LabeledDataset& data, std::span<const int> labels, int k,
                        std::size_t members, Checker& chk) {
  const std::size_t n = labels.size();
  std::vector<int> all(members * n, 0);
  do {
    std::vector<Hypothesis> hs;
    for (std::size_t m = 0; m < members; ++m) {
      hs.push_back(table_hypothesis(
          std::vector<int>(all.begin() + static_cast<std::ptrdiff_t>(m * n),
                           all.begin() + static_cast<std::ptrdiff_t>((m + 1) * n))));
    }
    const Ensemble e(k, hs, 1);
    const auto batch = e.predict_all(data);
    std::vector<int> expected(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::array<int, 3> tally{};
      for (std::size_t m = 0; m < members; ++m) ++tally[static_cast<std::size_t>(all[m * n + i])];
      int best = 0;
      for (int c = 1; c < k; ++c) {
        if (tally[static_cast<std::size_t>(c)] > tally[static_cast<std::size_t>(best)]) best = c;
      }
      expected[i] = best;
      const double x = static_cast<double>(i);
      chk.expect(majority_vote(e, std::span<const double>(&x, 1)) == best, labels, all,
                 "majority_vote");
    }
    chk.expect(batch == expected, labels, all, "predict_all");
    const auto r = worst_class_error(e, data);
    const auto r2 = error_report(expected, data);
    chk.expect(r.per_class_error == r2.per_class_error, labels, all, "ensemble report");
  } while (next_word(all, k));
}

}  // namespace detail

inline BruteForceTally run_bruteforce(std::size_t max_n = 8, int max_k = 3) {
  BruteForceTally tally;
  detail::Checker chk(tally);
  for (int k = 1; k <= max_k; ++k) {
    const auto weights = detail::brute_weights(k);
    for (std::size_t n = static_cast<std::size_t>(k); n <= max_n; ++n) {
      std::vector<int> labels(n, 0);
      std::vector<double> features(n);
      for (std::size_t i = 0; i < n; ++i) features[i] = static_cast<double>(i);
      do {
        if (!detail::covers(labels, k)) continue;
        const LabeledDataset data(features, 1, labels, k);
        ++tally.datasets;
        std::vector<std::vector<double>> iw;
        for (const auto& w : weights) {
          iw.push_back(instance_weights_from_class_weights(data, ClassWeights(w)));
        }
        std::vector<int> preds(n, 0);
        do {
          ++tally.pairs;
          detail::check_pair(data, labels, preds, k, weights, iw, chk);
        } while (detail::next_word(preds, k));
        // Ensembles of up to three members on the smaller datasets.
        if (n <= 3) {
          for (std::size_t m = 1; m <= 3 && m * n <= 9; ++m) {
            detail::check_votes(data, labels, k, m, chk);
          }
        }
      } while (detail::next_word(labels, k));
    }
  }
  return tally;
}

}  // namespace wcboost::testing
