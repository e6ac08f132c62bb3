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

// Shared fixtures and hand-rolled random generators for the test suites.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "wcboost/wcboost.hpp"

namespace wcboost::testing {

// Dataset with one feature per row equal to the row index.
inline LabeledDataset indexed_dataset(const std::vector<int>& labels0, int num_classes) {
  std::vector<double> f(labels0.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>(i);
  return LabeledDataset(std::move(f), 1, labels0, num_classes);
}

// Hypothesis returning a fixed prediction for the row whose index is x[0].
inline Hypothesis table_hypothesis(std::vector<int> predictions) {
  return make_function_hypothesis([p = std::move(predictions)](std::span<const double> x) {
    return p.at(static_cast<std::size_t>(x[0]));
  });
}

inline Hypothesis constant_hypothesis(int label0) {
  return make_function_hypothesis([label0](std::span<const double>) { return label0; });
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  bool coin() { return uniform_int(0, 1) == 1; }

  // Labels covering every class at least once.
  std::vector<int> covering_labels(std::size_t n, int num_classes) {
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = i < static_cast<std::size_t>(num_classes) ? static_cast<int>(i)
                                                       : uniform_int(0, num_classes - 1);
    }
    std::shuffle(y.begin(), y.end(), rng_);
    return y;
  }

  std::vector<int> predictions(std::size_t n, int num_classes) {
    std::vector<int> p(n);
    for (auto& v : p) v = uniform_int(0, num_classes - 1);
    return p;
  }

  // Random point of the simplex, occasionally with exact zeros.
  ClassWeights simplex(std::size_t k) {
    std::vector<double> w(k);
    double s = 0.0;
    for (auto& v : w) {
      v = uniform_int(0, 5) == 0 ? 0.0 : -std::log(uniform(1e-12, 1.0));
      s += v;
    }
    if (s == 0.0) {
      w[0] = 1.0;
      s = 1.0;
    }
    for (auto& v : w) v /= s;
    return ClassWeights(std::move(w));
  }

  std::vector<int> binary(std::size_t k) {
    std::vector<int> r(k);
    for (auto& v : r) v = uniform_int(0, 1);
    return r;
  }

  // Small 2-D dataset with integer-grid features (so ties occur).
  LabeledDataset grid_dataset(std::size_t n, int num_classes) {
    auto y = covering_labels(n, num_classes);
    std::vector<double> f(2 * n);
    for (auto& v : f) v = static_cast<double>(uniform_int(0, 4));
    return LabeledDataset(std::move(f), 2, std::move(y), num_classes);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace wcboost::testing
