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

// Hedge (exponential weights) over the probability simplex, with regret
// accounting and the learning-rate and round-count schedules used by the
// boosters.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <vector>

#include "wcboost/core.hpp"
#include "wcboost/errors.hpp"

namespace wcboost {

// Which size enters the default learning rate sqrt(8 ln(m) / T).
enum class EtaSchedule {
  kWeightDimension,  // m = number of weights (K for the worst-class booster)
  kSampleSize,       // m = n, the training sample size
};

struct HedgeState {
  ClassWeights weights;
  double eta = 0.0;
  std::size_t round = 0;
  // Per-coordinate sum of past feedback.
  std::vector<double> cumulative_feedback;
  // Sum over past rounds of w_t . r_t.
  double cumulative_weighted_feedback = 0.0;
};

inline HedgeState init_weights(std::size_t num_weights, double eta) {
  if (num_weights < 2) throw_config("Hedge needs at least 2 weights");
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw_config("learning rate must be finite and non-negative");
  }
  return HedgeState{ClassWeights::uniform(num_weights), eta, 0,
                    std::vector<double>(num_weights, 0.0), 0.0};
}

inline double eta_from_log_size(double log_size, std::size_t rounds) {
  if (rounds == 0) throw_config("round count must be positive");
  return std::sqrt(8.0 * log_size / static_cast<double>(rounds));
}

// sqrt(8 ln K / T).
inline double default_eta(std::size_t num_weights, std::size_t rounds) {
  if (num_weights < 2) throw_config("Hedge needs at least 2 weights");
  return eta_from_log_size(std::log(static_cast<double>(num_weights)), rounds);
}

inline double resolve_eta(EtaSchedule schedule, std::size_t num_weights,
                          std::size_t sample_size, std::size_t rounds) {
  return schedule == EtaSchedule::kWeightDimension
             ? default_eta(num_weights, rounds)
             : default_eta(sample_size, rounds);
}

// One multiplicative update; shifts mass towards coordinates with r_k = 0.
// The exponent is shifted by its maximum before exponentiation.
inline HedgeState hedge_update(const HedgeState& state,
                               const FeedbackVector& r) {
  const std::size_t k = state.weights.size();
  if (r.size() != k) {
    throw_contract("feedback has length " + std::to_string(r.size()) +
                   ", expected " + std::to_string(k));
  }
  std::vector<double> exponent(k);
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    exponent[j] = -state.eta * static_cast<double>(r[j]);
    shift = std::max(shift, exponent[j]);
  }
  std::vector<double> next(k);
  double z = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    next[j] = state.weights[j] * std::exp(exponent[j] - shift);
    z += next[j];
  }
  for (double& v : next) v /= z;

  HedgeState out{ClassWeights(std::move(next)), state.eta, state.round + 1,
                 state.cumulative_feedback,
                 state.cumulative_weighted_feedback +
                     state.weights.dot(r.values())};
  for (std::size_t j = 0; j < k; ++j) {
    out.cumulative_feedback[j] += static_cast<double>(r[j]);
  }
  return out;
}

inline HedgeState hedge_update(const HedgeState& state,
                               std::span<const int> r) {
  return hedge_update(state, FeedbackVector({r.begin(), r.end()}));
}

// Regret from the running totals kept in the state.
inline double regret(const HedgeState& state) {
  if (state.round == 0) return 0.0;
  return state.cumulative_weighted_feedback -
         *std::min_element(state.cumulative_feedback.begin(),
                           state.cumulative_feedback.end());
}

// Full (w_t, r_t) history of a Hedge run.
class RegretLedger {
 public:
  struct Entry {
    ClassWeights weights;
    FeedbackVector feedback;
  };

  void record(ClassWeights w, FeedbackVector r) {
    if (w.size() != r.size()) throw_contract("weights/feedback length mismatch");
    if (!entries_.empty() && entries_.front().weights.size() != w.size()) {
      throw_contract("ledger dimension changed");
    }
    entries_.push_back({std::move(w), std::move(r)});
  }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

 private:
  std::vector<Entry> entries_;
};

// sum_t w_t . r_t - min_k sum_t r_{k,t}. The minimum of a linear function over
// the simplex sits at a vertex, so it is taken over coordinates.
inline double regret(const RegretLedger& ledger) {
  if (ledger.empty()) return 0.0;
  const std::size_t k = ledger.entries().front().weights.size();
  std::vector<double> totals(k, 0.0);
  double played = 0.0;
  for (const auto& e : ledger.entries()) {
    played += e.weights.dot(e.feedback.values());
    for (std::size_t j = 0; j < k; ++j) totals[j] += e.feedback[j];
  }
  return played - *std::min_element(totals.begin(), totals.end());
}

// Worst-case Hedge regret with the default learning rate: sqrt(T ln K / 2).
inline double hedge_regret_bound(std::size_t num_weights, std::size_t rounds) {
  return std::sqrt(static_cast<double>(rounds) *
                   std::log(static_cast<double>(num_weights)) / 2.0);
}

inline void validate_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 0.5)) {
    throw_config("gamma must lie in (0, 1/2), got " + std::to_string(gamma));
  }
}

// Smallest T with sqrt(T ln K / 2) <= gamma T / 2, i.e. ceil(2 ln K / gamma^2).
inline std::size_t sufficient_rounds(std::size_t num_weights, double gamma) {
  validate_gamma(gamma);
  if (num_weights < 2) throw_config("Hedge needs at least 2 weights");
  const double t =
      2.0 * std::log(static_cast<double>(num_weights)) / (gamma * gamma);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t)));
}

// CSV `round,k,weight,feedback`, rounds and classes 1-based.
inline void write_ledger_csv(std::ostream& os, const RegretLedger& ledger) {
  os << "round,k,weight,feedback\n";
  const auto old_precision = os.precision(17);
  std::size_t t = 0;
  for (const auto& e : ledger.entries()) {
    ++t;
    for (std::size_t k = 0; k < e.weights.size(); ++k) {
      os << t << ',' << (k + 1) << ',' << e.weights[k] << ',' << e.feedback[k]
         << '\n';
    }
  }
  os.precision(old_precision);
}

}  // namespace wcboost
