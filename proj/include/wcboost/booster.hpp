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

// The worst-class booster (class-weighted Hedge over K classes with a
// majority-vote ensemble), the average-error OCO boosting baseline (Hedge
// over n instances), stopping rules, per-round logs, the training-bound
// precondition audit and the worst-class generalization bound.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wcboost/core.hpp"
#include "wcboost/errors.hpp"
#include "wcboost/hedge.hpp"
#include "wcboost/weak_learners.hpp"

namespace wcboost {

struct BoostConfig {
  double theta = 0.75;
  double gamma = 0.0995;
  double epsilon = 0.0005;
  // Defaults to sufficient_rounds(m, gamma) for the m weights being hedged.
  std::optional<std::size_t> max_rounds;
  // Defaults to sqrt(8 ln m / T).
  std::optional<double> eta;
  EtaSchedule eta_schedule = EtaSchedule::kWeightDimension;
  // Stop after this many consecutive rounds with w_t . r_t unchanged.
  std::size_t patience = 20;
  std::uint64_t seed = 0;
  double delta = 0.05;

  void validate() const {
    validate_theta(theta);
    validate_gamma(gamma);
    if (!(epsilon > 0.0)) throw_config("epsilon must be positive");
    if (max_rounds && *max_rounds == 0) throw_config("max_rounds must be positive");
    if (eta && (!(*eta >= 0.0) || !std::isfinite(*eta))) {
      throw_config("eta must be finite and non-negative");
    }
    if (patience == 0) throw_config("patience must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw_config("delta must lie in (0, 1)");
  }

  WeakLearnabilityCheck check() const {
    return WeakLearnabilityCheck{theta, gamma, epsilon, delta};
  }
};

inline void to_json(json& j, const BoostConfig& c) {
  j = json{{"theta", c.theta},
           {"gamma", c.gamma},
           {"epsilon", c.epsilon},
           {"max_rounds", c.max_rounds ? json(*c.max_rounds) : json("auto")},
           {"eta", c.eta ? json(*c.eta) : json("auto")},
           {"eta_schedule", c.eta_schedule == EtaSchedule::kWeightDimension
                                ? "weight_dimension"
                                : "sample_size"},
           {"patience", c.patience},
           {"seed", c.seed},
           {"delta", c.delta}};
}

// Missing keys keep their defaults.
inline void from_json(const json& j, BoostConfig& c) {
  if (j.contains("theta")) j.at("theta").get_to(c.theta);
  if (j.contains("gamma")) j.at("gamma").get_to(c.gamma);
  if (j.contains("epsilon")) j.at("epsilon").get_to(c.epsilon);
  if (j.contains("max_rounds")) {
    const auto& v = j.at("max_rounds");
    c.max_rounds = v.is_string() ? std::nullopt
                                 : std::optional<std::size_t>(v.get<std::size_t>());
  }
  if (j.contains("eta")) {
    const auto& v = j.at("eta");
    c.eta = v.is_string() ? std::nullopt : std::optional<double>(v.get<double>());
  }
  if (j.contains("eta_schedule")) {
    const auto s = j.at("eta_schedule").get<std::string>();
    if (s == "weight_dimension") {
      c.eta_schedule = EtaSchedule::kWeightDimension;
    } else if (s == "sample_size") {
      c.eta_schedule = EtaSchedule::kSampleSize;
    } else {
      throw_config("unknown eta_schedule '" + s + "'");
    }
  }
  if (j.contains("patience")) j.at("patience").get_to(c.patience);
  if (j.contains("seed")) j.at("seed").get_to(c.seed);
  if (j.contains("delta")) j.at("delta").get_to(c.delta);
}

enum class StopReason { kCompletedT, kWeakLearnabilityFailed, kStalled };

inline std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::kCompletedT: return "completed_T";
    case StopReason::kWeakLearnabilityFailed: return "weak_learnability_failed";
    case StopReason::kStalled: return "stalled";
  }
  return "unknown";
}

inline StopReason stop_reason_from_string(std::string_view s) {
  if (s == "completed_T") return StopReason::kCompletedT;
  if (s == "weak_learnability_failed") return StopReason::kWeakLearnabilityFailed;
  if (s == "stalled") return StopReason::kStalled;
  throw_contract("unknown stop reason '" + std::string(s) + "'");
}

struct RoundRecord {
  std::size_t round = 0;  // 1-based
  // w_t. The average booster logs the class mass of its instance weights.
  std::vector<double> weights;
  // Ensemble position of h_t; rejected hypotheses are not in the ensemble.
  std::size_t hypothesis_id = 0;
  // r_{k,t} = 1 - penalty_k(h_t).
  std::vector<int> feedback;
  std::vector<double> class_errors;
  // Hedge's w_t . r_t (instance-level for the average booster).
  double weighted_feedback = 0.0;
  // Regret of the Hedge player after this round.
  double regret = 0.0;
  bool weak_learnable = false;
  // Worst-class booster: mean class penalty. Average booster: weighted error.
  double penalty_mean = 0.0;
  // w_t . penalty(h_t) over classes.
  double weighted_penalty = 0.0;
};

inline void to_json(json& j, const RoundRecord& r) {
  j = json{{"round", r.round},
           {"weights", r.weights},
           {"hypothesis_id", r.hypothesis_id},
           {"feedback", r.feedback},
           {"class_errors", r.class_errors},
           {"weighted_feedback", r.weighted_feedback},
           {"regret", r.regret},
           {"weak_learnable", r.weak_learnable},
           {"penalty_mean", r.penalty_mean},
           {"weighted_penalty", r.weighted_penalty}};
}

inline void from_json(const json& j, RoundRecord& r) {
  j.at("round").get_to(r.round);
  j.at("weights").get_to(r.weights);
  j.at("hypothesis_id").get_to(r.hypothesis_id);
  j.at("feedback").get_to(r.feedback);
  j.at("class_errors").get_to(r.class_errors);
  j.at("weighted_feedback").get_to(r.weighted_feedback);
  j.at("regret").get_to(r.regret);
  j.at("weak_learnable").get_to(r.weak_learnable);
  j.at("penalty_mean").get_to(r.penalty_mean);
  j.at("weighted_penalty").get_to(r.weighted_penalty);
}

struct BoostResult {
  std::string method;
  BoostConfig config;
  std::size_t planned_rounds = 0;
  double eta = 0.0;
  Ensemble ensemble;
  std::vector<RoundRecord> log;
  StopReason stop_reason = StopReason::kCompletedT;
  ClassErrorReport train_report;
};

inline json ensemble_to_json(const Ensemble& e) {
  json members = json::array();
  for (const auto& h : e.members()) members.push_back(h.to_json());
  return json{{"num_classes", e.num_classes()}, {"dim", e.dim()}, {"members", members}};
}

inline Ensemble ensemble_from_json(const json& j) {
  Ensemble e(j.at("num_classes").get<int>(), j.value("dim", std::size_t{0}));
  for (const auto& m : j.at("members")) e.add(hypothesis_from_json(m));
  return e;
}

inline json boost_result_to_json(const BoostResult& r) {
  return json{{"method", r.method},
              {"config", r.config},
              {"planned_rounds", r.planned_rounds},
              {"eta", r.eta},
              {"stop_reason", to_string(r.stop_reason)},
              {"rounds", r.log},
              {"ensemble", ensemble_to_json(r.ensemble)},
              {"train_report", r.train_report}};
}

inline BoostResult boost_result_from_json(const json& j) {
  BoostResult r;
  j.at("method").get_to(r.method);
  j.at("config").get_to(r.config);
  j.at("planned_rounds").get_to(r.planned_rounds);
  j.at("eta").get_to(r.eta);
  r.stop_reason = stop_reason_from_string(j.at("stop_reason").get<std::string>());
  j.at("rounds").get_to(r.log);
  r.ensemble = ensemble_from_json(j.at("ensemble"));
  j.at("train_report").get_to(r.train_report);
  return r;
}

namespace detail {

// Consecutive-round tracker for the w_t . r_t stall rule.
class StallDetector {
 public:
  explicit StallDetector(std::size_t patience) : patience_(patience) {}

  // Returns true once w_t . r_t has stayed within 1e-12 of its previous
  // value for `patience` consecutive rounds.
  bool observe(double weighted_feedback) {
    if (has_prev_ && std::abs(weighted_feedback - prev_) <= 1e-12) {
      ++unchanged_;
    } else {
      unchanged_ = 0;
    }
    prev_ = weighted_feedback;
    has_prev_ = true;
    return unchanged_ >= patience_;
  }

 private:
  std::size_t patience_;
  std::size_t unchanged_ = 0;
  double prev_ = 0.0;
  bool has_prev_ = false;
};

inline void require_accepted(const Ensemble& e) {
  if (e.empty()) {
    throw Error(ErrorKind::kNoWeakHypothesis,
                "NoWeakHypothesis: the first weak hypothesis failed the "
                "weak-learnability check");
  }
}

}  // namespace detail

// Class-weighted Hedge boosting. Each round: train h_t on the current class
// weights, score every class with the zero-one penalty, gate on weak
// learnability, feed r_t = 1 - penalty to Hedge, and add h_t to the vote.
// A hypothesis that fails the gate ends the run without joining the ensemble.
inline BoostResult run_worstclass_boost(const LabeledDataset& data,
                                        const WeakLearner& learner,
                                        const BoostConfig& config) {
  config.validate();
  data.require_nonempty_classes();
  const int num_classes = data.num_classes();
  if (num_classes < 2) throw_config("boosting needs at least 2 classes");
  const auto k = static_cast<std::size_t>(num_classes);

  BoostResult result;
  result.method = "worstclass_boost";
  result.config = config;
  result.planned_rounds = config.max_rounds.value_or(sufficient_rounds(k, config.gamma));
  result.eta = config.eta.value_or(
      resolve_eta(config.eta_schedule, k, data.size(), result.planned_rounds));
  result.ensemble = Ensemble(num_classes, data.dim());
  result.stop_reason = StopReason::kCompletedT;

  const auto check = config.check();
  HedgeState state = init_weights(k, result.eta);
  detail::StallDetector stall(config.patience);

  for (std::size_t t = 1; t <= result.planned_rounds; ++t) {
    Hypothesis h = learner.train(data, state.weights);
    const ClassErrorReport report = worst_class_error(h, data);
    const WeakLearnabilityResult wl = check_weak_learnability(report, check);
    const FeedbackVector r = feedback_from_penalties(wl.penalties);

    RoundRecord rec;
    rec.round = t;
    rec.weights.assign(state.weights.values().begin(), state.weights.values().end());
    rec.hypothesis_id = result.ensemble.size();
    rec.feedback.assign(r.values().begin(), r.values().end());
    rec.class_errors = report.per_class_error;
    rec.weighted_feedback = state.weights.dot(r.values());
    rec.weak_learnable = wl.satisfied;
    rec.penalty_mean = wl.penalty_mean;
    rec.weighted_penalty = state.weights.dot(std::span<const int>(wl.penalties));

    if (!wl.satisfied) {
      rec.regret = regret(state);
      result.log.push_back(std::move(rec));
      result.stop_reason = StopReason::kWeakLearnabilityFailed;
      break;
    }
    state = hedge_update(state, r);
    result.ensemble.add(std::move(h));
    rec.regret = regret(state);
    const bool stalled = stall.observe(rec.weighted_feedback);
    result.log.push_back(std::move(rec));
    if (stalled && t < result.planned_rounds) {
      result.stop_reason = StopReason::kStalled;
      break;
    }
  }
  detail::require_accepted(result.ensemble);
  result.train_report = worst_class_error(result.ensemble, data);
  return result;
}

// Average-error OCO boosting: Hedge over the n instance weights with
// r_{i,t} = I(h_t(x_i) = y_i), gated on weighted error < 1/2 - gamma.
inline BoostResult run_average_boost(const LabeledDataset& data,
                                     const WeakLearner& learner,
                                     const BoostConfig& config) {
  config.validate();
  data.require_nonempty_classes();
  const int num_classes = data.num_classes();
  if (num_classes < 2) throw_config("boosting needs at least 2 classes");
  const std::size_t n = data.size();

  BoostResult result;
  result.method = "average_boost";
  result.config = config;
  result.planned_rounds = config.max_rounds.value_or(sufficient_rounds(n, config.gamma));
  result.eta = config.eta.value_or(default_eta(n, result.planned_rounds));
  result.ensemble = Ensemble(num_classes, data.dim());
  result.stop_reason = StopReason::kCompletedT;

  HedgeState state = init_weights(n, result.eta);
  detail::StallDetector stall(config.patience);
  std::vector<int> instance_feedback(n);

  for (std::size_t t = 1; t <= result.planned_rounds; ++t) {
    Hypothesis h = learner.train_instances(data, state.weights.values());
    const std::vector<int> predictions = predict_all(h, data);
    const ClassErrorReport report = error_report(predictions, data);
    const auto class_penalty = penalties(report, config.theta);

    RoundRecord rec;
    rec.round = t;
    rec.weights.assign(static_cast<std::size_t>(num_classes), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      rec.weights[static_cast<std::size_t>(data.label(i))] += state.weights[i];
      instance_feedback[i] = predictions[i] == data.label(i) ? 1 : 0;
    }
    rec.hypothesis_id = result.ensemble.size();
    rec.feedback.resize(class_penalty.size());
    for (std::size_t c = 0; c < class_penalty.size(); ++c) {
      rec.feedback[c] = 1 - class_penalty[c];
    }
    rec.class_errors = report.per_class_error;
    const double werr = weighted_error(predictions, data, state.weights.values());
    rec.weighted_feedback = state.weights.dot(std::span<const int>(instance_feedback));
    rec.weak_learnable = werr < 0.5 - config.gamma;
    rec.penalty_mean = werr;
    double wp = 0.0;
    for (std::size_t c = 0; c < class_penalty.size(); ++c) {
      wp += rec.weights[c] * class_penalty[c];
    }
    rec.weighted_penalty = wp;

    if (!rec.weak_learnable) {
      rec.regret = regret(state);
      result.log.push_back(std::move(rec));
      result.stop_reason = StopReason::kWeakLearnabilityFailed;
      break;
    }
    state = hedge_update(state, FeedbackVector(instance_feedback));
    result.ensemble.add(std::move(h));
    rec.regret = regret(state);
    const bool stalled = stall.observe(rec.weighted_feedback);
    result.log.push_back(std::move(rec));
    if (stalled && t < result.planned_rounds) {
      result.stop_reason = StopReason::kStalled;
      break;
    }
  }
  detail::require_accepted(result.ensemble);
  result.train_report = worst_class_error(result.ensemble, data);
  return result;
}

// A single unboosted tree on uniform class weights, packaged like a run.
inline BoostResult train_plain_tree(const LabeledDataset& data, int max_depth,
                                    const BoostConfig& config = {}) {
  data.require_nonempty_classes();
  BoostResult result;
  result.method = "plain_tree";
  result.config = config;
  result.planned_rounds = 1;
  result.ensemble = Ensemble(data.num_classes(), data.dim());
  result.ensemble.add(train_weighted_tree(
      data, ClassWeights::uniform(static_cast<std::size_t>(data.num_classes())),
      max_depth, config.seed));
  result.stop_reason = StopReason::kCompletedT;
  result.train_report = worst_class_error(result.ensemble, data);
  return result;
}

// ---------------------------------------------------------------------------
// Training-bound precondition audit
// ---------------------------------------------------------------------------

struct Theorem1Report {
  // 1/2 - gamma - mean class penalty, per logged round.
  std::vector<double> slack;
  // 1/2 - gamma - w_t . penalty(h_t): the weighted edge used by the
  // training-error argument.
  std::vector<double> weighted_slack;
  std::size_t accepted_rounds = 0;
  double regret = 0.0;
  double regret_budget = 0.0;  // gamma * T / 2
  bool weak_learnability_held = false;
  std::optional<std::size_t> violated_round;
  bool regret_held = false;
  bool preconditions_held = false;
  // Preconditions held and the run completed all T rounds.
  bool applicable = false;
  std::optional<bool> conclusion_holds;
  double worst_class_error = 0.0;
  double bound = 0.0;  // 1 - theta
  // Classes where strictly more than half of the members meet the bound but
  // the ensemble does not.
  std::vector<int> majority_step_violations;
  // The gate checks the realised unweighted penalty mean of h_t on the
  // training sample, a surrogate for the any-reweighting condition.
  bool empirical_surrogate = true;
  std::string summary;
};

inline json theorem1_report_to_json(const Theorem1Report& r) {
  return json{{"slack", r.slack},
              {"weighted_slack", r.weighted_slack},
              {"accepted_rounds", r.accepted_rounds},
              {"regret", r.regret},
              {"regret_budget", r.regret_budget},
              {"weak_learnability_held", r.weak_learnability_held},
              {"violated_round", r.violated_round ? json(*r.violated_round) : json(nullptr)},
              {"regret_held", r.regret_held},
              {"preconditions_held", r.preconditions_held},
              {"applicable", r.applicable},
              {"conclusion_holds", r.conclusion_holds ? json(*r.conclusion_holds) : json(nullptr)},
              {"worst_class_error", r.worst_class_error},
              {"bound", r.bound},
              {"majority_step_violations", r.majority_step_violations},
              {"empirical_surrogate", r.empirical_surrogate},
              {"summary", r.summary}};
}

inline Theorem1Report theorem1_precondition_report(const BoostResult& run) {
  const BoostConfig& config = run.config;
  Theorem1Report rep;
  rep.bound = 1.0 - config.theta;
  rep.worst_class_error = run.train_report.worst_class_error;
  rep.weak_learnability_held = true;
  const double limit = 0.5 - config.gamma;
  std::vector<std::size_t> passes(run.train_report.per_class_error.size(), 0);
  for (const auto& rec : run.log) {
    rep.slack.push_back(limit - rec.penalty_mean);
    rep.weighted_slack.push_back(limit - rec.weighted_penalty);
    if (!rec.weak_learnable) {
      rep.weak_learnability_held = false;
      if (!rep.violated_round) rep.violated_round = rec.round;
      continue;
    }
    ++rep.accepted_rounds;
    rep.regret = rec.regret;
    for (std::size_t k = 0; k < passes.size() && k < rec.feedback.size(); ++k) {
      passes[k] += static_cast<std::size_t>(rec.feedback[k]);
    }
  }
  rep.regret_budget = config.gamma * static_cast<double>(rep.accepted_rounds) / 2.0;
  rep.regret_held = rep.regret <= rep.regret_budget;
  rep.preconditions_held = rep.weak_learnability_held && rep.regret_held;
  rep.applicable = rep.preconditions_held && run.stop_reason == StopReason::kCompletedT;

  for (std::size_t k = 0; k < passes.size(); ++k) {
    const bool majority_pass = 2 * passes[k] > rep.accepted_rounds;
    const bool ensemble_pass = run.train_report.per_class_error[k] < rep.bound;
    if (majority_pass && !ensemble_pass) {
      rep.majority_step_violations.push_back(static_cast<int>(k));
    }
  }

  std::ostringstream s;
  if (rep.violated_round) {
    s << "weak learnability violated at round " << *rep.violated_round
      << "; theorem not applicable";
  } else if (!rep.regret_held) {
    s << "regret " << rep.regret << " exceeds gamma*T/2 = " << rep.regret_budget
      << "; theorem not applicable";
  } else if (!rep.applicable) {
    s << "preconditions held but the run stopped early (" << to_string(run.stop_reason)
      << "); theorem not applicable";
  } else {
    rep.conclusion_holds = rep.worst_class_error < rep.bound;
    s << "preconditions held; worst-class training error " << rep.worst_class_error
      << (*rep.conclusion_holds ? " < " : " >= ") << rep.bound;
    if (!*rep.conclusion_holds) s << " (conclusion violated)";
  }
  s << "; weak-learnability gate is an empirical surrogate";
  rep.summary = s.str();
  return rep;
}

// ---------------------------------------------------------------------------
// Generalization bound
// ---------------------------------------------------------------------------

struct GeneralizationBound {
  double value = 0.0;
  double training_term = 0.0;    // 1 - theta
  double complexity_term = 0.0;  // 2 C / sqrt(n)
  double confidence_term = 0.0;  // 3 sqrt(ln(2/delta) / (2n))
  bool vacuous = false;          // value > 1
};

inline void to_json(json& j, const GeneralizationBound& b) {
  j = json{{"value", b.value},
           {"training_term", b.training_term},
           {"complexity_term", b.complexity_term},
           {"confidence_term", b.confidence_term},
           {"vacuous", b.vacuous}};
}

// Worst-class generalization bound driven by the smallest class size.
// `complexity` is the user-supplied constant C with Rademacher <= C/sqrt(n).
inline GeneralizationBound generalization_bound(double theta, double complexity,
                                                std::size_t min_class_size,
                                                double delta) {
  validate_theta(theta);
  if (!(complexity > 0.0) || !std::isfinite(complexity)) {
    throw_config("complexity constant must be positive");
  }
  if (min_class_size == 0) throw_config("class size must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw_config("delta must lie in (0, 1)");
  const double n = static_cast<double>(min_class_size);
  GeneralizationBound b;
  b.training_term = 1.0 - theta;
  b.complexity_term = 2.0 * complexity / std::sqrt(n);
  b.confidence_term = 3.0 * std::sqrt(std::log(2.0 / delta) / (2.0 * n));
  b.value = b.training_term + b.complexity_term + b.confidence_term;
  b.vacuous = b.value > 1.0;
  return b;
}

}  // namespace wcboost
