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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "test_util.hpp"
#include "wcboost/booster.hpp"
#include "wcboost/datasets.hpp"

namespace wcboost {
namespace {

using testing::constant_hypothesis;
using testing::Gen;
using testing::indexed_dataset;

LabeledDataset balanced_indexed(int num_classes, int per_class) {
  std::vector<int> labels;
  for (int c = 0; c < num_classes; ++c) {
    labels.insert(labels.end(), static_cast<std::size_t>(per_class), c);
  }
  return indexed_dataset(labels, num_classes);
}

BoostConfig oracle_config(double gamma, double theta, std::size_t rounds, std::uint64_t seed) {
  BoostConfig c;
  c.gamma = gamma;
  c.theta = theta;
  c.max_rounds = rounds;
  c.seed = seed;
  c.patience = rounds + 1;
  return c;
}

// Learner replaying a fixed list of hypotheses, one per call.
class ScriptedLearner final : public WeakLearner {
 public:
  explicit ScriptedLearner(std::vector<Hypothesis> script) : script_(std::move(script)) {}
  Hypothesis train(const LabeledDataset&, const ClassWeights&) const override {
    return script_.at(std::min(calls_++, script_.size() - 1));
  }
  Hypothesis train_instances(const LabeledDataset&, std::span<const double>) const override {
    return script_.at(std::min(calls_++, script_.size() - 1));
  }
  std::string name() const override { return "scripted"; }

 private:
  std::vector<Hypothesis> script_;
  mutable std::size_t calls_ = 0;
};

void expect_log_invariants(const BoostResult& run) {
  double played = 0.0;
  std::vector<double> totals(run.log.front().feedback.size(), 0.0);
  for (const auto& rec : run.log) {
    const double s = std::accumulate(rec.weights.begin(), rec.weights.end(), 0.0);
    EXPECT_NEAR(s, 1.0, 1e-9);
    ClassErrorReport r;
    r.per_class_error = rec.class_errors;
    const auto pen = penalties(r, run.config.theta);
    for (std::size_t k = 0; k < pen.size(); ++k) EXPECT_EQ(rec.feedback[k], 1 - pen[k]);
    if (!rec.weak_learnable) continue;
    for (std::size_t k = 0; k < totals.size(); ++k) {
      played += rec.weights[k] * rec.feedback[k];
      totals[k] += rec.feedback[k];
    }
    EXPECT_NEAR(rec.regret, played - *std::min_element(totals.begin(), totals.end()), 1e-9);
  }
}

// Classes where more than half of the accepted members meet the bound must
// also meet it under the majority vote.
void expect_majority_step(const BoostResult& run, const LabeledDataset& data) {
  const double bound = 1.0 - run.config.theta;
  const auto k = static_cast<std::size_t>(data.num_classes());
  std::vector<std::size_t> passes(k, 0);
  for (const auto& h : run.ensemble.members()) {
    const auto r = worst_class_error(h, data);
    for (std::size_t c = 0; c < k; ++c) passes[c] += r.per_class_error[c] < bound ? 1 : 0;
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (2 * passes[c] > run.ensemble.size()) {
      EXPECT_LT(run.train_report.per_class_error[c], bound) << "class " << c;
    }
  }
  EXPECT_TRUE(theorem1_precondition_report(run).majority_step_violations.empty());
}

TEST(WorstClassBoost, OracleMeetsTrainingBound) {
  const auto data = balanced_indexed(5, 100);
  for (const auto& [gamma, theta] : std::vector<std::pair<double, double>>{{0.1, 0.75}, {0.2, 0.5}}) {
    const auto rounds = sufficient_rounds(5, gamma);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto learner = oracle_weak_learner(gamma, theta, seed);
      const auto run = run_worstclass_boost(data, learner, oracle_config(gamma, theta, rounds, seed));
      EXPECT_EQ(run.stop_reason, StopReason::kCompletedT);
      EXPECT_EQ(run.log.size(), rounds);
      EXPECT_LT(run.train_report.worst_class_error, 1.0 - theta) << "seed " << seed;
      expect_log_invariants(run);
      expect_majority_step(run, data);
    }
  }
}

TEST(WorstClassBoost, OracleReportStatesConclusion) {
  const auto data = balanced_indexed(5, 100);
  const auto learner = oracle_weak_learner(0.1, 0.75, 0);
  const auto run = run_worstclass_boost(data, learner, oracle_config(0.1, 0.75, 326, 0));
  const auto rep = theorem1_precondition_report(run);
  EXPECT_TRUE(rep.preconditions_held);
  EXPECT_TRUE(rep.applicable);
  ASSERT_TRUE(rep.conclusion_holds.has_value());
  EXPECT_TRUE(*rep.conclusion_holds);
  EXPECT_DOUBLE_EQ(rep.worst_class_error, 0.2);
  EXPECT_EQ(rep.summary.rfind("preconditions held; worst-class training error 0.2 < 0.25", 0), 0u)
      << rep.summary;
  EXPECT_LE(rep.regret, rep.regret_budget);
  for (double s : rep.slack) EXPECT_GE(s, -1e-12);
}

TEST(WorstClassBoost, ThetaZeroKeepsUniformWeights) {
  // The best stump leaves one instance of one class wrong, so no class error is 1.
  auto data = LabeledDataset::from_rows({{0}, {1}, {2}, {3}, {4}, {5}}, {0, 0, 1, 0, 1, 1}, 2);
  BoostConfig c;
  c.theta = 0.0;
  c.gamma = 0.1;
  c.max_rounds = 12;
  c.patience = 100;
  TreeLearner learner(1);
  const auto run = run_worstclass_boost(data, learner, c);
  EXPECT_EQ(run.log.size(), 12u);
  EXPECT_EQ(run.ensemble.size(), 12u);
  for (const auto& rec : run.log) {
    for (double w : rec.weights) EXPECT_EQ(w, 0.5);
    for (int r : rec.feedback) EXPECT_EQ(r, 1);
  }
  const auto first = run.ensemble.members().front().to_json();
  for (const auto& h : run.ensemble.members()) EXPECT_EQ(h.to_json(), first);
  const auto rep = theorem1_precondition_report(run);
  ASSERT_TRUE(rep.conclusion_holds.has_value());
  EXPECT_TRUE(*rep.conclusion_holds);
  EXPECT_LT(rep.worst_class_error, 1.0);
}

TEST(WorstClassBoost, ThetaZeroStillPenalisesFullyMissedClass) {
  // A stump cannot separate three classes: one class has error exactly 1,
  // which meets err >= 1 - theta even at theta = 0.
  auto data = LabeledDataset::from_rows({{0}, {1}, {2}, {3}, {4}, {5}}, {0, 0, 1, 1, 2, 2}, 3);
  BoostConfig c;
  c.theta = 0.0;
  c.max_rounds = 3;
  const auto run = run_worstclass_boost(data, TreeLearner(1), c);
  const auto& rec = run.log.front();
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(rec.feedback[k], rec.class_errors[k] == 1.0 ? 0 : 1);
  EXPECT_EQ(std::count(rec.feedback.begin(), rec.feedback.end(), 0), 1);
}

TEST(WorstClassBoost, FailedRoundEndsRunWithoutJoining) {
  auto data = indexed_dataset({0, 1, 2}, 3);
  const auto perfect = testing::table_hypothesis({0, 1, 2});
  ScriptedLearner learner({perfect, constant_hypothesis(0)});
  BoostConfig c;
  c.max_rounds = 10;
  const auto run = run_worstclass_boost(data, learner, c);
  EXPECT_EQ(run.stop_reason, StopReason::kWeakLearnabilityFailed);
  EXPECT_EQ(run.log.size(), 2u);
  EXPECT_EQ(run.ensemble.size(), 1u);
  EXPECT_FALSE(run.log.back().weak_learnable);
  const auto rep = theorem1_precondition_report(run);
  EXPECT_EQ(rep.violated_round, std::optional<std::size_t>(2));
  EXPECT_EQ(rep.summary.rfind("weak learnability violated at round 2; theorem not applicable", 0), 0u);
}

TEST(WorstClassBoost, NoAcceptedHypothesisThrows) {
  auto data = indexed_dataset({0, 1, 2}, 3);
  ScriptedLearner learner({constant_hypothesis(0)});
  try {
    run_worstclass_boost(data, learner, BoostConfig{});
    FAIL() << "expected NoWeakHypothesis";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoWeakHypothesis);
  }
}

TEST(WorstClassBoost, EmptyClassIsRejected) {
  auto data = indexed_dataset({0, 0, 2}, 3);
  EXPECT_THROW(run_worstclass_boost(data, TreeLearner(2), BoostConfig{}), EmptyClassError);
}

TEST(WorstClassBoost, StallRuleStopsRepeatedSuccess) {
  auto data = indexed_dataset({0, 1, 2}, 3);
  ScriptedLearner learner({testing::table_hypothesis({0, 1, 2})});
  BoostConfig c;
  c.patience = 5;
  const auto run = run_worstclass_boost(data, learner, c);
  EXPECT_EQ(run.stop_reason, StopReason::kStalled);
  EXPECT_EQ(run.log.size(), 6u);
  EXPECT_EQ(run.train_report.worst_class_error, 0.0);
}

TEST(WorstClassBoost, DeterministicLog) {
  const auto split = gen_balanced_toy(2);
  BoostConfig c;
  c.max_rounds = 15;
  TreeLearner learner(4, c.check());
  const auto a = run_worstclass_boost(split.train, learner, c);
  const auto b = run_worstclass_boost(split.train, learner, c);
  EXPECT_EQ(json(a.log).dump(), json(b.log).dump());
  EXPECT_EQ(boost_result_to_json(a).dump(), boost_result_to_json(b).dump());
}

TEST(WorstClassBoost, ResultJsonRoundTrip) {
  const auto split = gen_balanced_toy(1);
  BoostConfig c;
  c.max_rounds = 8;
  const auto run = run_worstclass_boost(split.train, TreeLearner(3, c.check()), c);
  const auto back = boost_result_from_json(json::parse(boost_result_to_json(run).dump()));
  EXPECT_EQ(back.ensemble.predict_all(split.train), run.ensemble.predict_all(split.train));
  EXPECT_EQ(json(back.log).dump(), json(run.log).dump());
  EXPECT_EQ(back.stop_reason, run.stop_reason);
  EXPECT_EQ(json(back.config), json(run.config));
}

TEST(WorstClassBoost, BalancedToyMeetsTrainingBound) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto split = gen_balanced_toy(seed);
    BoostConfig c;
    c.seed = seed;
    const auto run = run_worstclass_boost(split.train, TreeLearner(6, c.check()), c);
    EXPECT_LE(run.train_report.worst_class_error, 0.25) << "seed " << seed;
    expect_log_invariants(run);
    expect_majority_step(run, split.train);
  }
}

TEST(AverageBoost, SeparableDataReachesZeroError) {
  auto data = LabeledDataset::from_rows({{0.1}, {0.3}, {0.5}, {1.2}, {1.4}, {1.7}},
                                        {0, 0, 0, 1, 1, 1}, 2);
  BoostConfig c;
  c.max_rounds = 50;
  const auto run = run_average_boost(data, StumpLearner{}, c);
  EXPECT_EQ(run.train_report.average_error, 0.0);
}

TEST(AverageBoost, PerfectHypothesisStalls) {
  auto data = indexed_dataset({0, 1, 1, 0}, 2);
  ScriptedLearner learner({testing::table_hypothesis({0, 1, 1, 0})});
  BoostConfig c;
  c.patience = 3;
  const auto run = run_average_boost(data, learner, c);
  EXPECT_EQ(run.stop_reason, StopReason::kStalled);
  EXPECT_EQ(run.train_report.average_error, 0.0);
  EXPECT_LT(run.log.size(), run.planned_rounds);
}

TEST(AverageBoost, LogsClassMassAsWeights) {
  const auto split = gen_balanced_toy(0);
  BoostConfig c;
  c.max_rounds = 5;
  const auto run = run_average_boost(split.train, TreeLearner(3, c.check()), c);
  for (const auto& rec : run.log) {
    EXPECT_EQ(rec.weights.size(), 5u);
    EXPECT_NEAR(std::accumulate(rec.weights.begin(), rec.weights.end(), 0.0), 1.0, 1e-9);
  }
  for (double w : run.log.front().weights) EXPECT_NEAR(w, 0.2, 1e-12);
}

TEST(AverageBoost, TradesWorstClassForAverageOnBalancedToy) {
  double wc_worst = 0.0;
  double wc_avg = 0.0;
  double ab_worst = 0.0;
  double ab_avg = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto split = gen_balanced_toy(seed);
    BoostConfig c;
    c.seed = seed;
    const TreeLearner learner(6, c.check());
    const auto wc = worst_class_error(run_worstclass_boost(split.train, learner, c).ensemble, split.test);
    const auto ab = worst_class_error(run_average_boost(split.train, learner, c).ensemble, split.test);
    wc_worst += wc.worst_class_error;
    wc_avg += wc.average_error;
    ab_worst += ab.worst_class_error;
    ab_avg += ab.average_error;
  }
  EXPECT_LT(ab_avg, wc_avg);
  EXPECT_GT(ab_worst, wc_worst);
}

TEST(BoostConfig, ValidationAndJson) {
  BoostConfig c;
  c.theta = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c = BoostConfig{};
  c.gamma = 0.5;
  EXPECT_THROW(c.validate(), Error);
  c = BoostConfig{};
  c.max_rounds = 0;
  EXPECT_THROW(c.validate(), Error);

  BoostConfig d;
  d.eta = 0.3;
  d.eta_schedule = EtaSchedule::kSampleSize;
  const json j = d;
  EXPECT_EQ(j.at("max_rounds"), "auto");
  const auto back = j.get<BoostConfig>();
  EXPECT_EQ(json(back), j);
  const auto partial = json{{"theta", 0.5}}.get<BoostConfig>();
  EXPECT_EQ(partial.theta, 0.5);
  EXPECT_EQ(partial.gamma, BoostConfig{}.gamma);
}

TEST(BoostConfig, AutoEtaResolvesToDefault) {
  const auto data = balanced_indexed(5, 10);
  BoostConfig c = oracle_config(0.1, 0.75, 40, 0);
  const auto run = run_worstclass_boost(data, oracle_weak_learner(0.1, 0.75, 0), c);
  EXPECT_DOUBLE_EQ(run.eta, default_eta(5, 40));
  EXPECT_EQ(run.planned_rounds, 40u);
  c.max_rounds.reset();
  c.eta_schedule = EtaSchedule::kSampleSize;
  const auto run2 = run_worstclass_boost(data, oracle_weak_learner(0.1, 0.75, 0), c);
  EXPECT_EQ(run2.planned_rounds, sufficient_rounds(5, 0.1));
  EXPECT_DOUBLE_EQ(run2.eta, default_eta(50, run2.planned_rounds));
}

TEST(GeneralizationBound, WorkedExample) {
  const auto b = generalization_bound(0.5, 1.0, 100, 0.05);
  EXPECT_NEAR(b.value, 0.5 + 0.2 + 3.0 * std::sqrt(std::log(40.0) / 200.0), 1e-15);
  EXPECT_NEAR(b.value, 1.1074, 5e-5);
  EXPECT_TRUE(b.vacuous);
}

TEST(GeneralizationBound, DecreasesInClassSizeAndVanishes) {
  double prev = generalization_bound(0.8, 2.0, 1, 0.05).value;
  for (std::size_t n = 2; n < 5000; n += 13) {
    const double v = generalization_bound(0.8, 2.0, n, 0.05).value;
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(generalization_bound(0.999999, 1.0, 1000000000000ULL, 0.05).value, 1e-3);
  EXPECT_THROW(generalization_bound(0.5, 0.0, 10, 0.05), Error);
  EXPECT_THROW(generalization_bound(0.5, 1.0, 0, 0.05), Error);
  EXPECT_THROW(generalization_bound(0.5, 1.0, 10, 1.0), Error);
}

}  // namespace
}  // namespace wcboost
