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

#include "bruteforce_oracle.hpp"

namespace wcboost {
namespace {

TEST(BruteForce, SmallCaseCountsAreExact) {
  const auto t = testing::run_bruteforce(2, 2);
  // K=1: labels 0 (n=1), 00 (n=2). K=2: 01, 10 (n=2).
  EXPECT_EQ(t.datasets, 4u);
  // Predictions: 1 + 1 + 4 + 4.
  EXPECT_EQ(t.pairs, 10u);
  EXPECT_EQ(t.mismatches, 0u) << t.first_mismatch;
}

TEST(BruteForce, EveryMetricMatchesDirectCount) {
  const auto t = testing::run_bruteforce();
  EXPECT_GT(t.pairs, 40000000u);
  EXPECT_EQ(t.mismatches, 0u) << t.first_mismatch;
}

}  // namespace
}  // namespace wcboost
