/* Copyright 2026 The Fluency Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "fluency/split.h"

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "fluency/errors.h"

namespace fluency {
namespace {

void ExpectPartition(const Split& s, size_t n) {
  std::vector<size_t> all = s.train_indices;
  all.insert(all.end(), s.test_indices.begin(), s.test_indices.end());
  std::sort(all.begin(), all.end());
  ASSERT_EQ(all.size(), n);
  for (size_t i = 0; i < n; ++i) ASSERT_EQ(all[i], i);
  EXPECT_TRUE(std::is_sorted(s.train_indices.begin(), s.train_indices.end()));
  EXPECT_TRUE(std::is_sorted(s.test_indices.begin(), s.test_indices.end()));
}

TEST(SplitTest, SizesFollowTheRatio) {
  const Split s = SplitTrainTest(1424, 0.7, 42);
  EXPECT_EQ(s.train_indices.size(), 997u);
  EXPECT_EQ(s.test_indices.size(), 427u);
  const Split ten = SplitTrainTest(10, 0.5, 1);
  EXPECT_EQ(ten.train_indices.size(), 5u);
  EXPECT_EQ(ten.test_indices.size(), 5u);
}

TEST(SplitTest, DisjointAndCoveringForManySeeds) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    ExpectPartition(SplitTrainTest(137, 0.7, seed), 137);
  }
}

TEST(SplitTest, SeedControlsThePermutation) {
  EXPECT_EQ(SplitTrainTest(200, 0.7, 5).test_indices,
            SplitTrainTest(200, 0.7, 5).test_indices);
  EXPECT_NE(SplitTrainTest(200, 0.7, 5).test_indices,
            SplitTrainTest(200, 0.7, 6).test_indices);
}

TEST(SplitTest, StratifiedKeepsClassProportions) {
  std::vector<int> labels;
  for (int i = 0; i < 374; ++i) labels.push_back(0);
  for (int i = 0; i < 618; ++i) labels.push_back(1);
  for (int i = 0; i < 432; ++i) labels.push_back(2);
  for (uint64_t seed : {1u, 42u, 77u}) {
    const Split s = StratifiedSplit(labels, 0.7, seed);
    ExpectPartition(s, labels.size());
    EXPECT_EQ(s.train_indices.size(), 997u);
    const int sizes[3] = {374, 618, 432};
    for (int c = 0; c < 3; ++c) {
      const auto in_train = std::count_if(s.train_indices.begin(), s.train_indices.end(),
                                          [&](size_t i) { return labels[i] == c; });
      EXPECT_LE(std::abs(static_cast<double>(in_train) - 0.7 * sizes[c]), 1.0);
    }
  }
}

TEST(SplitTest, RejectsBadArguments) {
  EXPECT_THROW(SplitTrainTest(100, 0.0, 1), ConfigError);
  EXPECT_THROW(SplitTrainTest(100, 1.0, 1), ConfigError);
  EXPECT_THROW(SplitTrainTest(100, -0.2, 1), ConfigError);
  EXPECT_THROW(SplitTrainTest(9, 0.7, 1), DatasetError);
  EXPECT_THROW(StratifiedSplit(std::vector<int>(5, 0), 0.7, 1), DatasetError);
}

}  // namespace
}  // namespace fluency
