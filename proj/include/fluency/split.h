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

#ifndef FLUENCY_SPLIT_H_
#define FLUENCY_SPLIT_H_

#include <cstdint>
#include <span>
#include <vector>

namespace fluency {

inline constexpr double kDefaultTrainRatio = 0.7;

struct Split {
  std::vector<size_t> train_indices;  // ascending
  std::vector<size_t> test_indices;   // ascending
  double ratio = kDefaultTrainRatio;
  uint64_t seed = 0;
};

// Seeded Fisher-Yates permutation of 0..n-1; the first round(ratio * n)
// positions form the training set. Throws ConfigError when ratio is outside
// (0, 1) and DatasetError when n < 10.
Split SplitTrainTest(size_t n, double ratio, uint64_t seed);

// Same training size, allocated per class by largest remainder so each
// class keeps its proportion to within one example. Labels are class
// indices.
Split StratifiedSplit(std::span<const int> labels, double ratio, uint64_t seed);

}  // namespace fluency

#endif  // FLUENCY_SPLIT_H_
