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
#include <cmath>
#include <numeric>
#include <string>

#include "fluency/errors.h"
#include "fluency/label.h"
#include "fluency/rng.h"

namespace fluency {
namespace {

constexpr uint64_t kSplitStream = 0x73706c6974;  // "split"
constexpr size_t kMinRows = 10;

void CheckArgs(size_t n, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw ConfigError("split ratio must lie in (0, 1), got " + std::to_string(ratio));
  }
  if (n < kMinRows) {
    throw DatasetError("need at least " + std::to_string(kMinRows) +
                       " examples to split, got " + std::to_string(n));
  }
}

size_t TrainSize(size_t n, double ratio) {
  return static_cast<size_t>(std::llround(ratio * static_cast<double>(n)));
}

}  // namespace

Split SplitTrainTest(size_t n, double ratio, uint64_t seed) {
  CheckArgs(n, ratio);
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(DeriveSeed(seed, {kSplitStream}));
  rng.Shuffle(std::span<size_t>(order));

  const size_t n_train = TrainSize(n, ratio);
  Split split;
  split.ratio = ratio;
  split.seed = seed;
  split.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(split.train_indices.begin(), split.train_indices.end());
  std::sort(split.test_indices.begin(), split.test_indices.end());
  return split;
}

Split StratifiedSplit(std::span<const int> labels, double ratio, uint64_t seed) {
  const size_t n = labels.size();
  CheckArgs(n, ratio);
  std::array<std::vector<size_t>, kNumClasses> members;
  for (size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= kNumClasses) {
      throw DatasetError("label out of range at row " + std::to_string(i));
    }
    members[static_cast<size_t>(labels[i])].push_back(i);
  }

  // Largest remainder; equal remainders favour the lower class index.
  std::array<size_t, kNumClasses> quota{};
  std::array<double, kNumClasses> remainder{};
  size_t assigned = 0;
  for (size_t c = 0; c < kNumClasses; ++c) {
    const double exact = ratio * static_cast<double>(members[c].size());
    quota[c] = static_cast<size_t>(std::floor(exact));
    remainder[c] = exact - static_cast<double>(quota[c]);
    assigned += quota[c];
  }
  std::array<size_t, kNumClasses> by_remainder = {0, 1, 2};
  std::stable_sort(by_remainder.begin(), by_remainder.end(),
                   [&](size_t a, size_t b) { return remainder[a] > remainder[b]; });
  const size_t target = TrainSize(n, ratio);
  for (size_t k = 0; assigned < target && k < kNumClasses; ++k) {
    const size_t c = by_remainder[k];
    if (quota[c] < members[c].size()) {
      ++quota[c];
      ++assigned;
    }
  }

  Rng rng(DeriveSeed(seed, {kSplitStream, 1}));
  Split split;
  split.ratio = ratio;
  split.seed = seed;
  for (size_t c = 0; c < kNumClasses; ++c) {
    rng.Shuffle(std::span<size_t>(members[c]));
    const auto cut = members[c].begin() + static_cast<std::ptrdiff_t>(quota[c]);
    split.train_indices.insert(split.train_indices.end(), members[c].begin(), cut);
    split.test_indices.insert(split.test_indices.end(), cut, members[c].end());
  }
  std::sort(split.train_indices.begin(), split.train_indices.end());
  std::sort(split.test_indices.begin(), split.test_indices.end());
  return split;
}

}  // namespace fluency
