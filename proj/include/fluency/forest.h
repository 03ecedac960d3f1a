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

#ifndef FLUENCY_FOREST_H_
#define FLUENCY_FOREST_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fluency/label.h"
#include "fluency/matrix.h"

namespace fluency {

struct ForestParams {
  int n_estimators = 100;
  // Features tried per node; 0 selects ceil(sqrt(d)).
  int max_features = 0;
  uint64_t seed = 42;
  int jobs = 1;
};

struct TreeNode {
  // Internal nodes: feature >= 0, samples with x[feature] <= threshold go
  // left. Leaves: feature == -1.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::array<int, kNumClasses> counts{};  // bootstrap class counts
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& Leaf(std::span<const double> x) const;
  // Majority class of the reached leaf; ties go to the lower index.
  int Predict(std::span<const double> x) const;
};

// Bagged Gini trees. Tree t draws its bootstrap sample and feature subsets
// from a stream derived from (seed, t), so results are independent of the
// number of worker threads.
class ForestModel {
 public:
  // Throws TrainError on fewer than two classes or non-finite input.
  static ForestModel Train(const Matrix& x, std::span<const int> y,
                           const ForestParams& params = {});

  // Fraction of trees voting for each class.
  std::array<double, kNumClasses> PredictProba(std::span<const double> x) const;
  Matrix PredictProba(const Matrix& x) const;
  // Majority vote; ties go to the lower class index.
  int Predict(std::span<const double> x) const;
  std::vector<int> Predict(const Matrix& x) const;

  size_t dimension() const { return dimension_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }
  const ForestParams& params() const { return params_; }

  static ForestModel FromParts(size_t dimension, ForestParams params,
                               std::vector<DecisionTree> trees);

 private:
  void CheckDimension(size_t cols) const;

  size_t dimension_ = 0;
  ForestParams params_;
  std::vector<DecisionTree> trees_;
};

// Grows one unpruned tree on rows `sample` (repeats allowed) until nodes are
// pure or hold fewer than two samples. Split thresholds are midpoints of
// adjacent distinct values, chosen by weighted Gini impurity.
DecisionTree GrowTree(const Matrix& x, std::span<const int> y,
                      std::vector<size_t> sample, int max_features,
                      uint64_t seed);

}  // namespace fluency

#endif  // FLUENCY_FOREST_H_
