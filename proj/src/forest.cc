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

#include "fluency/forest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fluency/errors.h"
#include "fluency/parallel.h"
#include "fluency/rng.h"

namespace fluency {
namespace {

using Counts = std::array<int, kNumClasses>;

bool IsPure(const Counts& c) {
  int nonzero = 0;
  for (int v : c) nonzero += v > 0;
  return nonzero <= 1;
}

// Sum of squared counts over size: larger means purer. Weighted Gini of a
// split is 1 - (score_left + score_right) / n.
double GiniScore(const Counts& c, int n) {
  if (n == 0) return 0.0;
  double s = 0.0;
  for (int v : c) s += static_cast<double>(v) * v;
  return s / n;
}

int ArgMax(const Counts& c) {
  int best = 0;
  for (int k = 1; k < kNumClasses; ++k) {
    if (c[k] > c[best]) best = k;
  }
  return best;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = -1.0;
};

// Best split of `rows` on one feature, or feature == -1 if it is constant.
Split BestSplitOnFeature(const Matrix& x, std::span<const int> y,
                         std::span<const size_t> rows, int feature,
                         const Counts& total) {
  std::vector<std::pair<double, size_t>> order;
  order.reserve(rows.size());
  for (size_t r : rows) order.emplace_back(x(r, static_cast<size_t>(feature)), r);
  std::sort(order.begin(), order.end());

  Split best;
  Counts left{};
  const int n = static_cast<int>(rows.size());
  for (int k = 1; k < n; ++k) {
    ++left[y[order[static_cast<size_t>(k - 1)].second]];
    const double lo = order[static_cast<size_t>(k - 1)].first;
    const double hi = order[static_cast<size_t>(k)].first;
    if (!(lo < hi)) continue;
    Counts right{};
    for (int c = 0; c < kNumClasses; ++c) right[c] = total[c] - left[c];
    const double score = GiniScore(left, k) + GiniScore(right, n - k);
    if (score > best.score) {
      double mid = lo + (hi - lo) / 2.0;
      if (!(mid > lo && mid < hi)) mid = lo;
      best = {feature, mid, score};
    }
  }
  return best;
}

}  // namespace

DecisionTree GrowTree(const Matrix& x, std::span<const int> y,
                      std::vector<size_t> sample, int max_features,
                      uint64_t seed) {
  Rng rng(seed);
  const int d = static_cast<int>(x.cols);
  max_features = std::clamp(max_features, 1, d);

  DecisionTree tree;
  struct Pending {
    int node;
    std::vector<size_t> rows;
  };
  std::vector<Pending> stack;
  tree.nodes.emplace_back();
  stack.push_back({0, std::move(sample)});

  std::vector<int> features(static_cast<size_t>(d));
  while (!stack.empty()) {
    Pending work = std::move(stack.back());
    stack.pop_back();

    Counts counts{};
    for (size_t r : work.rows) ++counts[y[r]];
    tree.nodes[static_cast<size_t>(work.node)].counts = counts;
    if (IsPure(counts) || work.rows.size() < 2) continue;

    // Features are visited in a fresh random order; the first max_features
    // form the candidate set, later ones are only consulted while no
    // candidate has a valid split.
    std::iota(features.begin(), features.end(), 0);
    Split best;
    for (int k = 0; k < d; ++k) {
      const size_t pick = static_cast<size_t>(k) + rng.Below(static_cast<uint64_t>(d - k));
      std::swap(features[static_cast<size_t>(k)], features[pick]);
      if (k >= max_features && best.feature >= 0) break;
      const Split s = BestSplitOnFeature(x, y, work.rows,
                                         features[static_cast<size_t>(k)], counts);
      if (s.feature >= 0 && s.score > best.score) best = s;
    }
    if (best.feature < 0) continue;

    std::vector<size_t> left_rows;
    std::vector<size_t> right_rows;
    for (size_t r : work.rows) {
      (x(r, static_cast<size_t>(best.feature)) <= best.threshold ? left_rows
                                                                 : right_rows)
          .push_back(r);
    }
    const int left = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const int right = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    TreeNode& node = tree.nodes[static_cast<size_t>(work.node)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left;
    node.right = right;
    // Right pushed first so the left subtree is expanded first.
    stack.push_back({right, std::move(right_rows)});
    stack.push_back({left, std::move(left_rows)});
  }
  return tree;
}

const TreeNode& DecisionTree::Leaf(std::span<const double> x) const {
  const TreeNode* node = &nodes.front();
  while (node->feature >= 0) {
    node = &nodes[static_cast<size_t>(
        x[static_cast<size_t>(node->feature)] <= node->threshold ? node->left
                                                                 : node->right)];
  }
  return *node;
}

int DecisionTree::Predict(std::span<const double> x) const {
  return ArgMax(Leaf(x).counts);
}

ForestModel ForestModel::Train(const Matrix& x, std::span<const int> y,
                               const ForestParams& params) {
  if (x.rows != y.size()) throw TrainError("feature/label count mismatch");
  if (x.rows == 0 || x.cols == 0) throw TrainError("empty training set");
  if (params.n_estimators < 1) throw TrainError("need at least one tree");
  for (double v : x.data) {
    if (!std::isfinite(v)) throw TrainError("non-finite training feature");
  }
  Counts counts{};
  for (int label : y) {
    if (label < 0 || label >= kNumClasses) throw TrainError("label out of range");
    ++counts[label];
  }
  int present = 0;
  for (int c : counts) present += c > 0;
  if (present < 2) throw TrainError("random forest needs at least two classes");

  ForestModel model;
  model.dimension_ = x.cols;
  model.params_ = params;
  const int max_features =
      params.max_features > 0
          ? params.max_features
          : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(x.cols))));
  model.trees_.resize(static_cast<size_t>(params.n_estimators));
  ParallelFor(model.trees_.size(), params.jobs, [&](size_t t) {
    const uint64_t tree_seed = DeriveSeed(params.seed, {0x7265u, t});
    Rng rng(DeriveSeed(tree_seed, {0}));
    std::vector<size_t> sample(x.rows);
    for (size_t& s : sample) s = rng.Below(x.rows);
    model.trees_[t] =
        GrowTree(x, y, std::move(sample), max_features, DeriveSeed(tree_seed, {1}));
  });
  return model;
}

ForestModel ForestModel::FromParts(size_t dimension, ForestParams params,
                                   std::vector<DecisionTree> trees) {
  ForestModel model;
  model.dimension_ = dimension;
  model.params_ = params;
  model.trees_ = std::move(trees);
  return model;
}

void ForestModel::CheckDimension(size_t cols) const {
  if (cols != dimension_) {
    throw PredictError("forest expects " + std::to_string(dimension_) +
                       " features, got " + std::to_string(cols));
  }
}

std::array<double, kNumClasses> ForestModel::PredictProba(
    std::span<const double> x) const {
  CheckDimension(x.size());
  Counts votes{};
  for (const DecisionTree& tree : trees_) ++votes[tree.Predict(x)];
  std::array<double, kNumClasses> proba{};
  for (int c = 0; c < kNumClasses; ++c) {
    proba[c] = static_cast<double>(votes[c]) / static_cast<double>(trees_.size());
  }
  return proba;
}

Matrix ForestModel::PredictProba(const Matrix& x) const {
  CheckDimension(x.cols);
  Matrix out(x.rows, kNumClasses);
  for (size_t r = 0; r < x.rows; ++r) {
    const auto p = PredictProba(x.row(r));
    std::copy(p.begin(), p.end(), out.row(r).begin());
  }
  return out;
}

int ForestModel::Predict(std::span<const double> x) const {
  CheckDimension(x.size());
  Counts votes{};
  for (const DecisionTree& tree : trees_) ++votes[tree.Predict(x)];
  return ArgMax(votes);
}

std::vector<int> ForestModel::Predict(const Matrix& x) const {
  CheckDimension(x.cols);
  std::vector<int> out(x.rows);
  for (size_t r = 0; r < x.rows; ++r) out[r] = Predict(x.row(r));
  return out;
}

}  // namespace fluency
