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

#include "fluency/mlp.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fluency/errors.h"
#include "test_util.h"

namespace fluency {
namespace {

TEST(MlpTest, GradientMatchesCentralDifferences) {
  MlpModel m = MlpModel::Initialize(23, {8, 8}, 3);
  std::mt19937_64 engine(5);
  std::normal_distribution<double> normal(0.0, 0.5);
  std::vector<double> params = m.Parameters();
  for (double& p : params) p += normal(engine) * 0.2;  // non-zero biases too
  m.SetParameters(params);
  Matrix x(5, 23);
  for (double& v : x.data) v = normal(engine) * 2.0;
  const std::vector<int> y = {0, 1, 2, 1, 0};

  const std::vector<double> grad = m.LossGradient(x, y);
  ASSERT_EQ(grad.size(), m.num_parameters());
  ASSERT_EQ(grad.size(), 23u * 8 + 8 + 8 * 8 + 8 + 8 * 3 + 3);
  const double eps = 1e-5;
  double worst = 0.0;
  for (size_t i = 0; i < params.size(); ++i) {
    std::vector<double> plus = params;
    std::vector<double> minus = params;
    plus[i] += eps;
    minus[i] -= eps;
    m.SetParameters(plus);
    const double lp = m.Loss(x, y);
    m.SetParameters(minus);
    const double lm = m.Loss(x, y);
    const double numeric = (lp - lm) / (2.0 * eps);
    const double rel =
        std::abs(numeric - grad[i]) / std::max(1e-8, std::abs(numeric) + std::abs(grad[i]));
    worst = std::max(worst, rel);
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(MlpTest, ZeroNetworkIsUniform) {
  MlpModel m = MlpModel::Initialize(4, {6, 6}, 1);
  m.SetParameters(std::vector<double>(m.num_parameters(), 0.0));
  const auto p = m.PredictProba(std::vector<double>(4, 0.0));
  for (double v : p) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
  EXPECT_NEAR(m.Loss(Matrix(1, 4), std::vector<int>{2}), std::log(3.0), 1e-15);
}

TEST(MlpTest, InitializationIsHeUniform) {
  const MlpModel m = MlpModel::Initialize(50, {40}, 9);
  const double limit = std::sqrt(6.0 / 50.0);
  const auto& w = m.layers()[0].weights;
  EXPECT_EQ(w.rows(), 40);
  EXPECT_EQ(w.cols(), 50);
  EXPECT_LE(w.cwiseAbs().maxCoeff(), limit);
  EXPECT_GT(w.cwiseAbs().maxCoeff(), 0.9 * limit);
  EXPECT_EQ(m.layers()[0].bias.squaredNorm(), 0.0);
}

TEST(MlpTest, OutputsLieOnTheSimplex) {
  const MlpModel m = MlpModel::Initialize(23, {32, 32}, 4);
  std::mt19937_64 engine(8);
  std::normal_distribution<double> normal(0.0, 30.0);
  Matrix x(1000, 23);
  for (double& v : x.data) v = normal(engine);
  const Matrix p = m.PredictProba(x);
  for (size_t r = 0; r < p.rows; ++r) {
    double sum = 0.0;
    for (size_t c = 0; c < 3; ++c) {
      EXPECT_GE(p(r, c), 0.0);
      EXPECT_LE(p(r, c), 1.0);
      sum += p(r, c);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(MlpTest, FitsSeparableBlobs) {
  const auto b = testing::MakeBlobs({{0, 0}, {3, 0}, {0, 3}}, 0.3, 40, 2);
  MlpParams p;
  p.hidden = {32, 32};
  p.epochs = 60;
  const MlpModel m = MlpModel::Train(b.x, b.y, p);
  EXPECT_EQ(m.Predict(b.x), b.y);
  EXPECT_TRUE(m.loss_decreased());
  ASSERT_EQ(m.loss_history().size(), 61u);
  EXPECT_LT(m.loss_history().back(), 0.1);
}

TEST(MlpTest, TrainingIsDeterministic) {
  const auto b = testing::MakeBlobs({{0, 0}, {1, 0}, {0, 1}}, 0.5, 20, 3);
  MlpParams p;
  p.hidden = {16};
  p.epochs = 5;
  EXPECT_EQ(MlpModel::Train(b.x, b.y, p).Parameters(),
            MlpModel::Train(b.x, b.y, p).Parameters());
  MlpParams q = p;
  q.seed = 43;
  EXPECT_NE(MlpModel::Train(b.x, b.y, p).Parameters(),
            MlpModel::Train(b.x, b.y, q).Parameters());
}

TEST(MlpTest, ErrorCases) {
  Matrix x(3, 2, 1.0);
  EXPECT_THROW(MlpModel::Train(x, std::vector<int>{2, 2, 2}), TrainError);
  x(1, 1) = INFINITY;
  EXPECT_THROW(MlpModel::Train(x, std::vector<int>{0, 1, 2}), TrainError);
  const MlpModel m = MlpModel::Initialize(2, {4}, 0);
  EXPECT_THROW(m.Predict(Matrix(1, 3)), PredictError);
}

}  // namespace
}  // namespace fluency
