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

#ifndef FLUENCY_MLP_H_
#define FLUENCY_MLP_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fluency/label.h"
#include "fluency/matrix.h"

namespace fluency {

struct MlpParams {
  std::vector<int> hidden = {512, 512};
  int epochs = 200;
  int batch_size = 32;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  uint64_t seed = 42;
};

// Fully connected ReLU network with a softmax output over the fluency
// classes, trained on mean cross-entropy with Adam.
class MlpModel {
 public:
  struct Layer {
    Eigen::MatrixXd weights;  // [out x in]
    Eigen::VectorXd bias;     // [out]
  };

  // He-uniform weights (limit sqrt(6 / fan_in)) and zero biases.
  static MlpModel Initialize(int input_dim, const std::vector<int>& hidden,
                             uint64_t seed);

  // Throws TrainError on fewer than two classes or non-finite input. A loss
  // that never falls below its initial value is reported through
  // loss_decreased(), not as an error.
  static MlpModel Train(const Matrix& x, std::span<const int> y,
                        const MlpParams& params = {});

  // Row-wise class probabilities; every row lies on the simplex.
  Matrix PredictProba(const Matrix& x) const;
  std::array<double, kNumClasses> PredictProba(std::span<const double> x) const;
  // Argmax of PredictProba; ties go to the lower class index.
  std::vector<int> Predict(const Matrix& x) const;
  int Predict(std::span<const double> x) const;

  // Mean cross-entropy over the rows of x.
  double Loss(const Matrix& x, std::span<const int> y) const;
  // Gradient of Loss in the order of Parameters().
  std::vector<double> LossGradient(const Matrix& x, std::span<const int> y) const;

  // Flat view: layer by layer, weights (column-major) then bias.
  std::vector<double> Parameters() const;
  void SetParameters(std::span<const double> flat);
  size_t num_parameters() const;

  size_t dimension() const { return dimension_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& mutable_layers() { return layers_; }

  // Entry 0 is the full-data loss before training; entry e is the mean
  // mini-batch loss during epoch e.
  const std::vector<double>& loss_history() const { return loss_history_; }
  bool loss_decreased() const {
    return loss_history_.size() < 2 || loss_history_.back() < loss_history_.front();
  }

  static MlpModel FromLayers(size_t dimension, std::vector<Layer> layers,
                             std::vector<double> loss_history = {});

 private:
  // Column-per-sample forward pass; returns activations of every layer
  // (index 0 is the input) with the last holding softmax probabilities.
  std::vector<Eigen::MatrixXd> Forward(const Eigen::MatrixXd& input) const;
  // Gradients of mean cross-entropy over the batch columns.
  void Backward(const std::vector<Eigen::MatrixXd>& activations,
                std::span<const int> y, std::vector<Layer>* grads) const;
  void CheckDimension(size_t cols) const;

  size_t dimension_ = 0;
  std::vector<Layer> layers_;
  std::vector<double> loss_history_;
};

}  // namespace fluency

#endif  // FLUENCY_MLP_H_
