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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fluency/errors.h"
#include "fluency/rng.h"

namespace fluency {
namespace {

// Samples become columns.
Eigen::MatrixXd ToColumns(const Matrix& x) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(x.cols),
                      static_cast<Eigen::Index>(x.rows));
  for (size_t r = 0; r < x.rows; ++r) {
    for (size_t c = 0; c < x.cols; ++c) {
      out(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = x(r, c);
    }
  }
  return out;
}

void SoftmaxColumns(Eigen::MatrixXd* z) {
  for (Eigen::Index j = 0; j < z->cols(); ++j) {
    auto col = z->col(j);
    const double m = col.maxCoeff();
    col = (col.array() - m).exp().matrix();
    col /= col.sum();
  }
}

double CrossEntropy(const Eigen::MatrixXd& proba, std::span<const int> y) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < proba.cols(); ++j) {
    sum -= std::log(std::max(proba(y[static_cast<size_t>(j)], j), 1e-300));
  }
  return sum / static_cast<double>(proba.cols());
}

}  // namespace

MlpModel MlpModel::Initialize(int input_dim, const std::vector<int>& hidden,
                              uint64_t seed) {
  if (input_dim < 1) throw TrainError("input dimension must be positive");
  MlpModel model;
  model.dimension_ = static_cast<size_t>(input_dim);
  Rng rng(DeriveSeed(seed, {0x6d6c70u}));
  std::vector<int> sizes = {input_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(kNumClasses);
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    if (sizes[l + 1] < 1) throw TrainError("hidden layer sizes must be positive");
    Layer layer;
    layer.weights.resize(sizes[l + 1], sizes[l]);
    layer.bias = Eigen::VectorXd::Zero(sizes[l + 1]);
    const double limit = std::sqrt(6.0 / sizes[l]);
    for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
      for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
        layer.weights(r, c) = rng.Uniform(-limit, limit);
      }
    }
    model.layers_.push_back(std::move(layer));
  }
  return model;
}

MlpModel MlpModel::FromLayers(size_t dimension, std::vector<Layer> layers,
                              std::vector<double> loss_history) {
  MlpModel model;
  model.dimension_ = dimension;
  model.layers_ = std::move(layers);
  model.loss_history_ = std::move(loss_history);
  return model;
}

std::vector<Eigen::MatrixXd> MlpModel::Forward(const Eigen::MatrixXd& input) const {
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(layers_.size() + 1);
  acts.push_back(input);
  for (size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z = layers_[l].weights * acts.back();
    z.colwise() += layers_[l].bias;
    if (l + 1 < layers_.size()) {
      z = z.cwiseMax(0.0);
    } else {
      SoftmaxColumns(&z);
    }
    acts.push_back(std::move(z));
  }
  return acts;
}

void MlpModel::Backward(const std::vector<Eigen::MatrixXd>& acts,
                        std::span<const int> y, std::vector<Layer>* grads) const {
  const double inv_batch = 1.0 / static_cast<double>(acts.front().cols());
  // Softmax + cross-entropy: dL/dz = p - onehot(y).
  Eigen::MatrixXd delta = acts.back();
  for (Eigen::Index j = 0; j < delta.cols(); ++j) {
    delta(y[static_cast<size_t>(j)], j) -= 1.0;
  }
  delta *= inv_batch;
  grads->resize(layers_.size());
  for (size_t l = layers_.size(); l-- > 0;) {
    (*grads)[l].weights.noalias() = delta * acts[l].transpose();
    (*grads)[l].bias = delta.rowwise().sum();
    if (l == 0) break;
    Eigen::MatrixXd back = layers_[l].weights.transpose() * delta;
    delta = (acts[l].array() > 0.0).select(back, 0.0);
  }
}

void MlpModel::CheckDimension(size_t cols) const {
  if (cols != dimension_) {
    throw PredictError("MLP expects " + std::to_string(dimension_) +
                       " features, got " + std::to_string(cols));
  }
}

MlpModel MlpModel::Train(const Matrix& x, std::span<const int> y,
                         const MlpParams& params) {
  if (x.rows != y.size()) throw TrainError("feature/label count mismatch");
  if (x.rows == 0 || x.cols == 0) throw TrainError("empty training set");
  if (params.epochs < 1 || params.batch_size < 1 || !(params.learning_rate > 0.0)) {
    throw TrainError("epochs, batch size and learning rate must be positive");
  }
  for (double v : x.data) {
    if (!std::isfinite(v)) throw TrainError("non-finite training feature");
  }
  std::array<int, kNumClasses> counts{};
  for (int label : y) {
    if (label < 0 || label >= kNumClasses) throw TrainError("label out of range");
    ++counts[static_cast<size_t>(label)];
  }
  if (std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) < 2) {
    throw TrainError("MLP needs at least two classes");
  }

  MlpModel model = Initialize(static_cast<int>(x.cols), params.hidden, params.seed);
  const Eigen::MatrixXd all = ToColumns(x);
  model.loss_history_.push_back(CrossEntropy(model.Forward(all).back(), y));

  std::vector<Layer> m(model.layers_.size());
  std::vector<Layer> v(model.layers_.size());
  for (size_t l = 0; l < model.layers_.size(); ++l) {
    const Layer& layer = model.layers_[l];
    m[l].weights = Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols());
    m[l].bias = Eigen::VectorXd::Zero(layer.bias.size());
    v[l] = m[l];
  }

  Rng rng(DeriveSeed(params.seed, {0x73687566u}));
  std::vector<size_t> order(x.rows);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Layer> grads;
  std::vector<int> batch_labels;
  int64_t step = 0;
  const auto batch = static_cast<size_t>(params.batch_size);
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    rng.Shuffle(std::span<size_t>(order));
    double epoch_loss = 0.0;
    for (size_t start = 0; start < order.size(); start += batch) {
      const size_t count = std::min(batch, order.size() - start);
      Eigen::MatrixXd input(all.rows(), static_cast<Eigen::Index>(count));
      batch_labels.resize(count);
      for (size_t j = 0; j < count; ++j) {
        input.col(static_cast<Eigen::Index>(j)) =
            all.col(static_cast<Eigen::Index>(order[start + j]));
        batch_labels[j] = y[order[start + j]];
      }
      const auto acts = model.Forward(input);
      epoch_loss += CrossEntropy(acts.back(), batch_labels) * static_cast<double>(count);
      model.Backward(acts, batch_labels, &grads);

      ++step;
      const double correction =
          std::sqrt(1.0 - std::pow(params.beta2, static_cast<double>(step))) /
          (1.0 - std::pow(params.beta1, static_cast<double>(step)));
      const double lr = params.learning_rate * correction;
      for (size_t l = 0; l < model.layers_.size(); ++l) {
        m[l].weights = params.beta1 * m[l].weights + (1.0 - params.beta1) * grads[l].weights;
        v[l].weights = params.beta2 * v[l].weights +
                       (1.0 - params.beta2) * grads[l].weights.cwiseAbs2();
        model.layers_[l].weights.array() -=
            lr * m[l].weights.array() / (v[l].weights.array().sqrt() + params.epsilon);
        m[l].bias = params.beta1 * m[l].bias + (1.0 - params.beta1) * grads[l].bias;
        v[l].bias = params.beta2 * v[l].bias +
                    (1.0 - params.beta2) * grads[l].bias.cwiseAbs2();
        model.layers_[l].bias.array() -=
            lr * m[l].bias.array() / (v[l].bias.array().sqrt() + params.epsilon);
      }
    }
    model.loss_history_.push_back(epoch_loss / static_cast<double>(order.size()));
  }
  return model;
}

Matrix MlpModel::PredictProba(const Matrix& x) const {
  CheckDimension(x.cols);
  const Eigen::MatrixXd proba = Forward(ToColumns(x)).back();
  Matrix out(x.rows, kNumClasses);
  for (size_t r = 0; r < x.rows; ++r) {
    for (int c = 0; c < kNumClasses; ++c) {
      out(r, static_cast<size_t>(c)) = proba(c, static_cast<Eigen::Index>(r));
    }
  }
  return out;
}

std::array<double, kNumClasses> MlpModel::PredictProba(std::span<const double> x) const {
  Matrix one(1, x.size());
  std::copy(x.begin(), x.end(), one.data.begin());
  const Matrix p = PredictProba(one);
  return {p(0, 0), p(0, 1), p(0, 2)};
}

std::vector<int> MlpModel::Predict(const Matrix& x) const {
  const Matrix proba = PredictProba(x);
  std::vector<int> out(x.rows);
  for (size_t r = 0; r < x.rows; ++r) {
    const auto row = proba.row(r);
    out[r] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

int MlpModel::Predict(std::span<const double> x) const {
  const auto p = PredictProba(x);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

double MlpModel::Loss(const Matrix& x, std::span<const int> y) const {
  CheckDimension(x.cols);
  return CrossEntropy(Forward(ToColumns(x)).back(), y);
}

std::vector<double> MlpModel::LossGradient(const Matrix& x,
                                           std::span<const int> y) const {
  CheckDimension(x.cols);
  std::vector<Layer> grads;
  Backward(Forward(ToColumns(x)), y, &grads);
  std::vector<double> flat;
  flat.reserve(num_parameters());
  for (const Layer& g : grads) {
    flat.insert(flat.end(), g.weights.data(), g.weights.data() + g.weights.size());
    flat.insert(flat.end(), g.bias.data(), g.bias.data() + g.bias.size());
  }
  return flat;
}

std::vector<double> MlpModel::Parameters() const {
  std::vector<double> flat;
  flat.reserve(num_parameters());
  for (const Layer& l : layers_) {
    flat.insert(flat.end(), l.weights.data(), l.weights.data() + l.weights.size());
    flat.insert(flat.end(), l.bias.data(), l.bias.data() + l.bias.size());
  }
  return flat;
}

void MlpModel::SetParameters(std::span<const double> flat) {
  if (flat.size() != num_parameters()) {
    throw std::invalid_argument("parameter count mismatch");
  }
  size_t pos = 0;
  for (Layer& l : layers_) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), l.weights.size(),
                l.weights.data());
    pos += static_cast<size_t>(l.weights.size());
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), l.bias.size(),
                l.bias.data());
    pos += static_cast<size_t>(l.bias.size());
  }
}

size_t MlpModel::num_parameters() const {
  size_t n = 0;
  for (const Layer& l : layers_) {
    n += static_cast<size_t>(l.weights.size() + l.bias.size());
  }
  return n;
}

}  // namespace fluency
