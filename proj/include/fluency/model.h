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

#ifndef FLUENCY_MODEL_H_
#define FLUENCY_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "fluency/forest.h"
#include "fluency/matrix.h"
#include "fluency/mlp.h"
#include "fluency/standardizer.h"
#include "fluency/svm.h"

namespace fluency {

enum class ModelKind : uint32_t { kSvm = 1, kForest = 2, kMlp = 3 };

// "svm", "rf", "mlp".
std::string_view ModelKindName(ModelKind kind);
std::optional<ModelKind> ParseModelKind(std::string_view name);

struct TrainingOptions {
  ModelKind kind = ModelKind::kSvm;
  // Unset: on for SVM and MLP, off for the forest.
  std::optional<bool> standardize;
  SvmParams svm;
  ForestParams forest;
  MlpParams mlp;

  bool standardize_enabled() const {
    return standardize.value_or(kind != ModelKind::kForest);
  }
};

// How the training rows were chosen, so evaluation can recover the held-out
// rows of the same feature file.
struct SplitRecord {
  double ratio = 0.7;
  uint64_t seed = 42;
  bool stratified = false;
  uint64_t total_rows = 0;
};

// A classifier plus the standardizer fitted on its training rows.
class TrainedModel {
 public:
  using Variant = std::variant<SvmModel, ForestModel, MlpModel>;

  // Fits the standardizer (when enabled) on x, then trains.
  static TrainedModel Train(const Matrix& x, std::span<const int> y,
                            const TrainingOptions& options);

  ModelKind kind() const;
  size_t dimension() const { return dimension_; }
  const std::optional<Standardizer>& standardizer() const { return standardizer_; }
  const Variant& model() const { return model_; }

  // Throws PredictError on a dimension mismatch.
  std::vector<int> Predict(const Matrix& x) const;
  // Rows on the simplex: softmax for the MLP, tree-vote fractions for the
  // forest, pairwise-vote fractions for the SVM.
  Matrix PredictProba(const Matrix& x) const;

  SplitRecord split;

  // Binary layout (little-endian): magic "FLNCYMDL", u32 version, u32 kind,
  // u64 dimension, split record, standardizer, then kind-specific
  // hyperparameters and flat f64 arrays.
  std::vector<uint8_t> Serialize() const;
  // Throws ModelFormatError on corrupt input or when expected_dimension is
  // given and differs from the stored one.
  static TrainedModel Deserialize(std::span<const uint8_t> bytes,
                                  std::optional<size_t> expected_dimension = {});

  void Save(const std::filesystem::path& path) const;
  static TrainedModel Load(const std::filesystem::path& path,
                           std::optional<size_t> expected_dimension = {});

 private:
  Matrix Prepare(const Matrix& x) const;

  size_t dimension_ = 0;
  std::optional<Standardizer> standardizer_;
  Variant model_;
};

}  // namespace fluency

#endif  // FLUENCY_MODEL_H_
