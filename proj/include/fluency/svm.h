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

#ifndef FLUENCY_SVM_H_
#define FLUENCY_SVM_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fluency/label.h"
#include "fluency/matrix.h"

namespace fluency {

struct SvmParams {
  double c = 1.0;
  double gamma = 0.0;  // <= 0 selects 1 / dimension
  double tolerance = 1e-3;
  // Iteration cap per pair; 0 selects max(10^7, 100 n).
  int64_t max_iterations = 0;
  // The SMO solver is deterministic; the seed is kept so every trainer has
  // the same signature.
  uint64_t seed = 42;
  int jobs = 1;
};

// Soft-margin RBF machine for one class pair. decision(x) > 0 votes for
// `first_class`, otherwise for `second_class`.
struct BinarySvm {
  int first_class = 0;
  int second_class = 1;
  Matrix support_vectors;
  std::vector<double> alphas;  // 0 < alpha <= C, one per support vector
  std::vector<int> signs;      // +1 for first_class, -1 for second_class
  double rho = 0.0;            // decision = sum alpha*sign*K(sv, x) - rho
  // Maximal KKT violation m(alpha) - M(alpha) at exit, and iterations used.
  double kkt_gap = 0.0;
  int64_t iterations = 0;

  double Decision(std::span<const double> x, double gamma) const;
};

class SvmModel {
 public:
  // One-vs-one over every pair of classes present in y. Throws TrainError on
  // fewer than two classes or non-finite input.
  static SvmModel Train(const Matrix& x, std::span<const int> y,
                        const SvmParams& params = {});

  // Votes per class; they sum to the number of trained pairs.
  std::array<int, kNumClasses> Votes(std::span<const double> x) const;
  // Most votes; ties go to the larger summed |decision| over the pairs a
  // class won, then to the lower class index.
  int Predict(std::span<const double> x) const;
  std::vector<int> Predict(const Matrix& x) const;
  // [rows x kNumClasses] vote counts.
  std::vector<std::array<int, kNumClasses>> VoteScores(const Matrix& x) const;

  size_t dimension() const { return dimension_; }
  double gamma() const { return gamma_; }
  double c() const { return c_; }
  const std::vector<BinarySvm>& pairs() const { return pairs_; }

  // Rebuilds a model from stored parts (used by deserialization).
  static SvmModel FromParts(size_t dimension, double gamma, double c,
                            std::vector<BinarySvm> pairs);

 private:
  void CheckDimension(size_t cols) const;

  size_t dimension_ = 0;
  double gamma_ = 0.0;
  double c_ = 1.0;
  std::vector<BinarySvm> pairs_;
};

double RbfKernel(std::span<const double> a, std::span<const double> b,
                 double gamma);

}  // namespace fluency

#endif  // FLUENCY_SVM_H_
