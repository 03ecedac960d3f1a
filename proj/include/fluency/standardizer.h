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

#ifndef FLUENCY_STANDARDIZER_H_
#define FLUENCY_STANDARDIZER_H_

#include <span>
#include <vector>

#include "fluency/matrix.h"

namespace fluency {

inline constexpr double kStdFloor = 1e-8;

// Per-column z-scoring. Population standard deviation, floored at kStdFloor
// so constant columns map to zero.
struct Standardizer {
  std::vector<double> means;
  std::vector<double> stds;

  // Throws TrainError on empty or non-finite input.
  static Standardizer Fit(const Matrix& x);

  Matrix Apply(const Matrix& x) const;
  void ApplyInPlace(std::span<double> row) const;
};

}  // namespace fluency

#endif  // FLUENCY_STANDARDIZER_H_
