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

#include "fluency/standardizer.h"

#include <cmath>

#include "fluency/errors.h"

namespace fluency {

Standardizer Standardizer::Fit(const Matrix& x) {
  if (x.rows == 0 || x.cols == 0) throw TrainError("cannot standardize empty data");
  Standardizer s;
  s.means.assign(x.cols, 0.0);
  s.stds.assign(x.cols, 0.0);
  const auto n = static_cast<double>(x.rows);
  for (size_t r = 0; r < x.rows; ++r) {
    for (size_t c = 0; c < x.cols; ++c) {
      if (!std::isfinite(x(r, c))) {
        throw TrainError("non-finite value at row " + std::to_string(r) +
                         ", column " + std::to_string(c));
      }
      s.means[c] += x(r, c);
    }
  }
  for (double& m : s.means) m /= n;
  // Two-pass variance.
  for (size_t r = 0; r < x.rows; ++r) {
    for (size_t c = 0; c < x.cols; ++c) {
      const double d = x(r, c) - s.means[c];
      s.stds[c] += d * d;
    }
  }
  for (double& sd : s.stds) sd = std::max(std::sqrt(sd / n), kStdFloor);
  return s;
}

void Standardizer::ApplyInPlace(std::span<double> row) const {
  for (size_t c = 0; c < row.size(); ++c) row[c] = (row[c] - means[c]) / stds[c];
}

Matrix Standardizer::Apply(const Matrix& x) const {
  if (x.cols != means.size()) {
    throw PredictError("standardizer expects " + std::to_string(means.size()) +
                       " columns, got " + std::to_string(x.cols));
  }
  Matrix out = x;
  for (size_t r = 0; r < out.rows; ++r) ApplyInPlace(out.row(r));
  return out;
}

}  // namespace fluency
