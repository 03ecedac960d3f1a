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

#ifndef FLUENCY_MATRIX_H_
#define FLUENCY_MATRIX_H_

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace fluency {

// Row-major dense matrix of doubles.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(size_t r, size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(size_t r, size_t c) { return data[r * cols + c]; }
  double operator()(size_t r, size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(size_t r) const {
    return {data.data() + r * cols, cols};
  }
  std::span<double> row(size_t r) { return {data.data() + r * cols, cols}; }

  // Rows selected by index, in the given order.
  Matrix SelectRows(std::span<const size_t> indices) const {
    Matrix out(indices.size(), cols);
    for (size_t i = 0; i < indices.size(); ++i) {
      const auto src = row(indices[i]);
      std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
  }
};

}  // namespace fluency

#endif  // FLUENCY_MATRIX_H_
