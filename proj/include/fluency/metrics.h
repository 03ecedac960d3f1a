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

#ifndef FLUENCY_METRICS_H_
#define FLUENCY_METRICS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string_view>

#include "fluency/label.h"

namespace fluency {

// Fraction of matching entries. Throws EvalError on a length mismatch or
// empty input.
double Accuracy(std::span<const int> predicted, std::span<const int> actual);

// Rows are the true class, columns the predicted class, both in
// (low, intermediate, high) order.
struct ConfusionMatrix {
  std::array<std::array<int64_t, kNumClasses>, kNumClasses> counts{};

  int64_t total() const;
  int64_t trace() const;
  int64_t RowSum(int true_class) const;
  double accuracy() const;

  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Throws EvalError as Accuracy, and on labels outside the class range.
ConfusionMatrix Confusion(std::span<const int> predicted, std::span<const int> actual);

// Header row "actual/predicted,low,intermediate,high", then one labelled row
// per true class.
void WriteConfusionCsv(std::ostream& out, const ConfusionMatrix& m);
void WriteConfusionCsv(const std::filesystem::path& path, const ConfusionMatrix& m);
// Throws EvalError on malformed text.
ConfusionMatrix ParseConfusionCsv(std::string_view text);

}  // namespace fluency

#endif  // FLUENCY_METRICS_H_
