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

#include "fluency/metrics.h"

#include <fstream>
#include <string>

#include "fluency/csv.h"
#include "fluency/errors.h"

namespace fluency {
namespace {

constexpr std::string_view kCorner = "actual/predicted";

void CheckLengths(std::span<const int> predicted, std::span<const int> actual) {
  if (predicted.size() != actual.size()) {
    throw EvalError("prediction/label length mismatch: " +
                    std::to_string(predicted.size()) + " vs " +
                    std::to_string(actual.size()));
  }
  if (actual.empty()) throw EvalError("cannot score an empty prediction set");
}

}  // namespace

double Accuracy(std::span<const int> predicted, std::span<const int> actual) {
  CheckLengths(predicted, actual);
  size_t hits = 0;
  for (size_t i = 0; i < actual.size(); ++i) hits += predicted[i] == actual[i];
  return static_cast<double>(hits) / static_cast<double>(actual.size());
}

int64_t ConfusionMatrix::total() const {
  int64_t s = 0;
  for (const auto& row : counts) {
    for (int64_t v : row) s += v;
  }
  return s;
}

int64_t ConfusionMatrix::trace() const {
  int64_t s = 0;
  for (size_t i = 0; i < kNumClasses; ++i) s += counts[i][i];
  return s;
}

int64_t ConfusionMatrix::RowSum(int true_class) const {
  int64_t s = 0;
  for (int64_t v : counts.at(static_cast<size_t>(true_class))) s += v;
  return s;
}

double ConfusionMatrix::accuracy() const {
  const int64_t n = total();
  return n == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(n);
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  for (size_t i = 0; i < kNumClasses; ++i) {
    for (size_t j = 0; j < kNumClasses; ++j) counts[i][j] += other.counts[i][j];
  }
  return *this;
}

ConfusionMatrix Confusion(std::span<const int> predicted, std::span<const int> actual) {
  CheckLengths(predicted, actual);
  ConfusionMatrix m;
  for (size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] < 0 || actual[i] >= kNumClasses || predicted[i] < 0 ||
        predicted[i] >= kNumClasses) {
      throw EvalError("label out of range at position " + std::to_string(i));
    }
    ++m.counts[static_cast<size_t>(actual[i])][static_cast<size_t>(predicted[i])];
  }
  return m;
}

void WriteConfusionCsv(std::ostream& out, const ConfusionMatrix& m) {
  csv::Row header = {std::string(kCorner)};
  for (FluencyClass c : kAllClasses) header.emplace_back(ClassName(c));
  csv::WriteRow(out, header);
  for (FluencyClass c : kAllClasses) {
    csv::Row row = {std::string(ClassName(c))};
    for (int64_t v : m.counts[static_cast<size_t>(ClassIndex(c))]) {
      row.push_back(std::to_string(v));
    }
    csv::WriteRow(out, row);
  }
}

void WriteConfusionCsv(const std::filesystem::path& path, const ConfusionMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EvalError(path.string() + ": cannot open for writing");
  WriteConfusionCsv(out, m);
  if (!out) throw EvalError(path.string() + ": write failed");
}

ConfusionMatrix ParseConfusionCsv(std::string_view text) {
  const auto rows = csv::Parse(text);
  if (rows.size() != kNumClasses + 1) throw EvalError("confusion CSV must have 4 rows");
  ConfusionMatrix m;
  for (size_t i = 0; i < kNumClasses; ++i) {
    const csv::Row& row = rows[i + 1];
    if (row.size() != kNumClasses + 1 ||
        ParseClass(row[0]) != ClassFromIndex(static_cast<int>(i))) {
      throw EvalError("malformed confusion CSV row " + std::to_string(i + 1));
    }
    for (size_t j = 0; j < kNumClasses; ++j) {
      try {
        m.counts[i][j] = std::stoll(row[j + 1]);
      } catch (const std::exception&) {
        throw EvalError("bad count '" + row[j + 1] + "'");
      }
    }
  }
  return m;
}

}  // namespace fluency
