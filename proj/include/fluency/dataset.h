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

#ifndef FLUENCY_DATASET_H_
#define FLUENCY_DATASET_H_

#include <array>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fluency/features.h"
#include "fluency/label.h"
#include "fluency/manifest.h"
#include "fluency/segment.h"

namespace fluency {

struct Example {
  std::string source;
  int index = 0;
  std::string speaker;
  FluencyLabel label;
  std::vector<double> features;
};

// Labeled feature vectors in manifest order.
struct Dataset {
  std::vector<Example> examples;
  // Extraction config, when known (absent for datasets read back from a
  // feature CSV).
  std::optional<FeatureConfig> config;
  double segment_seconds = kDefaultSegmentSeconds;

  size_t size() const { return examples.size(); }
  size_t dimension() const {
    return examples.empty() ? 0 : examples.front().features.size();
  }
  std::array<size_t, kNumClasses> ClassCounts() const;
  double TotalMinutes() const {
    return static_cast<double>(size()) * segment_seconds / 60.0;
  }
  std::vector<int> Labels() const;
  // Rows in example order. Throws DatasetError on ragged rows.
  Matrix FeatureMatrix() const;

  // Keeps MFCC coefficients 0..n_mfcc-1 and, when `extras`, the trailing
  // ZCR/RMSE/SF columns. Because each coefficient's frame mean does not
  // depend on how many coefficients are kept, this equals re-extracting at
  // the smaller config. Requires a known config with extras when `extras`.
  Dataset Project(int n_mfcc, bool extras) const;
};

struct BuildOptions {
  double segment_seconds = kDefaultSegmentSeconds;
  bool drop_partial = true;
  int jobs = 1;
  // When set, one spectrogram CSV per segment is written here.
  std::optional<std::filesystem::path> dump_spectrogram_dir;
};

// decode -> downmix -> resample -> segment -> extract for every manifest
// entry. Output order follows the manifest regardless of `jobs`. Throws
// DatasetError when nothing is produced.
Dataset BuildDataset(const Manifest& manifest, const FeatureConfig& config,
                     const BuildOptions& options = {});

// Feature matrix CSV: header `source,index,speaker,label,f0..f{d-1}`.
void WriteFeatureCsv(std::ostream& out, const Dataset& dataset);
void WriteFeatureCsv(const std::filesystem::path& path, const Dataset& dataset);
// Throws DatasetError on malformed input.
Dataset ReadFeatureCsv(std::istream& in);
Dataset ReadFeatureCsv(const std::filesystem::path& path);

}  // namespace fluency

#endif  // FLUENCY_DATASET_H_
