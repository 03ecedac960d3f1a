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

#ifndef FLUENCY_MANIFEST_H_
#define FLUENCY_MANIFEST_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fluency/label.h"

namespace fluency {

// Inclusive range of segment indices within one source file.
struct SegmentRange {
  int first = 0;
  int last = 0;

  bool Contains(int i) const { return i >= first && i <= last; }
  bool Overlaps(const SegmentRange& o) const {
    return first <= o.last && o.first <= last;
  }
};

struct ManifestEntry {
  std::filesystem::path wav_path;  // as written in the manifest
  std::string speaker_id;
  FluencyLabel label;
  // Absent: the whole file. Present: overrides the file-level label for
  // these indices.
  std::optional<SegmentRange> segments;
  int row = 0;  // 1-based data row number (header excluded)
};

// CSV with header `path,speaker,label,sublevel[,segments]`. The optional
// `segments` column holds "i" or "i-j". A leading "# format_version=N"
// comment line is recognized.
struct Manifest {
  int format_version = 1;
  std::vector<ManifestEntry> entries;
  // Relative wav paths resolve against this directory.
  std::filesystem::path base_dir;

  std::filesystem::path Resolve(const ManifestEntry& e) const {
    return e.wav_path.is_absolute() ? e.wav_path : base_dir / e.wav_path;
  }
};

// Throws ManifestError naming the offending row.
Manifest ParseManifest(std::string_view text,
                       const std::filesystem::path& base_dir = {});

// Reads and parses `path`; when `check_files` is set, every referenced file
// must exist (ManifestError listing all missing paths).
Manifest LoadManifest(const std::filesystem::path& path, bool check_files = true);

void CheckManifestFiles(const Manifest& manifest);

void WriteManifest(const std::filesystem::path& path, const Manifest& manifest);

}  // namespace fluency

#endif  // FLUENCY_MANIFEST_H_
