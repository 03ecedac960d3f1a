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

#include "fluency/dataset.h"

#include <fstream>
#include <map>
#include <sstream>

#include "fluency/audio.h"
#include "fluency/csv.h"
#include "fluency/errors.h"
#include "fluency/parallel.h"

namespace fluency {

std::array<size_t, kNumClasses> Dataset::ClassCounts() const {
  std::array<size_t, kNumClasses> counts{};
  for (const Example& e : examples) ++counts[ClassIndex(e.label.cls)];
  return counts;
}

std::vector<int> Dataset::Labels() const {
  std::vector<int> labels;
  labels.reserve(examples.size());
  for (const Example& e : examples) labels.push_back(ClassIndex(e.label.cls));
  return labels;
}

Matrix Dataset::FeatureMatrix() const {
  const size_t d = dimension();
  Matrix x(examples.size(), d);
  for (size_t r = 0; r < examples.size(); ++r) {
    const auto& f = examples[r].features;
    if (f.size() != d) {
      throw DatasetError("row " + std::to_string(r + 1) + " has " +
                         std::to_string(f.size()) + " features, expected " +
                         std::to_string(d));
    }
    std::copy(f.begin(), f.end(), x.row(r).begin());
  }
  return x;
}

Dataset Dataset::Project(int n_mfcc, bool extras) const {
  if (!config) throw DatasetError("cannot project a dataset of unknown layout");
  if (n_mfcc < 1 || n_mfcc > config->n_mfcc) {
    throw DatasetError("cannot project to " + std::to_string(n_mfcc) +
                       " MFCCs from " + std::to_string(config->n_mfcc));
  }
  if (extras && !config->include_extras) {
    throw DatasetError("dataset was extracted without extra features");
  }
  Dataset out;
  out.segment_seconds = segment_seconds;
  out.config = *config;
  out.config->n_mfcc = n_mfcc;
  out.config->include_extras = extras;
  out.examples.reserve(examples.size());
  const auto base = static_cast<size_t>(config->n_mfcc);
  for (const Example& e : examples) {
    Example p = e;
    p.features.assign(e.features.begin(), e.features.begin() + n_mfcc);
    if (extras) {
      p.features.insert(p.features.end(),
                        e.features.begin() + static_cast<std::ptrdiff_t>(base),
                        e.features.begin() + static_cast<std::ptrdiff_t>(base + 3));
    }
    out.examples.push_back(std::move(p));
  }
  return out;
}

namespace {

// Segment indices each entry owns: ranged rows claim their range, a
// whole-file row claims the rest of its file.
bool Owns(const Manifest& manifest, size_t entry_index, int segment_index) {
  const ManifestEntry& entry = manifest.entries[entry_index];
  if (entry.segments) return entry.segments->Contains(segment_index);
  const auto key = entry.wav_path.lexically_normal();
  for (size_t j = 0; j < manifest.entries.size(); ++j) {
    const ManifestEntry& other = manifest.entries[j];
    if (j != entry_index && other.segments &&
        other.wav_path.lexically_normal() == key &&
        other.segments->Contains(segment_index)) {
      return false;
    }
  }
  return true;
}

void DumpSpectrogram(const std::filesystem::path& dir, const ManifestEntry& entry,
                     const Segment& seg, const FeatureExtractor& extractor) {
  const std::string stem = entry.wav_path.stem().string() + "_r" +
                           std::to_string(entry.row) + "_s" +
                           std::to_string(seg.index) + ".csv";
  std::ofstream out(dir / stem, std::ios::binary);
  if (!out) throw DatasetError((dir / stem).string() + ": cannot write");
  WriteSpectrogramCsv(out, extractor.StftPower(seg.samples));
}

}  // namespace

Dataset BuildDataset(const Manifest& manifest, const FeatureConfig& config,
                     const BuildOptions& options) {
  const FeatureExtractor extractor(config);
  if (config.sample_rate != kCanonicalSampleRate) {
    throw ConfigError("datasets are extracted at the canonical " +
                      std::to_string(kCanonicalSampleRate) + " Hz rate");
  }
  if (options.dump_spectrogram_dir) {
    std::filesystem::create_directories(*options.dump_spectrogram_dir);
  }

  std::vector<std::vector<Example>> per_entry(manifest.entries.size());
  ParallelFor(manifest.entries.size(), options.jobs, [&](size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    const std::filesystem::path path = manifest.Resolve(entry);
    AudioBuffer audio = LoadCanonical(path);
    std::vector<Segment> segments =
        SegmentFixed(audio, options.segment_seconds, options.drop_partial);
    if (entry.segments &&
        entry.segments->last >= static_cast<int>(segments.size())) {
      throw DatasetError(path.string() + ": segment range " +
                         std::to_string(entry.segments->first) + "-" +
                         std::to_string(entry.segments->last) + " exceeds " +
                         std::to_string(segments.size()) + " segments");
    }
    for (Segment& seg : segments) {
      if (!Owns(manifest, i, seg.index)) continue;
      seg.speaker_id = entry.speaker_id;
      seg.label = entry.label;
      Example ex;
      ex.source = entry.wav_path.generic_string();
      ex.index = seg.index;
      ex.speaker = entry.speaker_id;
      ex.label = entry.label;
      try {
        ex.features = extractor.Extract(seg.samples).values;
      } catch (const ExtractionError& e) {
        throw ExtractionError(path.string() + " segment " +
                              std::to_string(seg.index) + ": " + e.what());
      }
      if (options.dump_spectrogram_dir) {
        DumpSpectrogram(*options.dump_spectrogram_dir, entry, seg, extractor);
      }
      per_entry[i].push_back(std::move(ex));
    }
  });

  Dataset dataset;
  dataset.config = config;
  dataset.segment_seconds = options.segment_seconds;
  for (auto& group : per_entry) {
    for (auto& ex : group) dataset.examples.push_back(std::move(ex));
  }
  if (dataset.examples.empty()) {
    throw DatasetError("dataset is empty: no complete segments in manifest");
  }
  return dataset;
}

void WriteFeatureCsv(std::ostream& out, const Dataset& dataset) {
  csv::Row header = {"source", "index", "speaker", "label"};
  for (size_t j = 0; j < dataset.dimension(); ++j) {
    header.push_back("f" + std::to_string(j));
  }
  csv::WriteRow(out, header);
  for (const Example& e : dataset.examples) {
    csv::Row row = {e.source, std::to_string(e.index), e.speaker,
                    std::string(ClassName(e.label.cls))};
    for (double v : e.features) row.push_back(csv::FormatDouble(v));
    csv::WriteRow(out, row);
  }
}

void WriteFeatureCsv(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError(path.string() + ": cannot open for writing");
  WriteFeatureCsv(out, dataset);
  if (!out) throw DatasetError(path.string() + ": write failed");
}

Dataset ReadFeatureCsv(std::istream& in) {
  std::ostringstream text;
  text << in.rdbuf();
  const std::vector<csv::Row> rows = csv::Parse(text.str());
  if (rows.empty()) throw DatasetError("feature CSV is empty");
  const csv::Row& header = rows.front();
  if (header.size() < 5 || header[0] != "source" || header[1] != "index" ||
      header[2] != "speaker" || header[3] != "label") {
    throw DatasetError("feature CSV header must start with "
                       "'source,index,speaker,label,f0'");
  }
  const size_t dim = header.size() - 4;
  Dataset dataset;
  for (size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    const std::string where = "feature CSV row " + std::to_string(r);
    if (row.size() != header.size()) {
      throw DatasetError(where + ": expected " + std::to_string(header.size()) +
                         " fields, found " + std::to_string(row.size()));
    }
    Example e;
    e.source = row[0];
    e.speaker = row[2];
    const auto cls = ParseClass(row[3]);
    if (!cls) throw DatasetError(where + ": unknown label '" + row[3] + "'");
    e.label.cls = *cls;
    try {
      e.index = std::stoi(row[1]);
      e.features.reserve(dim);
      for (size_t j = 0; j < dim; ++j) e.features.push_back(csv::ParseDouble(row[4 + j]));
    } catch (const std::exception& ex) {
      throw DatasetError(where + ": " + ex.what());
    }
    dataset.examples.push_back(std::move(e));
  }
  return dataset;
}

Dataset ReadFeatureCsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(path.string() + ": cannot open");
  try {
    return ReadFeatureCsv(in);
  } catch (const DatasetError& e) {
    throw DatasetError(path.string() + ": " + e.what());
  }
}

}  // namespace fluency
