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

#include "fluency/manifest.h"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "fluency/csv.h"
#include "fluency/errors.h"

namespace fluency {
namespace {

std::string Trim(std::string_view s) {
  const size_t b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const size_t e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<int> ParseInt(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return value;
}

[[noreturn]] void RowError(int row, const std::string& what) {
  throw ManifestError("row " + std::to_string(row) + ": " + what);
}

SegmentRange ParseRange(const std::string& text, int row) {
  const size_t dash = text.find('-');
  std::optional<int> first;
  std::optional<int> last;
  if (dash == std::string::npos) {
    first = last = ParseInt(text);
  } else {
    first = ParseInt(Trim(std::string_view(text).substr(0, dash)));
    last = ParseInt(Trim(std::string_view(text).substr(dash + 1)));
  }
  if (!first || !last || *first < 0 || *last < *first) {
    RowError(row, "bad segment range '" + text + "'");
  }
  return {*first, *last};
}

std::optional<int> ReadFormatVersion(std::string_view text) {
  constexpr std::string_view kKey = "# format_version=";
  if (text.substr(0, kKey.size()) != kKey) return std::nullopt;
  std::string_view rest = text.substr(kKey.size());
  rest = rest.substr(0, rest.find_first_of("\r\n"));
  return ParseInt(Trim(rest));
}

}  // namespace

Manifest ParseManifest(std::string_view text,
                       const std::filesystem::path& base_dir) {
  Manifest manifest;
  manifest.base_dir = base_dir;
  if (auto v = ReadFormatVersion(text)) {
    if (*v != 1) {
      throw ManifestError("unsupported manifest format_version " +
                          std::to_string(*v));
    }
    manifest.format_version = *v;
  }

  const std::vector<csv::Row> rows = csv::Parse(text);
  if (rows.empty()) throw ManifestError("manifest is empty (missing header)");
  const csv::Row& header = rows.front();
  const std::vector<std::string> expected = {"path", "speaker", "label",
                                             "sublevel"};
  if (header.size() < expected.size() ||
      !std::equal(expected.begin(), expected.end(), header.begin(),
                  [](const std::string& a, const std::string& b) {
                    return a == Trim(b);
                  })) {
    throw ManifestError("header must be 'path,speaker,label,sublevel'");
  }
  const bool has_segments = header.size() >= 5 && Trim(header[4]) == "segments";

  for (size_t r = 1; r < rows.size(); ++r) {
    const int row = static_cast<int>(r);
    const csv::Row& fields = rows[r];
    if (fields.size() < 3 || fields.size() > (has_segments ? 5u : 4u)) {
      RowError(row, "expected " + std::string(has_segments ? "3-5" : "3-4") +
                        " fields, found " + std::to_string(fields.size()));
    }
    ManifestEntry entry;
    entry.row = row;
    entry.wav_path = Trim(fields[0]);
    if (entry.wav_path.empty()) RowError(row, "empty path");
    entry.speaker_id = Trim(fields[1]);

    const std::string label_token = Trim(fields[2]);
    const std::optional<FluencyClass> cls = ParseClass(label_token);
    if (!cls) RowError(row, "unknown label '" + label_token + "'");

    std::optional<int> sublevel;
    if (fields.size() >= 4 && !Trim(fields[3]).empty()) {
      sublevel = ParseInt(Trim(fields[3]));
      if (!sublevel) RowError(row, "bad sublevel '" + Trim(fields[3]) + "'");
    }
    try {
      entry.label = FluencyLabel::Make(*cls, sublevel);
    } catch (const std::invalid_argument& e) {
      RowError(row, e.what());
    }
    if (fields.size() == 5 && !Trim(fields[4]).empty()) {
      entry.segments = ParseRange(Trim(fields[4]), row);
    }
    manifest.entries.push_back(std::move(entry));
  }

  // Uniqueness of (path, segment index): one whole-file row per path, and
  // ranged rows of a path may not overlap each other.
  std::map<std::string, std::vector<const ManifestEntry*>> by_path;
  for (const ManifestEntry& e : manifest.entries) {
    by_path[e.wav_path.lexically_normal().string()].push_back(&e);
  }
  for (const auto& [path, group] : by_path) {
    for (size_t i = 0; i < group.size(); ++i) {
      for (size_t j = i + 1; j < group.size(); ++j) {
        const ManifestEntry& a = *group[i];
        const ManifestEntry& b = *group[j];
        const bool clash = (!a.segments && !b.segments) ||
                           (a.segments && b.segments &&
                            a.segments->Overlaps(*b.segments));
        if (clash) {
          RowError(b.row, "duplicate segments of '" + path + "' (see row " +
                              std::to_string(a.row) + ")");
        }
      }
    }
  }
  return manifest;
}

void CheckManifestFiles(const Manifest& manifest) {
  std::vector<std::string> missing;
  for (const ManifestEntry& e : manifest.entries) {
    const std::filesystem::path p = manifest.Resolve(e);
    if (!std::filesystem::is_regular_file(p)) missing.push_back(p.string());
  }
  if (missing.empty()) return;
  std::string msg = std::to_string(missing.size()) + " missing file(s):";
  for (const auto& m : missing) msg += "\n  " + m;
  throw ManifestError(msg);
}

Manifest LoadManifest(const std::filesystem::path& path, bool check_files) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError(path.string() + ": cannot open manifest");
  std::ostringstream text;
  text << in.rdbuf();
  Manifest manifest;
  try {
    manifest = ParseManifest(text.str(), path.parent_path());
  } catch (const ManifestError& e) {
    throw ManifestError(path.string() + ": " + e.what());
  }
  if (check_files) CheckManifestFiles(manifest);
  return manifest;
}

void WriteManifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ManifestError(path.string() + ": cannot open for writing");
  bool any_range = false;
  for (const auto& e : manifest.entries) any_range |= e.segments.has_value();
  out << "# format_version=" << manifest.format_version << "\r\n";
  csv::Row header = {"path", "speaker", "label", "sublevel"};
  if (any_range) header.push_back("segments");
  csv::WriteRow(out, header);
  for (const auto& e : manifest.entries) {
    csv::Row row = {e.wav_path.generic_string(), e.speaker_id,
                    std::string(ClassName(e.label.cls)),
                    e.label.sublevel ? std::to_string(*e.label.sublevel) : ""};
    if (any_range) {
      row.push_back(e.segments ? std::to_string(e.segments->first) + "-" +
                                     std::to_string(e.segments->last)
                               : "");
    }
    csv::WriteRow(out, row);
  }
  if (!out) throw ManifestError(path.string() + ": write failed");
}

}  // namespace fluency
