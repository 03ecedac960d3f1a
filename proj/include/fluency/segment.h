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

#ifndef FLUENCY_SEGMENT_H_
#define FLUENCY_SEGMENT_H_

#include <string>
#include <vector>

#include "fluency/audio.h"
#include "fluency/label.h"

namespace fluency {

inline constexpr double kDefaultSegmentSeconds = 5.0;

// One fixed-length slice of a source recording; the unit of classification.
struct Segment {
  std::vector<float> samples;
  int sample_rate = kCanonicalSampleRate;
  std::string source_id;
  int index = 0;
  std::string speaker_id;
  FluencyLabel label;
  double duration_s = kDefaultSegmentSeconds;
  // Samples taken from the source; the rest (if any) is zero padding.
  size_t real_samples = 0;

  bool padded() const { return real_samples < samples.size(); }
};

// Length in samples of one segment: round(segment_s * sample_rate).
size_t SegmentLength(double segment_s, int sample_rate);

// Cuts consecutive non-overlapping segments; segment i holds samples
// [i*L, (i+1)*L). With drop_partial the trailing remainder is discarded,
// otherwise it becomes a final zero-padded segment. Requires mono input and
// segment_s > 0 (ConfigError).
std::vector<Segment> SegmentFixed(const AudioBuffer& buffer,
                                  double segment_s = kDefaultSegmentSeconds,
                                  bool drop_partial = true);

}  // namespace fluency

#endif  // FLUENCY_SEGMENT_H_
