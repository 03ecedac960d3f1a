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

#include "fluency/segment.h"

#include <cmath>

#include "fluency/errors.h"

namespace fluency {

size_t SegmentLength(double segment_s, int sample_rate) {
  return static_cast<size_t>(std::llround(segment_s * sample_rate));
}

std::vector<Segment> SegmentFixed(const AudioBuffer& buffer, double segment_s,
                                  bool drop_partial) {
  if (!(segment_s > 0.0)) throw ConfigError("segment length must be positive");
  if (buffer.channels != 1) throw ConfigError("segmentation requires mono audio");
  const size_t length = SegmentLength(segment_s, buffer.sample_rate);
  if (length == 0) throw ConfigError("segment length rounds to zero samples");

  const size_t total = buffer.samples.size();
  size_t count = total / length;
  if (!drop_partial && total % length != 0) ++count;

  std::vector<Segment> segments(count);
  for (size_t i = 0; i < count; ++i) {
    Segment& seg = segments[i];
    const size_t begin = i * length;
    const size_t end = std::min(total, begin + length);
    seg.samples.assign(length, 0.0f);
    std::copy(buffer.samples.begin() + static_cast<std::ptrdiff_t>(begin),
              buffer.samples.begin() + static_cast<std::ptrdiff_t>(end),
              seg.samples.begin());
    seg.real_samples = end - begin;
    seg.sample_rate = buffer.sample_rate;
    seg.source_id = buffer.source_id;
    seg.index = static_cast<int>(i);
    seg.duration_s = segment_s;
  }
  return segments;
}

}  // namespace fluency
