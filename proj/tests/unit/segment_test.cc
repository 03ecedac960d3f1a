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

#include <gtest/gtest.h>

#include "fluency/errors.h"

namespace fluency {
namespace {

AudioBuffer Ramp(size_t n) {
  AudioBuffer b;
  b.samples.resize(n);
  for (size_t i = 0; i < n; ++i) b.samples[i] = static_cast<float>(i % 1000) / 1000.0f;
  b.source_id = "ramp";
  return b;
}

TEST(SegmentTest, TenMinutesGiveOneHundredTwentySegments) {
  const AudioBuffer b = Ramp(600 * 22050);
  const auto segs = SegmentFixed(b);
  ASSERT_EQ(segs.size(), 120u);
  for (size_t i = 0; i < segs.size(); ++i) {
    EXPECT_EQ(segs[i].samples.size(), 110250u);
    EXPECT_EQ(segs[i].index, static_cast<int>(i));
    EXPECT_EQ(segs[i].source_id, "ramp");
    EXPECT_DOUBLE_EQ(segs[i].duration_s, 5.0);
    EXPECT_FALSE(segs[i].padded());
  }
}

TEST(SegmentTest, ShortBufferGivesNothingWhenDroppingPartials) {
  EXPECT_TRUE(SegmentFixed(Ramp(static_cast<size_t>(4.9 * 22050))).empty());
}

TEST(SegmentTest, PartialTailIsZeroPadded) {
  const AudioBuffer b = Ramp(static_cast<size_t>(12.5 * 22050));
  const auto segs = SegmentFixed(b, 5.0, false);
  ASSERT_EQ(segs.size(), 3u);
  EXPECT_EQ(segs[2].real_samples, 55125u);
  EXPECT_TRUE(segs[2].padded());
  ASSERT_EQ(segs[2].samples.size(), 110250u);
  // Concatenation reproduces the source followed by zero padding.
  std::vector<float> joined;
  for (const auto& s : segs) joined.insert(joined.end(), s.samples.begin(), s.samples.end());
  for (size_t i = 0; i < b.samples.size(); ++i) ASSERT_EQ(joined[i], b.samples[i]);
  for (size_t i = b.samples.size(); i < joined.size(); ++i) ASSERT_EQ(joined[i], 0.0f);
}

TEST(SegmentTest, SegmentsAreConsecutiveSlices) {
  const AudioBuffer b = Ramp(23 * 22050 + 17);
  const auto segs = SegmentFixed(b);
  ASSERT_EQ(segs.size(), 4u);
  for (const auto& s : segs) {
    const size_t offset = static_cast<size_t>(s.index) * 110250;
    for (size_t j = 0; j < s.samples.size(); ++j) {
      ASSERT_EQ(s.samples[j], b.samples[offset + j]);
    }
  }
}

TEST(SegmentTest, LengthIsRounded) {
  EXPECT_EQ(SegmentLength(5.0, 22050), 110250u);
  EXPECT_EQ(SegmentLength(0.1, 22050), 2205u);
  EXPECT_EQ(SegmentLength(1.00002, 22050), 22050u);
}

TEST(SegmentTest, RejectsBadArguments) {
  EXPECT_THROW(SegmentFixed(Ramp(100), 0.0), ConfigError);
  AudioBuffer stereo = Ramp(100);
  stereo.channels = 2;
  EXPECT_THROW(SegmentFixed(stereo), ConfigError);
}

}  // namespace
}  // namespace fluency
