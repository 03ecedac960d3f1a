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

#ifndef FLUENCY_SYNTH_H_
#define FLUENCY_SYNTH_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "fluency/label.h"
#include "fluency/manifest.h"

namespace fluency {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Parameter ranges for one fluency class. Each generated segment draws its
// pause fraction, syllable rate and f0 uniformly from these.
struct ClassProfile {
  FluencyClass cls = FluencyClass::kLow;
  Range pause_fraction;
  Range syllable_rate;  // Hz, amplitude-modulation rate
  Range f0 = {90.0, 250.0};

  // Throws ConfigError when lo > hi, pause fraction leaves [0, 1], or a rate
  // or frequency is not positive.
  void Validate() const;
  static ClassProfile Default(FluencyClass cls);
};

std::array<ClassProfile, kNumClasses> DefaultProfiles();

// Low / intermediate / high.
inline constexpr std::array<int, kNumClasses> kDefaultClassCounts = {374, 618, 432};

struct SynthParams {
  double pause_fraction = 0.0;
  double syllable_rate = 0.0;
  double f0 = 0.0;
};

inline constexpr double kSynthPeak = 0.7;
inline constexpr double kSynthEnvelopeFloor = 0.4;
inline constexpr double kSynthRampSeconds = 0.010;
inline constexpr double kSynthDither = 3e-5;

// One mono segment at 22050 Hz. Voiced spans carry four harmonics of f0 with
// 1/k amplitudes, modulated by a raised cosine at the syllable rate; pauses
// hold low-level dither. When given, drawn receives the sampled parameters.
std::vector<float> GenerateSegment(const ClassProfile& profile, uint64_t seed,
                                   double seconds = 5.0,
                                   SynthParams* drawn = nullptr);

struct CorpusOptions {
  std::array<int, kNumClasses> counts = kDefaultClassCounts;
  uint64_t seed = 42;
  int jobs = 1;
  double segment_seconds = 5.0;
};

// Writes one WAV per segment under out_dir/wav and out_dir/manifest.csv.
// Throws CorpusError naming the path on I/O failure.
Manifest GenerateCorpus(const std::array<ClassProfile, kNumClasses>& profiles,
                        const CorpusOptions& options,
                        const std::filesystem::path& out_dir);

inline constexpr const char* kManifestFileName = "manifest.csv";

}  // namespace fluency

#endif  // FLUENCY_SYNTH_H_
