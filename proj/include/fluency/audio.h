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

#ifndef FLUENCY_AUDIO_H_
#define FLUENCY_AUDIO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace fluency {

// Every segment is resampled to this rate before feature extraction.
inline constexpr int kCanonicalSampleRate = 22050;

// Decoded PCM. Samples are normalized to [-1, 1] and stored interleaved when
// channels > 1.
struct AudioBuffer {
  std::vector<float> samples;
  int sample_rate = kCanonicalSampleRate;
  int channels = 1;
  std::string source_id;

  size_t num_frames() const {
    return channels > 0 ? samples.size() / static_cast<size_t>(channels) : 0;
  }
  double duration_seconds() const {
    return static_cast<double>(num_frames()) / sample_rate;
  }
};

// Parses a RIFF/WAVE byte stream: format 1 (16-bit PCM), format 3 (32-bit
// float) or WAVE_FORMAT_EXTENSIBLE wrapping either; 1-2 channels; 8-192 kHz.
// Throws DecodeError on malformed or truncated input and UnsupportedFormat
// for any other codec or layout.
AudioBuffer DecodeWav(std::span<const uint8_t> bytes,
                      std::string source_id = {});

AudioBuffer ReadWavFile(const std::filesystem::path& path);

// 16-bit PCM encoding; samples are clamped to [-1, 1) and rounded to the
// nearest code (x * 32768).
std::vector<uint8_t> EncodeWav16(const AudioBuffer& buffer);

void WriteWavFile(const std::filesystem::path& path, const AudioBuffer& buffer);

// Arithmetic mean over channels. Mono input is returned unchanged.
AudioBuffer DownmixMono(const AudioBuffer& buffer);

// Band-limited resampling with a Kaiser-windowed sinc (beta 8.6, 32
// zero crossings per side). The cutoff sits at the lower of the two Nyquist
// frequencies. Output length is round(n * target / source). Equal rates pass
// the buffer through untouched. Requires mono input.
AudioBuffer Resample(const AudioBuffer& buffer, int target_sample_rate);

// Decode + downmix + resample to the canonical rate.
AudioBuffer LoadCanonical(const std::filesystem::path& path);

}  // namespace fluency

#endif  // FLUENCY_AUDIO_H_
