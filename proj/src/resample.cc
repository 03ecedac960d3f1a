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

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "fluency/audio.h"
#include "fluency/errors.h"

namespace fluency {
namespace {

constexpr double kKaiserBeta = 8.6;
constexpr int kZeroCrossings = 32;

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

double Kaiser(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - u * u)) /
         std::cyl_bessel_i(0.0, kKaiserBeta);
}

}  // namespace

// Polyphase evaluation: with target/source = up/down in lowest terms, output
// sample m sits at input position m * down / up, whose fractional part takes
// only `up` distinct values. One kernel per fractional phase is tabulated.
AudioBuffer Resample(const AudioBuffer& buffer, int target_sample_rate) {
  if (target_sample_rate <= 0) {
    throw ConfigError("target sample rate must be positive");
  }
  if (buffer.channels != 1) {
    throw std::invalid_argument("Resample requires mono input; downmix first");
  }
  if (buffer.sample_rate == target_sample_rate) return buffer;

  const int64_t g = std::gcd(buffer.sample_rate, target_sample_rate);
  const int64_t up = target_sample_rate / g;
  const int64_t down = buffer.sample_rate / g;
  // Cutoff relative to the input rate: the lower of the two Nyquists.
  const double scale = std::min(1.0, static_cast<double>(up) / down);
  const double support = kZeroCrossings / scale;
  const auto half_taps = static_cast<int64_t>(std::ceil(support));
  const int64_t taps = 2 * half_taps;

  std::vector<double> table(static_cast<size_t>(up * taps));
  for (int64_t p = 0; p < up; ++p) {
    const double frac = static_cast<double>(p) / up;
    for (int64_t j = 0; j < taps; ++j) {
      // Tap j reads input index base - half_taps + 1 + j.
      const double x = frac + static_cast<double>(half_taps - 1 - j);
      table[static_cast<size_t>(p * taps + j)] =
          scale * Sinc(scale * x) * Kaiser(x / support);
    }
  }

  const auto n_in = static_cast<int64_t>(buffer.samples.size());
  const auto n_out = static_cast<int64_t>(
      std::llround(static_cast<double>(n_in) * up / static_cast<double>(down)));

  AudioBuffer out;
  out.sample_rate = target_sample_rate;
  out.channels = 1;
  out.source_id = buffer.source_id;
  out.samples.resize(static_cast<size_t>(n_out));
  for (int64_t m = 0; m < n_out; ++m) {
    const int64_t pos = m * down;
    const int64_t base = pos / up;
    const int64_t phase = pos % up;
    const double* kernel = &table[static_cast<size_t>(phase * taps)];
    const int64_t first = base - half_taps + 1;
    const int64_t j_lo = std::max<int64_t>(0, -first);
    const int64_t j_hi = std::min<int64_t>(taps, n_in - first);
    double acc = 0.0;
    for (int64_t j = j_lo; j < j_hi; ++j) {
      acc += kernel[j] * buffer.samples[static_cast<size_t>(first + j)];
    }
    out.samples[static_cast<size_t>(m)] =
        static_cast<float>(std::clamp(acc, -1.0, 1.0));
  }
  return out;
}

}  // namespace fluency
