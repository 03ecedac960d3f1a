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

#include "fluency/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "fluency/audio.h"
#include "fluency/errors.h"
#include "fluency/parallel.h"
#include "fluency/rng.h"

namespace fluency {
namespace {

constexpr int kHarmonics = 4;
constexpr double kMinPauseSeconds = 0.15;
constexpr double kMaxPauseSeconds = 0.70;
constexpr uint64_t kCorpusStream = 0x73796e7468;  // "synth"

void CheckRange(const Range& r, const char* what) {
  if (!(r.lo <= r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi)) {
    throw ConfigError(std::string(what) + " range is empty or not finite");
  }
}

// Harmonic weights scaled so the carrier has the RMS of a unit sine.
std::array<double, kHarmonics> HarmonicWeights() {
  std::array<double, kHarmonics> w{};
  double energy = 0.0;
  for (int k = 0; k < kHarmonics; ++k) {
    w[static_cast<size_t>(k)] = 1.0 / (k + 1);
    energy += w[static_cast<size_t>(k)] * w[static_cast<size_t>(k)];
  }
  for (double& v : w) v /= std::sqrt(energy);
  return w;
}

void FillVoiced(std::span<float> out, size_t offset, double f0, double rate,
                bool ramp_in, bool ramp_out, int sample_rate) {
  static const auto kWeights = HarmonicWeights();
  const size_t n = out.size();
  const size_t ramp = std::min(
      static_cast<size_t>(std::llround(kSynthRampSeconds * sample_rate)), n / 2);
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(offset + i) / sample_rate;
    const double local = static_cast<double>(i) / sample_rate;
    double carrier = 0.0;
    for (int k = 0; k < kHarmonics; ++k) {
      carrier += kWeights[static_cast<size_t>(k)] *
                 std::sin(2.0 * std::numbers::pi * (k + 1) * f0 * t);
    }
    const double env =
        kSynthEnvelopeFloor + (1.0 - kSynthEnvelopeFloor) * 0.5 *
                                  (1.0 - std::cos(2.0 * std::numbers::pi * rate * local));
    double gain = 1.0;
    if (ramp > 0 && ramp_in && i < ramp) {
      gain = static_cast<double>(i) / static_cast<double>(ramp);
    }
    if (ramp > 0 && ramp_out && n - 1 - i < ramp) {
      gain = std::min(gain, static_cast<double>(n - 1 - i) / static_cast<double>(ramp));
    }
    out[i] = static_cast<float>(kSynthPeak * env * gain * carrier);
  }
}

}  // namespace

void ClassProfile::Validate() const {
  CheckRange(pause_fraction, "pause fraction");
  CheckRange(syllable_rate, "syllable rate");
  CheckRange(f0, "f0");
  if (pause_fraction.lo < 0.0 || pause_fraction.hi > 1.0) {
    throw ConfigError("pause fraction must lie in [0, 1]");
  }
  if (syllable_rate.lo <= 0.0 || f0.lo <= 0.0) {
    throw ConfigError("syllable rate and f0 must be positive");
  }
  if (kHarmonics * f0.hi >= kCanonicalSampleRate / 2.0) {
    throw ConfigError("highest harmonic exceeds the Nyquist frequency");
  }
}

ClassProfile ClassProfile::Default(FluencyClass cls) {
  switch (cls) {
    case FluencyClass::kLow:
      return {cls, {0.35, 0.55}, {1.5, 2.5}};
    case FluencyClass::kIntermediate:
      return {cls, {0.15, 0.30}, {2.5, 4.0}};
    case FluencyClass::kHigh:
      return {cls, {0.02, 0.10}, {4.0, 6.0}};
  }
  return {};
}

std::array<ClassProfile, kNumClasses> DefaultProfiles() {
  return {ClassProfile::Default(FluencyClass::kLow),
          ClassProfile::Default(FluencyClass::kIntermediate),
          ClassProfile::Default(FluencyClass::kHigh)};
}

std::vector<float> GenerateSegment(const ClassProfile& profile, uint64_t seed,
                                   double seconds, SynthParams* drawn) {
  profile.Validate();
  const int sr = kCanonicalSampleRate;
  const auto n = static_cast<size_t>(std::llround(seconds * sr));
  Rng rng(seed);
  SynthParams p;
  p.pause_fraction = rng.Uniform(profile.pause_fraction.lo, profile.pause_fraction.hi);
  p.syllable_rate = rng.Uniform(profile.syllable_rate.lo, profile.syllable_rate.hi);
  p.f0 = rng.Uniform(profile.f0.lo, profile.f0.hi);
  if (drawn != nullptr) *drawn = p;

  // Renewal process: pause lengths are drawn until their total reaches the
  // target, the last one trimmed to fit.
  const auto pause_total = std::min(
      n, static_cast<size_t>(std::llround(p.pause_fraction * static_cast<double>(n))));
  std::vector<size_t> pauses;
  for (size_t acc = 0; acc < pause_total;) {
    auto len = static_cast<size_t>(
        std::llround(rng.Uniform(kMinPauseSeconds, kMaxPauseSeconds) * sr));
    len = std::clamp<size_t>(len, 1, pause_total - acc);
    pauses.push_back(len);
    acc += len;
  }

  // Voiced time is shared among the gaps around the pauses by random weights.
  const size_t voiced_total = n - pause_total;
  std::vector<size_t> voiced;
  if (voiced_total > 0) {
    const size_t spans = pauses.size() + 1;
    std::vector<double> weights(spans);
    double weight_sum = 0.0;
    for (double& w : weights) {
      w = rng.Uniform(0.5, 1.5);
      weight_sum += w;
    }
    size_t given = 0;
    double cumulative = 0.0;
    for (size_t s = 0; s < spans; ++s) {
      cumulative += weights[s];
      const auto end = s + 1 == spans
                           ? voiced_total
                           : static_cast<size_t>(std::llround(
                                 cumulative / weight_sum * static_cast<double>(voiced_total)));
      voiced.push_back(end - given);
      given = end;
    }
  }

  std::vector<float> out(n, 0.0f);
  size_t pos = 0;
  const size_t pieces = std::max(voiced.size(), pauses.size());
  for (size_t i = 0; i < pieces; ++i) {
    if (i < voiced.size() && voiced[i] > 0) {
      FillVoiced(std::span<float>(out).subspan(pos, voiced[i]), pos, p.f0,
                 p.syllable_rate, i > 0, i < pauses.size(), sr);
      pos += voiced[i];
    }
    if (i < pauses.size()) {
      for (size_t k = 0; k < pauses[i]; ++k) {
        out[pos + k] = static_cast<float>(rng.Uniform(-kSynthDither, kSynthDither));
      }
      pos += pauses[i];
    }
  }
  return out;
}

Manifest GenerateCorpus(const std::array<ClassProfile, kNumClasses>& profiles,
                        const CorpusOptions& options,
                        const std::filesystem::path& out_dir) {
  for (const ClassProfile& profile : profiles) profile.Validate();
  for (int c : options.counts) {
    if (c < 0) throw ConfigError("segment counts must be non-negative");
  }
  const std::filesystem::path wav_dir = out_dir / "wav";
  std::error_code ec;
  std::filesystem::create_directories(wav_dir, ec);
  if (ec) throw CorpusError(wav_dir.string() + ": " + ec.message());

  Manifest manifest;
  manifest.base_dir = out_dir;
  struct Job {
    size_t cls;
    int index;
  };
  std::vector<Job> jobs;
  for (size_t c = 0; c < kNumClasses; ++c) {
    for (int i = 0; i < options.counts[c]; ++i) {
      jobs.push_back({c, i});
      char name[64];
      std::snprintf(name, sizeof(name), "%s_%04d",
                    std::string(ClassName(profiles[c].cls)).c_str(), i);
      ManifestEntry entry;
      entry.wav_path = std::filesystem::path("wav") / (std::string(name) + ".wav");
      entry.speaker_id = std::string("synth_") + name;
      entry.label = FluencyLabel{profiles[c].cls, std::nullopt};
      entry.row = static_cast<int>(manifest.entries.size()) + 1;
      manifest.entries.push_back(std::move(entry));
    }
  }

  ParallelFor(jobs.size(), options.jobs, [&](size_t j) {
    const Job& job = jobs[j];
    AudioBuffer buffer;
    buffer.samples = GenerateSegment(
        profiles[job.cls],
        DeriveSeed(options.seed, {kCorpusStream, job.cls, static_cast<uint64_t>(job.index)}),
        options.segment_seconds);
    const std::filesystem::path path = manifest.Resolve(manifest.entries[j]);
    try {
      WriteWavFile(path, buffer);
    } catch (const std::exception& e) {
      throw CorpusError(path.string() + ": " + e.what());
    }
  });

  const std::filesystem::path manifest_path = out_dir / kManifestFileName;
  try {
    WriteManifest(manifest_path, manifest);
  } catch (const std::exception& e) {
    throw CorpusError(manifest_path.string() + ": " + e.what());
  }
  return manifest;
}

}  // namespace fluency
