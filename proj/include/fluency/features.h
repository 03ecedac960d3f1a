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

#ifndef FLUENCY_FEATURES_H_
#define FLUENCY_FEATURES_H_

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fluency/audio.h"
#include "fluency/fft.h"
#include "fluency/matrix.h"

namespace fluency {

enum class WindowType { kHann, kRectangular };

struct FeatureConfig {
  int n_mfcc = 20;
  bool include_extras = true;  // ZCR, RMSE and spectral flux
  int n_fft = 2048;
  int hop = 512;
  int n_mel_filters = 128;
  double fmin = 0.0;
  double fmax = 0.0;  // <= 0 selects sample_rate / 2
  int sample_rate = kCanonicalSampleRate;
  WindowType window = WindowType::kHann;

  // Throws ConfigError.
  void Validate() const;

  double effective_fmax() const {
    return fmax > 0.0 ? fmax : sample_rate / 2.0;
  }
  int dimension() const { return n_mfcc + (include_extras ? 3 : 0); }
  int num_bins() const { return n_fft / 2 + 1; }

  // Canonical one-line description; also the hash input.
  std::string ToString() const;
  // 16 hex digits (FNV-1a of ToString()).
  std::string Hash() const;
};

// Power spectrogram |STFT|^2, n_bins x n_frames. Stored frame-major so that
// one frame is contiguous.
struct Spectrogram {
  size_t n_bins = 0;
  size_t n_frames = 0;
  std::vector<double> values;  // values[frame * n_bins + bin]

  double at(size_t bin, size_t frame) const {
    return values[frame * n_bins + bin];
  }
  std::span<const double> frame(size_t t) const {
    return {values.data() + t * n_bins, n_bins};
  }
};

// Per-segment vector: [mfcc_0 .. mfcc_{n-1}, zcr, rmse, sf] (extras
// optional).
struct FeatureVector {
  std::vector<double> values;
  int n_mfcc = 0;
  bool has_extras = false;
  std::string config_hash;

  double zcr() const { return values.at(static_cast<size_t>(n_mfcc)); }
  double rmse() const { return values.at(static_cast<size_t>(n_mfcc) + 1); }
  double spectral_flux() const {
    return values.at(static_cast<size_t>(n_mfcc) + 2);
  }
};

// Slaney mel scale: linear below 1 kHz (3 mel per 200 Hz), logarithmic above.
double HzToMel(double hz);
double MelToHz(double mel);

// Orthonormal DCT-II of a vector.
std::vector<double> DctOrtho(std::span<const double> input);

// Number of centered frames for a signal of `num_samples` samples.
size_t NumFrames(size_t num_samples, int hop);

// Holds the precomputed tables for one FeatureConfig (window, FFT plan, mel
// filterbank, DCT basis). Immutable after construction and safe to share
// across threads.
class FeatureExtractor {
 public:
  // Validates the config and builds the filterbank; throws ConfigError.
  explicit FeatureExtractor(FeatureConfig config);

  const FeatureConfig& config() const { return config_; }

  // Dense [n_mel_filters x n_bins] Slaney-normalized triangular filters.
  const Matrix& mel_filterbank() const { return filterbank_; }

  // Frames are length-n_fft slices hop apart over the signal reflect-padded
  // by n_fft/2 on both sides; each column is |FFT(window * frame)|^2.
  Spectrogram StftPower(std::span<const float> samples) const;

  // dB mel spectrogram [n_mel_filters x n_frames]: 10 log10(max(p, 1e-10)),
  // each frame clamped from below at its own maximum minus 80 dB.
  Matrix MelDb(const Spectrogram& power) const;

  // [n_mfcc x n_frames].
  Matrix Mfcc(std::span<const float> samples) const;
  Matrix MfccFromMelDb(const Matrix& mel_db) const;

  std::vector<double> Zcr(std::span<const float> samples) const;
  std::vector<double> Rmse(std::span<const float> samples) const;
  std::vector<double> SpectralFlux(std::span<const float> samples) const;
  static std::vector<double> SpectralFluxFromMelDb(const Matrix& mel_db);

  // Mean over frames of every per-frame series. Throws ExtractionError on a
  // non-finite result.
  FeatureVector Extract(std::span<const float> samples) const;

 private:
  struct SparseFilter {
    size_t first_bin = 0;
    std::vector<double> weights;
  };

  // Copies centered frame t of the reflect-padded signal into `frame`.
  void FillFrame(std::span<const float> samples, size_t t,
                 std::span<double> frame) const;

  FeatureConfig config_;
  std::vector<double> window_;
  RealFft fft_;
  Matrix filterbank_;
  std::vector<SparseFilter> sparse_filters_;
  Matrix dct_;  // [n_mfcc x n_mel_filters]
};

// Free-function forms; each builds a FeatureExtractor for the call.
Spectrogram StftPower(std::span<const float> samples, const FeatureConfig& config);
Matrix MelFilterbank(const FeatureConfig& config);
Matrix MfccFrames(std::span<const float> samples, const FeatureConfig& config);
std::vector<double> ZcrFrames(std::span<const float> samples,
                              const FeatureConfig& config);
std::vector<double> RmseFrames(std::span<const float> samples,
                               const FeatureConfig& config);
std::vector<double> SpectralFluxFrames(std::span<const float> samples,
                                       const FeatureConfig& config);

// Writes a spectrogram as CSV: header "frame,b0..b{n-1}", one row per frame.
void WriteSpectrogramCsv(std::ostream& out, const Spectrogram& spec);

}  // namespace fluency

#endif  // FLUENCY_FEATURES_H_
