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

#include "fluency/features.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "fluency/csv.h"
#include "fluency/errors.h"

namespace fluency {
namespace {

constexpr double kMelLinearHzPerMel = 200.0 / 3.0;
constexpr double kMelLogStartHz = 1000.0;
constexpr double kMelLogStartMel = kMelLogStartHz / kMelLinearHzPerMel;  // 15
const double kMelLogStep = std::log(6.4) / 27.0;

constexpr double kPowerFloor = 1e-10;
constexpr double kTopDb = 80.0;

// Index into a signal of length n under whole-sample symmetric reflection
// (x[-1] = x[1], x[n] = x[n-2]).
size_t ReflectIndex(int64_t i, int64_t n) {
  if (n == 1) return 0;
  const int64_t period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  if (i >= n) i = period - i;
  return static_cast<size_t>(i);
}

template <typename Fn>
std::vector<double> PerFrame(std::span<const float> samples,
                             const FeatureConfig& config, Fn&& reduce) {
  const size_t frames = NumFrames(samples.size(), config.hop);
  const auto n_fft = static_cast<size_t>(config.n_fft);
  const auto n = static_cast<int64_t>(samples.size());
  std::vector<double> out(frames);
  std::vector<double> frame(n_fft);
  for (size_t t = 0; t < frames; ++t) {
    const int64_t start = static_cast<int64_t>(t) * config.hop - config.n_fft / 2;
    for (size_t j = 0; j < n_fft; ++j) {
      frame[j] = samples[ReflectIndex(start + static_cast<int64_t>(j), n)];
    }
    out[t] = reduce(std::span<const double>(frame));
  }
  return out;
}

double ZeroCrossingRate(std::span<const double> frame) {
  if (frame.size() < 2) return 0.0;
  size_t crossings = 0;
  for (size_t j = 1; j < frame.size(); ++j) {
    if ((frame[j - 1] >= 0.0) != (frame[j] >= 0.0)) ++crossings;
  }
  return static_cast<double>(crossings) / static_cast<double>(frame.size() - 1);
}

double RootMeanSquare(std::span<const double> frame) {
  double sum = 0.0;
  for (double x : frame) sum += x * x;
  return std::sqrt(sum / static_cast<double>(frame.size()));
}

double Mean(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

}  // namespace

void FeatureConfig::Validate() const {
  if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
  if (n_fft < 2) throw ConfigError("n_fft must be at least 2");
  if (hop <= 0 || hop > n_fft) throw ConfigError("hop must be in (0, n_fft]");
  if (n_mel_filters < 1) throw ConfigError("n_mel_filters must be positive");
  if (n_mfcc < 1 || n_mfcc > n_mel_filters) {
    throw ConfigError("n_mfcc must be in [1, n_mel_filters], got " +
                      std::to_string(n_mfcc));
  }
  const double top = effective_fmax();
  if (fmin < 0.0 || fmin >= top || top > sample_rate / 2.0) {
    throw ConfigError("frequency range must satisfy 0 <= fmin < fmax <= sr/2");
  }
}

std::string FeatureConfig::ToString() const {
  std::ostringstream s;
  s << "n_mfcc=" << n_mfcc << ";extras=" << (include_extras ? 1 : 0)
    << ";n_fft=" << n_fft << ";hop=" << hop
    << ";n_mels=" << n_mel_filters << ";fmin=" << csv::FormatDouble(fmin)
    << ";fmax=" << csv::FormatDouble(effective_fmax()) << ";sr=" << sample_rate
    << ";window=" << (window == WindowType::kHann ? "hann" : "rect");
  return s.str();
}

std::string FeatureConfig::Hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : ToString()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double HzToMel(double hz) {
  if (hz < kMelLogStartHz) return hz / kMelLinearHzPerMel;
  return kMelLogStartMel + std::log(hz / kMelLogStartHz) / kMelLogStep;
}

double MelToHz(double mel) {
  if (mel < kMelLogStartMel) return mel * kMelLinearHzPerMel;
  return kMelLogStartHz * std::exp(kMelLogStep * (mel - kMelLogStartMel));
}

std::vector<double> DctOrtho(std::span<const double> input) {
  const size_t n = input.size();
  std::vector<double> out(n, 0.0);
  for (size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    for (size_t m = 0; m < n; ++m) {
      sum += input[m] * std::cos(std::numbers::pi * static_cast<double>(k) *
                                 (2.0 * static_cast<double>(m) + 1.0) /
                                 (2.0 * static_cast<double>(n)));
    }
    out[k] = sum * std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
  }
  return out;
}

size_t NumFrames(size_t num_samples, int hop) {
  return 1 + num_samples / static_cast<size_t>(hop);
}

FeatureExtractor::FeatureExtractor(FeatureConfig config)
    : config_((config.Validate(), config)),
      fft_(static_cast<size_t>(config.n_fft)) {
  const auto n_fft = static_cast<size_t>(config_.n_fft);
  window_.resize(n_fft);
  for (size_t j = 0; j < n_fft; ++j) {
    window_[j] = config_.window == WindowType::kHann
                     ? 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                            static_cast<double>(j) /
                                            static_cast<double>(n_fft))
                     : 1.0;
  }

  // Filter i rises from edge i to a peak at edge i+1 and falls to edge i+2;
  // edges are uniformly spaced in mel.
  const auto n_mels = static_cast<size_t>(config_.n_mel_filters);
  const size_t n_bins = static_cast<size_t>(config_.num_bins());
  const double sr = config_.sample_rate;
  const double mel_lo = HzToMel(config_.fmin);
  const double mel_hi = HzToMel(config_.effective_fmax());
  std::vector<double> edges(n_mels + 2);
  for (size_t i = 0; i < edges.size(); ++i) {
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                    static_cast<double>(n_mels + 1));
  }
  const double bin_hz = sr / static_cast<double>(n_fft);

  filterbank_ = Matrix(n_mels, n_bins);
  sparse_filters_.resize(n_mels);
  for (size_t i = 0; i < n_mels; ++i) {
    const double lo = edges[i];
    const double center = edges[i + 1];
    const double hi = edges[i + 2];
    const double norm = 2.0 / (hi - lo);
    size_t first = n_bins;
    size_t last = 0;
    for (size_t b = 0; b < n_bins; ++b) {
      const double f = static_cast<double>(b) * bin_hz;
      const double rising = (f - lo) / (center - lo);
      const double falling = (hi - f) / (hi - center);
      const double w = std::max(0.0, std::min(rising, falling)) * norm;
      filterbank_(i, b) = w;
      if (w > 0.0) {
        first = std::min(first, b);
        last = b;
      }
    }
    if (first == n_bins || hi - lo < bin_hz) {
      throw ConfigError("mel filter " + std::to_string(i) +
                        " spans less than one FFT bin; reduce n_mel_filters "
                        "or increase n_fft");
    }
    sparse_filters_[i].first_bin = first;
    sparse_filters_[i].weights.assign(filterbank_.row(i).begin() + first,
                                      filterbank_.row(i).begin() + last + 1);
  }

  const auto n_mfcc = static_cast<size_t>(config_.n_mfcc);
  dct_ = Matrix(n_mfcc, n_mels);
  for (size_t k = 0; k < n_mfcc; ++k) {
    const double scale =
        std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n_mels));
    for (size_t m = 0; m < n_mels; ++m) {
      dct_(k, m) = scale * std::cos(std::numbers::pi * static_cast<double>(k) *
                                    (2.0 * static_cast<double>(m) + 1.0) /
                                    (2.0 * static_cast<double>(n_mels)));
    }
  }
}

void FeatureExtractor::FillFrame(std::span<const float> samples, size_t t,
                                 std::span<double> frame) const {
  const auto n = static_cast<int64_t>(samples.size());
  const int64_t start =
      static_cast<int64_t>(t) * config_.hop - config_.n_fft / 2;
  for (size_t j = 0; j < frame.size(); ++j) {
    frame[j] = samples[ReflectIndex(start + static_cast<int64_t>(j), n)];
  }
}

Spectrogram FeatureExtractor::StftPower(std::span<const float> samples) const {
  if (samples.empty()) throw ExtractionError("empty signal");
  Spectrogram spec;
  spec.n_bins = static_cast<size_t>(config_.num_bins());
  spec.n_frames = NumFrames(samples.size(), config_.hop);
  spec.values.resize(spec.n_bins * spec.n_frames);

  std::vector<double> frame(static_cast<size_t>(config_.n_fft));
  std::vector<Complex> bins(spec.n_bins);
  for (size_t t = 0; t < spec.n_frames; ++t) {
    FillFrame(samples, t, frame);
    for (size_t j = 0; j < frame.size(); ++j) frame[j] *= window_[j];
    fft_.Forward(frame, bins);
    double* column = spec.values.data() + t * spec.n_bins;
    for (size_t b = 0; b < spec.n_bins; ++b) column[b] = std::norm(bins[b]);
  }
  return spec;
}

Matrix FeatureExtractor::MelDb(const Spectrogram& power) const {
  const size_t n_mels = sparse_filters_.size();
  Matrix db(n_mels, power.n_frames);
  for (size_t t = 0; t < power.n_frames; ++t) {
    const std::span<const double> column = power.frame(t);
    double frame_max = -INFINITY;
    for (size_t m = 0; m < n_mels; ++m) {
      const SparseFilter& filter = sparse_filters_[m];
      double energy = 0.0;
      for (size_t j = 0; j < filter.weights.size(); ++j) {
        energy += filter.weights[j] * column[filter.first_bin + j];
      }
      const double value = 10.0 * std::log10(std::max(energy, kPowerFloor));
      db(m, t) = value;
      frame_max = std::max(frame_max, value);
    }
    const double floor = frame_max - kTopDb;
    for (size_t m = 0; m < n_mels; ++m) db(m, t) = std::max(db(m, t), floor);
  }
  return db;
}

Matrix FeatureExtractor::MfccFromMelDb(const Matrix& mel_db) const {
  Matrix out(dct_.rows, mel_db.cols);
  for (size_t k = 0; k < dct_.rows; ++k) {
    for (size_t t = 0; t < mel_db.cols; ++t) {
      double sum = 0.0;
      for (size_t m = 0; m < dct_.cols; ++m) sum += dct_(k, m) * mel_db(m, t);
      out(k, t) = sum;
    }
  }
  return out;
}

Matrix FeatureExtractor::Mfcc(std::span<const float> samples) const {
  return MfccFromMelDb(MelDb(StftPower(samples)));
}

std::vector<double> FeatureExtractor::Zcr(std::span<const float> samples) const {
  if (samples.empty()) throw ExtractionError("empty signal");
  return PerFrame(samples, config_, ZeroCrossingRate);
}

std::vector<double> FeatureExtractor::Rmse(std::span<const float> samples) const {
  if (samples.empty()) throw ExtractionError("empty signal");
  return PerFrame(samples, config_, RootMeanSquare);
}

std::vector<double> FeatureExtractor::SpectralFluxFromMelDb(const Matrix& mel_db) {
  std::vector<double> flux(mel_db.cols, 0.0);
  for (size_t t = 1; t < mel_db.cols; ++t) {
    double sum = 0.0;
    for (size_t m = 0; m < mel_db.rows; ++m) {
      sum += std::max(0.0, mel_db(m, t) - mel_db(m, t - 1));
    }
    flux[t] = sum / static_cast<double>(mel_db.rows);
  }
  return flux;
}

std::vector<double> FeatureExtractor::SpectralFlux(
    std::span<const float> samples) const {
  return SpectralFluxFromMelDb(MelDb(StftPower(samples)));
}

FeatureVector FeatureExtractor::Extract(std::span<const float> samples) const {
  const Matrix mel_db = MelDb(StftPower(samples));
  const Matrix mfcc = MfccFromMelDb(mel_db);

  FeatureVector out;
  out.n_mfcc = config_.n_mfcc;
  out.has_extras = config_.include_extras;
  out.config_hash = config_.Hash();
  out.values.reserve(static_cast<size_t>(config_.dimension()));
  for (size_t k = 0; k < mfcc.rows; ++k) out.values.push_back(Mean(mfcc.row(k)));
  if (config_.include_extras) {
    out.values.push_back(Mean(Zcr(samples)));
    out.values.push_back(Mean(Rmse(samples)));
    out.values.push_back(Mean(SpectralFluxFromMelDb(mel_db)));
  }
  for (size_t i = 0; i < out.values.size(); ++i) {
    if (!std::isfinite(out.values[i])) {
      throw ExtractionError("non-finite feature at index " + std::to_string(i));
    }
  }
  return out;
}

Spectrogram StftPower(std::span<const float> samples, const FeatureConfig& config) {
  return FeatureExtractor(config).StftPower(samples);
}

Matrix MelFilterbank(const FeatureConfig& config) {
  return FeatureExtractor(config).mel_filterbank();
}

Matrix MfccFrames(std::span<const float> samples, const FeatureConfig& config) {
  return FeatureExtractor(config).Mfcc(samples);
}

std::vector<double> ZcrFrames(std::span<const float> samples,
                              const FeatureConfig& config) {
  return FeatureExtractor(config).Zcr(samples);
}

std::vector<double> RmseFrames(std::span<const float> samples,
                               const FeatureConfig& config) {
  return FeatureExtractor(config).Rmse(samples);
}

std::vector<double> SpectralFluxFrames(std::span<const float> samples,
                                       const FeatureConfig& config) {
  return FeatureExtractor(config).SpectralFlux(samples);
}

void WriteSpectrogramCsv(std::ostream& out, const Spectrogram& spec) {
  csv::Row header = {"frame"};
  for (size_t b = 0; b < spec.n_bins; ++b) header.push_back("b" + std::to_string(b));
  csv::WriteRow(out, header);
  for (size_t t = 0; t < spec.n_frames; ++t) {
    csv::Row row = {std::to_string(t)};
    for (double v : spec.frame(t)) row.push_back(csv::FormatDouble(v));
    csv::WriteRow(out, row);
  }
}

}  // namespace fluency
