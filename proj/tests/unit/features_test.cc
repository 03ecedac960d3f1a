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
#include <random>

#include <gtest/gtest.h>

#include "fluency/errors.h"
#include "test_util.h"

namespace fluency {
namespace {

using testing::BruteDft;
using testing::Sine;

constexpr int kSr = 22050;
constexpr size_t kFiveSeconds = 110250;

// Frames whose window lies entirely inside the signal.
std::vector<size_t> InteriorFrames(size_t n_samples, const FeatureConfig& c) {
  std::vector<size_t> out;
  const size_t frames = NumFrames(n_samples, c.hop);
  for (size_t t = 0; t < frames; ++t) {
    const int64_t start = static_cast<int64_t>(t) * c.hop - c.n_fft / 2;
    if (start >= 0 && start + c.n_fft <= static_cast<int64_t>(n_samples)) out.push_back(t);
  }
  return out;
}

TEST(MelScaleTest, SlaneyConstants) {
  EXPECT_DOUBLE_EQ(HzToMel(1000.0), 15.0);
  EXPECT_NEAR(MelToHz(15.0), 1000.0, 1e-9);
  EXPECT_DOUBLE_EQ(HzToMel(200.0), 3.0);
  for (double hz : {0.0, 50.0, 999.0, 1000.0, 4000.0, 11025.0}) {
    EXPECT_NEAR(MelToHz(HzToMel(hz)), hz, 1e-9 * std::max(1.0, hz));
  }
  EXPECT_NEAR(HzToMel(6400.0), 15.0 + 27.0, 1e-12);
}

TEST(MelFilterbankTest, RowsAreNonNegativeUnimodalTriangles) {
  const FeatureConfig config;
  const Matrix fb = MelFilterbank(config);
  ASSERT_EQ(fb.rows, 128u);
  ASSERT_EQ(fb.cols, 1025u);
  const double mel_hi = HzToMel(kSr / 2.0);
  const double bin_hz = static_cast<double>(kSr) / config.n_fft;
  for (size_t i = 0; i < fb.rows; ++i) {
    const double f_lo = MelToHz(mel_hi * static_cast<double>(i) / 129.0);
    const double f_hi = MelToHz(mel_hi * static_cast<double>(i + 2) / 129.0);
    const auto row = fb.row(i);
    const size_t peak = static_cast<size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    EXPECT_GT(row[peak], 0.0);
    for (size_t b = 0; b < row.size(); ++b) {
      EXPECT_GE(row[b], 0.0);
      const double f = static_cast<double>(b) * bin_hz;
      if (f <= f_lo || f >= f_hi) {
        EXPECT_EQ(row[b], 0.0) << "row " << i << " bin " << b;
      }
      if (b > 0 && b <= peak) {
        EXPECT_GE(row[b], row[b - 1]);
      }
      if (b > peak) {
        EXPECT_LE(row[b], row[b - 1]);
      }
    }
    // Strictly inside the support.
    EXPECT_GT(static_cast<double>(peak) * bin_hz, f_lo);
    EXPECT_LT(static_cast<double>(peak) * bin_hz, f_hi);
  }
}

TEST(MelFilterbankTest, SlaneyNormGivesUnitAreaOnFineGrid) {
  FeatureConfig config;
  config.n_fft = 1 << 16;
  config.n_mel_filters = 16;
  config.n_mfcc = 13;
  const Matrix fb = MelFilterbank(config);
  const double bin_hz = static_cast<double>(kSr) / config.n_fft;
  for (size_t i = 0; i < fb.rows; ++i) {
    double area = 0.0;
    for (double w : fb.row(i)) area += w * bin_hz;
    EXPECT_NEAR(area, 1.0, 1e-3);
  }
}

TEST(MelFilterbankTest, TooManyFiltersForResolutionIsConfigError) {
  FeatureConfig config;
  config.n_fft = 64;
  EXPECT_THROW(MelFilterbank(config), ConfigError);
}

TEST(FeatureConfigTest, ValidatesRanges) {
  FeatureConfig c;
  c.n_mfcc = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.n_mfcc = 129;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.hop = 4096;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.fmin = 12000.0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  EXPECT_EQ(c.dimension(), 23);
  c.n_mfcc = 12;
  c.include_extras = false;
  EXPECT_EQ(c.dimension(), 12);
}

TEST(StftTest, ZeroInputGivesZeroSpectrogram) {
  const std::vector<float> zeros(5000, 0.0f);
  const Spectrogram s = StftPower(zeros, FeatureConfig{});
  EXPECT_EQ(s.n_bins, 1025u);
  EXPECT_EQ(s.n_frames, 1 + 5000u / 512);
  for (double v : s.values) EXPECT_EQ(v, 0.0);
}

TEST(StftTest, CenteredImpulseWithRectangularWindowIsFlat) {
  FeatureConfig config;
  config.window = WindowType::kRectangular;
  std::vector<float> x(8192, 0.0f);
  const size_t frame = 5;
  x[frame * 512] = 1.0f;
  const Spectrogram s = StftPower(x, config);
  for (size_t b = 0; b < s.n_bins; ++b) EXPECT_NEAR(s.at(b, frame), 1.0, 1e-12);
}

TEST(StftTest, SineFrameMatchesBruteForceDftAndPeaksAtBin41) {
  const FeatureConfig config;
  const std::vector<float> x = Sine(440.0, 1.0, kSr, kFiveSeconds);
  const Spectrogram s = StftPower(x, config);
  ASSERT_EQ(s.n_frames, NumFrames(kFiveSeconds, 512));

  std::vector<double> mean(s.n_bins, 0.0);
  for (size_t t = 0; t < s.n_frames; ++t) {
    for (size_t b = 0; b < s.n_bins; ++b) mean[b] += s.at(b, t);
  }
  EXPECT_EQ(std::max_element(mean.begin(), mean.end()) - mean.begin(), 41);

  // Oracle: windowed frame 100 through the O(n^2) DFT.
  const size_t t = 100;
  std::vector<std::complex<double>> frame(2048);
  for (size_t j = 0; j < 2048; ++j) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * j / 2048.0);
    frame[j] = w * x[t * 512 - 1024 + j];
  }
  const auto dft = BruteDft(frame);
  double peak = 0.0;
  for (size_t b = 0; b < s.n_bins; ++b) peak = std::max(peak, std::norm(dft[b]));
  for (size_t b = 0; b < s.n_bins; ++b) {
    EXPECT_NEAR(s.at(b, t), std::norm(dft[b]), 1e-6 * peak) << "bin " << b;
  }
}

TEST(StftTest, FrameCountsAgreeAcrossFeatures) {
  const FeatureConfig config;
  for (size_t n : {1u, 511u, 512u, 513u, 3000u, 110250u}) {
    std::vector<float> x(n, 0.25f);
    const size_t frames = NumFrames(n, 512);
    EXPECT_EQ(StftPower(x, config).n_frames, frames);
    EXPECT_EQ(ZcrFrames(x, config).size(), frames);
    EXPECT_EQ(RmseFrames(x, config).size(), frames);
    EXPECT_EQ(SpectralFluxFrames(x, config).size(), frames);
    EXPECT_EQ(MfccFrames(x, config).cols, frames);
  }
}

TEST(MfccTest, ZeroSignalConcentratesInFirstCoefficient) {
  const FeatureConfig config;
  const Matrix m = MfccFrames(std::vector<float>(kFiveSeconds, 0.0f), config);
  ASSERT_EQ(m.rows, 20u);
  // Every band sits at the -100 dB floor: c0 = sqrt(128) * -100.
  for (size_t t = 0; t < m.cols; ++t) {
    EXPECT_NEAR(m(0, t), -100.0 * std::sqrt(128.0), 1e-9);
    for (size_t k = 1; k < m.rows; ++k) EXPECT_NEAR(m(k, t), 0.0, 1e-9);
  }
}

TEST(MfccTest, FourBandsOfOneDbGiveTwoZeroZeroZero) {
  FeatureConfig config;
  config.n_mel_filters = 4;
  config.n_mfcc = 4;
  const FeatureExtractor extractor(config);
  Matrix db(4, 1, 1.0);
  const Matrix c = extractor.MfccFromMelDb(db);
  EXPECT_NEAR(c(0, 0), 2.0, 1e-12);
  for (size_t k = 1; k < 4; ++k) EXPECT_NEAR(c(k, 0), 0.0, 1e-12);
}

TEST(MfccTest, WhiteNoiseShapeAndFiniteness) {
  std::mt19937_64 engine(5);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::vector<float> x(kFiveSeconds);
  for (float& v : x) v = u(engine);
  const Matrix m = MfccFrames(x, FeatureConfig{});
  EXPECT_EQ(m.rows, 20u);
  EXPECT_EQ(m.cols, NumFrames(kFiveSeconds, 512));
  for (double v : m.data) EXPECT_TRUE(std::isfinite(v));
}

TEST(MelDbTest, EachFrameIsClampedEightyDbBelowItsMax) {
  std::vector<float> x = Sine(1000.0, 0.5, kSr, 20000);
  const FeatureExtractor extractor{FeatureConfig{}};
  const Matrix db = extractor.MelDb(extractor.StftPower(x));
  for (size_t t = 0; t < db.cols; ++t) {
    double hi = -INFINITY;
    double lo = INFINITY;
    for (size_t m = 0; m < db.rows; ++m) {
      hi = std::max(hi, db(m, t));
      lo = std::min(lo, db(m, t));
    }
    EXPECT_GE(lo, hi - 80.0 - 1e-9);
  }
}

TEST(ZcrTest, ConstantAlternatingAndSine) {
  const FeatureConfig config;
  for (double v : ZcrFrames(std::vector<float>(10000, 0.5f), config)) EXPECT_EQ(v, 0.0);

  std::vector<float> alt(10000);
  for (size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 == 0 ? 1.0f : -1.0f;
  const auto alt_zcr = ZcrFrames(alt, config);
  for (size_t t : InteriorFrames(alt.size(), config)) EXPECT_EQ(alt_zcr[t], 1.0);

  const std::vector<float> sine = Sine(440.0, 1.0, kSr, kFiveSeconds);
  const auto zcr = ZcrFrames(sine, config);
  for (size_t t : InteriorFrames(sine.size(), config)) {
    EXPECT_NEAR(zcr[t], 0.0399, 0.002) << "frame " << t;
    // Direct pair count on the raw samples.
    size_t crossings = 0;
    const size_t start = t * 512 - 1024;
    for (size_t j = start + 1; j < start + 2048; ++j) {
      crossings += (sine[j - 1] >= 0.0f) != (sine[j] >= 0.0f);
    }
    EXPECT_DOUBLE_EQ(zcr[t], static_cast<double>(crossings) / 2047.0);
  }
}

TEST(ZcrTest, ZeroCountsAsNonNegative) {
  FeatureConfig config;
  config.n_fft = 4;
  config.hop = 4;
  config.n_mel_filters = 1;
  config.n_mfcc = 1;
  // Frame 1 covers samples 2..5: 0, 1, 0, 2 -> no crossings.
  const std::vector<float> x = {0.0f, 1.0f, 0.0f, 1.0f, 0.0f, 2.0f, 0.0f, 3.0f};
  const auto zcr = ZcrFrames(x, config);
  EXPECT_EQ(zcr[1], 0.0);
}

TEST(RmseTest, SilenceConstantAndSine) {
  const FeatureConfig config;
  for (double v : RmseFrames(std::vector<float>(10000, 0.0f), config)) EXPECT_EQ(v, 0.0);
  for (double v : RmseFrames(std::vector<float>(10000, 0.8f), config)) {
    EXPECT_NEAR(v, 0.8, 1e-6);
  }
  const std::vector<float> sine = Sine(440.0, 0.5, kSr, kFiveSeconds);
  const auto rmse = RmseFrames(sine, config);
  for (size_t t : InteriorFrames(sine.size(), config)) {
    EXPECT_NEAR(rmse[t], 0.5 / std::sqrt(2.0), 0.01);
  }
}

TEST(SpectralFluxTest, StationaryToneHasNoInteriorFlux) {
  // A tone periodic in the hop makes consecutive frames identical.
  const FeatureConfig config;
  const double freq = 10.0 * kSr / 512.0;
  const std::vector<float> x = Sine(freq, 0.5, kSr, kFiveSeconds);
  const auto sf = SpectralFluxFrames(x, config);
  EXPECT_EQ(sf[0], 0.0);
  const auto interior = InteriorFrames(x.size(), config);
  for (size_t i = 1; i < interior.size(); ++i) {
    EXPECT_LT(std::abs(sf[interior[i]]), 1e-6) << "frame " << interior[i];
  }
}

TEST(SpectralFluxTest, OnsetFrameIsStrictMaximum) {
  const FeatureConfig config;
  std::vector<float> x(kFiveSeconds, 0.0f);
  const size_t onset = 40 * 512 + 100;
  const auto tone = Sine(660.0, 0.5, kSr, x.size() - onset);
  std::copy(tone.begin(), tone.end(), x.begin() + static_cast<std::ptrdiff_t>(onset));
  const auto sf = SpectralFluxFrames(x, config);
  const size_t argmax = static_cast<size_t>(std::max_element(sf.begin(), sf.end()) - sf.begin());
  // The first frame whose window reaches the onset.
  const size_t first_touch = (onset + 1024) / 512 - 3;
  EXPECT_GE(argmax, first_touch);
  EXPECT_LE(argmax, onset / 512 + 2);
  for (size_t t = 0; t < sf.size(); ++t) {
    if (t != argmax) {
      EXPECT_LT(sf[t], sf[argmax]);
    }
  }
}

TEST(SpectralFluxTest, ZeroSignalIsZeroAndFluxIsNonNegative) {
  const FeatureConfig config;
  for (double v : SpectralFluxFrames(std::vector<float>(10000, 0.0f), config)) {
    EXPECT_EQ(v, 0.0);
  }
  std::mt19937_64 engine(3);
  std::uniform_real_distribution<float> u(-0.5f, 0.5f);
  std::vector<float> noise(20000);
  for (float& v : noise) v = u(engine);
  for (double v : SpectralFluxFrames(noise, config)) EXPECT_GE(v, 0.0);
}

TEST(ExtractTest, DimensionsAndLayout) {
  const std::vector<float> x = Sine(300.0, 0.3, kSr, kFiveSeconds);
  FeatureConfig config;
  FeatureVector v = FeatureExtractor(config).Extract(x);
  EXPECT_EQ(v.values.size(), 23u);
  EXPECT_EQ(v.config_hash, config.Hash());
  EXPECT_GE(v.zcr(), 0.0);
  EXPECT_LE(v.zcr(), 1.0);
  EXPECT_GE(v.rmse(), 0.0);
  EXPECT_LE(v.rmse(), 1.0);
  EXPECT_GE(v.spectral_flux(), 0.0);

  config.n_mfcc = 12;
  config.include_extras = false;
  EXPECT_EQ(FeatureExtractor(config).Extract(x).values.size(), 12u);
}

TEST(ExtractTest, SilenceGivesZeroExtrasAndConstantFrameMfcc) {
  const FeatureConfig config;
  const std::vector<float> x(kFiveSeconds, 0.0f);
  const FeatureVector v = FeatureExtractor(config).Extract(x);
  EXPECT_EQ(v.zcr(), 0.0);
  EXPECT_EQ(v.rmse(), 0.0);
  EXPECT_EQ(v.spectral_flux(), 0.0);
  const Matrix frames = MfccFrames(x, config);
  for (size_t k = 0; k < 20; ++k) EXPECT_NEAR(v.values[k], frames(k, 0), 1e-9);
}

TEST(ExtractTest, AmplitudeScalingMovesOnlyC0AndRmse) {
  std::mt19937_64 engine(11);
  std::uniform_real_distribution<float> u(-0.2f, 0.2f);
  std::vector<float> x(kFiveSeconds);
  for (size_t i = 0; i < x.size(); ++i) {
    x[i] = u(engine) + 0.3f * static_cast<float>(std::sin(0.05 * static_cast<double>(i)));
  }
  std::vector<float> scaled(x.size());
  const double k = 0.5;  // exact in binary floating point
  for (size_t i = 0; i < x.size(); ++i) scaled[i] = static_cast<float>(k * x[i]);

  const FeatureExtractor extractor{FeatureConfig{}};
  const FeatureVector a = extractor.Extract(x);
  const FeatureVector b = extractor.Extract(scaled);
  EXPECT_NEAR(b.values[0] - a.values[0], std::sqrt(128.0) * 20.0 * std::log10(k), 1e-6);
  for (size_t c = 1; c < 20; ++c) EXPECT_NEAR(a.values[c], b.values[c], 1e-6);
  EXPECT_DOUBLE_EQ(a.zcr(), b.zcr());
  EXPECT_NEAR(b.rmse(), k * a.rmse(), 1e-9);
  EXPECT_NEAR(a.spectral_flux(), b.spectral_flux(), 1e-6);
}

TEST(ExtractTest, Deterministic) {
  const std::vector<float> x = Sine(523.0, 0.4, kSr, kFiveSeconds);
  const FeatureExtractor extractor{FeatureConfig{}};
  EXPECT_EQ(extractor.Extract(x).values, extractor.Extract(x).values);
}

TEST(ExtractTest, SmallerConfigsAreColumnPrefixes) {
  const std::vector<float> x = Sine(777.0, 0.4, kSr, 30000);
  FeatureConfig full;
  const FeatureVector a = FeatureExtractor(full).Extract(x);
  for (int n : {1, 5, 12, 20}) {
    FeatureConfig c = full;
    c.n_mfcc = n;
    const FeatureVector b = FeatureExtractor(c).Extract(x);
    for (int k = 0; k < n; ++k) {
      EXPECT_EQ(a.values[static_cast<size_t>(k)], b.values[static_cast<size_t>(k)]);
    }
    EXPECT_EQ(a.zcr(), b.zcr());
    EXPECT_EQ(a.rmse(), b.rmse());
    EXPECT_EQ(a.spectral_flux(), b.spectral_flux());
  }
}

TEST(ExtractTest, EmptySignalIsExtractionError) {
  EXPECT_THROW(FeatureExtractor(FeatureConfig{}).Extract({}), ExtractionError);
}

}  // namespace
}  // namespace fluency
