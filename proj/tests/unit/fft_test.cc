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

#include "fluency/fft.h"

#include <random>

#include <gtest/gtest.h>

#include "fluency/features.h"
#include "test_util.h"

namespace fluency {
namespace {

using testing::BruteDft;

double MaxRelativeError(const std::vector<Complex>& got, const std::vector<Complex>& want) {
  double err = 0.0;
  double scale = 0.0;
  for (size_t k = 0; k < want.size(); ++k) {
    err = std::max(err, std::abs(got[k] - want[k]));
    scale = std::max(scale, std::abs(want[k]));
  }
  return err / std::max(scale, 1e-300);
}

TEST(FftTest, MatchesBruteForceDftOnRandomSignals) {
  std::mt19937_64 engine(1234);
  std::uniform_int_distribution<size_t> length(1, 512);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = length(engine);
    std::vector<Complex> x(n);
    for (auto& v : x) v = {value(engine), value(engine)};
    std::vector<Complex> got = x;
    Fft(n).Forward(got);
    EXPECT_LT(MaxRelativeError(got, BruteDft(x)), 1e-6) << "n=" << n;

    double time_energy = 0.0;
    double freq_energy = 0.0;
    for (size_t i = 0; i < n; ++i) {
      time_energy += std::norm(x[i]);
      freq_energy += std::norm(got[i]);
    }
    EXPECT_NEAR(freq_energy / static_cast<double>(n) / time_energy, 1.0, 1e-6);
  }
}

TEST(FftTest, PowersOfTwoAndOddSizes) {
  for (size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 12u, 64u, 97u, 100u, 256u, 2048u}) {
    std::vector<Complex> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = {std::cos(0.3 * i), std::sin(1.7 * i)};
    std::vector<Complex> got = x;
    Fft(n).Forward(got);
    EXPECT_LT(MaxRelativeError(got, BruteDft(x)), 1e-9) << "n=" << n;
  }
}

TEST(RealFftTest, AgreesWithComplexTransform) {
  std::mt19937_64 engine(99);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  for (size_t n : {1u, 2u, 4u, 6u, 15u, 16u, 128u, 300u, 2048u}) {
    std::vector<double> x(n);
    for (double& v : x) v = value(engine);
    std::vector<Complex> full(x.begin(), x.end());
    const auto want = BruteDft(full);
    RealFft plan(n);
    std::vector<Complex> got(plan.num_bins());
    plan.Forward(x, got);
    for (size_t k = 0; k < plan.num_bins(); ++k) {
      EXPECT_NEAR(std::abs(got[k] - want[k]), 0.0, 1e-9 * static_cast<double>(n))
          << "n=" << n << " k=" << k;
    }
  }
}

TEST(FftTest, ImpulseHasFlatSpectrum) {
  std::vector<Complex> x(64, 0.0);
  x[0] = 1.0;
  Fft(64).Forward(x);
  for (const Complex& v : x) EXPECT_NEAR(std::abs(v - Complex(1.0, 0.0)), 0.0, 1e-12);
}

TEST(DctTest, OrthonormalRoundTrip) {
  std::mt19937_64 engine(7);
  std::uniform_real_distribution<double> value(-50.0, 50.0);
  for (size_t n : {1u, 2u, 4u, 13u, 128u}) {
    std::vector<double> x(n);
    for (double& v : x) v = value(engine);
    const std::vector<double> y = DctOrtho(x);
    // Transpose of the orthonormal DCT-II matrix, applied directly.
    for (size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (size_t k = 0; k < n; ++k) {
        const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        acc += scale * y[k] *
               std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * i + 1.0) /
                        (2.0 * n));
      }
      EXPECT_NEAR(acc, x[i], 1e-9);
    }
  }
}

TEST(DctTest, ConstantVectorConcentratesInFirstCoefficient) {
  const std::vector<double> y = DctOrtho(std::vector<double>{1.0, 1.0, 1.0, 1.0});
  ASSERT_EQ(y.size(), 4u);
  EXPECT_NEAR(y[0], 2.0, 1e-12);
  for (size_t k = 1; k < 4; ++k) EXPECT_NEAR(y[k], 0.0, 1e-12);
}

}  // namespace
}  // namespace fluency
