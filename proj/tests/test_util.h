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

#ifndef FLUENCY_TESTS_TEST_UTIL_H_
#define FLUENCY_TESTS_TEST_UTIL_H_

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <unistd.h>
#include <sstream>
#include <string>
#include <vector>

#include "fluency/matrix.h"
#include "fluency/rng.h"

namespace fluency::testing {

inline std::vector<float> Sine(double freq, double amplitude, int sample_rate,
                               size_t n, double phase = 0.0) {
  std::vector<float> out(n);
  for (size_t i = 0; i < n; ++i) {
    out[i] = static_cast<float>(
        amplitude * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) /
                                 sample_rate +
                             phase));
  }
  return out;
}

// O(n^2) DFT straight from the definition.
inline std::vector<std::complex<double>> BruteDft(
    const std::vector<std::complex<double>>& x) {
  const size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (size_t t = 0; t < n; ++t) {
      const double angle = -2.0 * std::numbers::pi *
                           static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += x[t] * std::polar(1.0, angle);
    }
    out[k] = acc;
  }
  return out;
}

// Isotropic Gaussian blobs, `per_class` points around each center.
struct Blobs {
  Matrix x;
  std::vector<int> y;
};

inline Blobs MakeBlobs(const std::vector<std::vector<double>>& centers, double sigma,
                       int per_class, uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  const size_t d = centers.front().size();
  Blobs b;
  b.x = Matrix(centers.size() * static_cast<size_t>(per_class), d);
  size_t r = 0;
  for (size_t c = 0; c < centers.size(); ++c) {
    for (int i = 0; i < per_class; ++i, ++r) {
      for (size_t j = 0; j < d; ++j) b.x(r, j) = centers[c][j] + normal(engine);
      b.y.push_back(static_cast<int>(c));
    }
  }
  return b;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("fluency_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace fluency::testing

#endif  // FLUENCY_TESTS_TEST_UTIL_H_
