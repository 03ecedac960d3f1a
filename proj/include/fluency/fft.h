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

#ifndef FLUENCY_FFT_H_
#define FLUENCY_FFT_H_

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace fluency {

using Complex = std::complex<double>;

// Forward DFT plan of a fixed size, X[k] = sum_n x[n] exp(-2 pi i k n / N).
// Powers of two use an iterative radix-2 transform; other sizes go through
// Bluestein's chirp-z algorithm on a padded power-of-two plan. Plans are
// immutable after construction and may be shared across threads.
class Fft {
 public:
  explicit Fft(size_t n);
  ~Fft();
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;

  size_t size() const { return n_; }

  // In-place forward transform; data.size() must equal size().
  void Forward(std::span<Complex> data) const;

 private:
  void Radix2(std::span<Complex> data) const;

  size_t n_;
  bool pow2_;
  std::vector<size_t> bitrev_;
  std::vector<Complex> twiddles_;  // exp(-2 pi i k / n), k < n/2

  // Bluestein state (non power-of-two sizes only).
  std::vector<Complex> chirp_;           // exp(-i pi k^2 / n)
  std::vector<Complex> chirp_filter_fft_;
  std::unique_ptr<Fft> inner_;
};

// Real-input transform returning bins 0..n/2. Even power-of-two sizes pack
// the input into an n/2-point complex transform.
class RealFft {
 public:
  explicit RealFft(size_t n);

  size_t size() const { return n_; }
  size_t num_bins() const { return n_ / 2 + 1; }

  // input.size() == size(), output.size() == num_bins().
  void Forward(std::span<const double> input, std::span<Complex> output) const;

 private:
  size_t n_;
  bool packed_;
  Fft fft_;
  std::vector<Complex> twiddles_;  // exp(-2 pi i k / n), k <= n/2
};

bool IsPowerOfTwo(size_t n);

}  // namespace fluency

#endif  // FLUENCY_FFT_H_
