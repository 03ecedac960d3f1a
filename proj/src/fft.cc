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

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fluency {
namespace {

Complex Twiddle(size_t k, size_t n) {
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

size_t NextPowerOfTwo(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

bool IsPowerOfTwo(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Fft::Fft(size_t n) : n_(n), pow2_(IsPowerOfTwo(n)) {
  if (n == 0) throw std::invalid_argument("FFT size must be positive");
  if (pow2_) {
    bitrev_.resize(n);
    size_t bits = 0;
    while ((size_t{1} << bits) < n) ++bits;
    for (size_t i = 0; i < n; ++i) {
      size_t r = 0;
      for (size_t b = 0; b < bits; ++b) {
        if (i & (size_t{1} << b)) r |= size_t{1} << (bits - 1 - b);
      }
      bitrev_[i] = r;
    }
    twiddles_.resize(n / 2);
    for (size_t k = 0; k < n / 2; ++k) twiddles_[k] = Twiddle(k, n);
    return;
  }

  // Bluestein: X[k] = w[k] * sum_j (x[j] w[j]) conj(w[k - j]),
  // w[k] = exp(-i pi k^2 / n). k^2 is reduced mod 2n to keep the angle exact.
  const size_t m = NextPowerOfTwo(2 * n - 1);
  inner_ = std::make_unique<Fft>(m);
  chirp_.resize(n);
  for (size_t k = 0; k < n; ++k) {
    const size_t k2 = (k * k) % (2 * n);
    const double angle =
        -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp_[k] = {std::cos(angle), std::sin(angle)};
  }
  chirp_filter_fft_.assign(m, Complex(0.0, 0.0));
  chirp_filter_fft_[0] = std::conj(chirp_[0]);
  for (size_t k = 1; k < n; ++k) {
    chirp_filter_fft_[k] = std::conj(chirp_[k]);
    chirp_filter_fft_[m - k] = std::conj(chirp_[k]);
  }
  inner_->Forward(chirp_filter_fft_);
}

Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

void Fft::Radix2(std::span<Complex> data) const {
  const size_t n = data.size();
  for (size_t i = 0; i < n; ++i) {
    if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t half = len / 2;
    const size_t stride = n / len;
    for (size_t start = 0; start < n; start += len) {
      for (size_t j = 0; j < half; ++j) {
        const Complex t = twiddles_[j * stride] * data[start + j + half];
        const Complex u = data[start + j];
        data[start + j] = u + t;
        data[start + j + half] = u - t;
      }
    }
  }
}

void Fft::Forward(std::span<Complex> data) const {
  if (data.size() != n_) throw std::invalid_argument("FFT size mismatch");
  if (pow2_) {
    Radix2(data);
    return;
  }
  const size_t m = inner_->size();
  std::vector<Complex> work(m, Complex(0.0, 0.0));
  for (size_t k = 0; k < n_; ++k) work[k] = data[k] * chirp_[k];
  inner_->Forward(work);
  for (size_t k = 0; k < m; ++k) work[k] *= chirp_filter_fft_[k];
  // Inverse transform via conjugation.
  for (auto& v : work) v = std::conj(v);
  inner_->Forward(work);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (size_t k = 0; k < n_; ++k) {
    data[k] = std::conj(work[k]) * inv_m * chirp_[k];
  }
}

RealFft::RealFft(size_t n)
    : n_(n),
      packed_(n >= 4 && IsPowerOfTwo(n)),
      fft_(packed_ ? n / 2 : n) {
  if (packed_) {
    twiddles_.resize(n / 2 + 1);
    for (size_t k = 0; k <= n / 2; ++k) twiddles_[k] = Twiddle(k, n);
  }
}

void RealFft::Forward(std::span<const double> input,
                      std::span<Complex> output) const {
  if (input.size() != n_ || output.size() != num_bins()) {
    throw std::invalid_argument("RealFft size mismatch");
  }
  if (!packed_) {
    std::vector<Complex> work(input.begin(), input.end());
    fft_.Forward(work);
    for (size_t k = 0; k < num_bins(); ++k) output[k] = work[k];
    return;
  }
  // z[j] = x[2j] + i x[2j+1]; the even/odd spectra are separated from Z.
  const size_t half = n_ / 2;
  std::vector<Complex> z(half);
  for (size_t j = 0; j < half; ++j) z[j] = {input[2 * j], input[2 * j + 1]};
  fft_.Forward(z);
  for (size_t k = 0; k <= half; ++k) {
    const Complex zk = z[k % half];
    const Complex zr = std::conj(z[(half - k) % half]);
    const Complex even = 0.5 * (zk + zr);
    const Complex odd = Complex(0.0, -0.5) * (zk - zr);
    output[k] = even + twiddles_[k] * odd;
  }
}

}  // namespace fluency
