// Copyright 2026 The Hangul Coach Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hangul_coach/fft.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "hangul_coach/error.hpp"

namespace hangul_coach {

void fft_inplace(std::span<std::complex<double>> data) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) {
    throw Error(Errc::InvalidArgument, "FFT length must be a power of two");
  }

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const double theta = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t k = 0; k < half; ++k) {
      // Twiddles from cos/sin directly rather than by repeated rotation, so
      // the error does not grow with k.
      const std::complex<double> w(std::cos(theta * static_cast<double>(k)),
                                   std::sin(theta * static_cast<double>(k)));
      for (std::size_t start = 0; start < n; start += len) {
        const std::complex<double> even = data[start + k];
        const std::complex<double> odd = w * data[start + k + half];
        data[start + k] = even + odd;
        data[start + k + half] = even - odd;
      }
    }
  }
}

std::vector<double> power_spectrum(std::span<const double> frame, std::size_t fft_size) {
  if (frame.size() > fft_size) {
    throw Error(Errc::InvalidArgument, "frame longer than FFT size");
  }
  std::vector<std::complex<double>> buf(fft_size);
  for (std::size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i];
  fft_inplace(buf);

  std::vector<double> power(fft_size / 2 + 1);
  const double scale = 1.0 / static_cast<double>(fft_size);
  for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(buf[k]) * scale;
  return power;
}

}  // namespace hangul_coach
