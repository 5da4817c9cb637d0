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

#ifndef HANGUL_COACH_FFT_HPP
#define HANGUL_COACH_FFT_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hangul_coach {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 decimation-in-time transform,
/// X[k] = sum_n x[n] exp(-2 pi i k n / N). N must be a power of two.
void fft_inplace(std::span<std::complex<double>> data);

/// One-sided power spectrum |X[k]|^2 / fft_size for k = 0..fft_size/2 of the
/// frame zero-padded to fft_size. Requires frame.size() <= fft_size.
std::vector<double> power_spectrum(std::span<const double> frame, std::size_t fft_size);

}  // namespace hangul_coach

#endif  // HANGUL_COACH_FFT_HPP
