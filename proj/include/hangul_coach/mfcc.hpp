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

// MFCC front end:
//
//   pre-emphasis -> Hamming-windowed frames -> |FFT|^2 / N
//     -> triangular mel filterbank -> ln(max(e, floor)) -> orthonormal DCT-II
//     -> optional cepstral mean normalization
//
// Everything is double precision.

#ifndef HANGUL_COACH_MFCC_HPP
#define HANGUL_COACH_MFCC_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hangul_coach/audio.hpp"

namespace hangul_coach {

struct MfccConfig {
  std::size_t frame_len = 400;  // 25 ms at 16 kHz
  std::size_t hop = 160;        // 10 ms
  std::size_t fft_size = 512;
  std::size_t n_mels = 26;
  std::size_t n_coeffs = 13;
  double pre_emphasis = 0.97;
  double fmin = 0.0;
  std::optional<double> fmax;  // sample_rate / 2 when unset
  double log_floor = 1e-10;
  bool apply_cmn = true;

  double upper_frequency(int sample_rate) const {
    return fmax.value_or(sample_rate / 2.0);
  }
  /// Throws Error{InvalidConfig} when an invariant does not hold.
  void validate(int sample_rate) const;
};

/// Overrides defaults with whatever keys the JSON object carries.
MfccConfig parse_mfcc_config(std::string_view json_text);

/// Row-major frames x coeffs.
class MfccMatrix {
 public:
  MfccMatrix() = default;
  MfccMatrix(std::size_t frames, std::size_t coeffs, double frame_hop_seconds);

  std::size_t frames() const { return frames_; }
  std::size_t coeffs() const { return coeffs_; }
  double frame_hop_seconds() const { return hop_seconds_; }

  double& at(std::size_t frame, std::size_t coeff) { return values_[frame * coeffs_ + coeff]; }
  double at(std::size_t frame, std::size_t coeff) const { return values_[frame * coeffs_ + coeff]; }
  std::span<double> row(std::size_t frame) { return {values_.data() + frame * coeffs_, coeffs_}; }
  std::span<const double> row(std::size_t frame) const {
    return {values_.data() + frame * coeffs_, coeffs_};
  }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool operator==(const MfccMatrix&) const = default;

 private:
  std::size_t frames_ = 0;
  std::size_t coeffs_ = 0;
  double hop_seconds_ = 0.0;
  std::vector<double> values_;
};

// Pipeline stages, exposed individually.

std::vector<double> pre_emphasize(std::span<const double> samples, double alpha);

/// Number of full frames: 1 + (len - frame_len) / hop, or 0 if len < frame_len.
std::size_t frame_count(std::size_t len, std::size_t frame_len, std::size_t hop);

std::vector<double> hamming_window(std::size_t frame_len);

/// Full frames at offsets 0, hop, 2*hop, ... each multiplied by the Hamming
/// window. Throws Error{ClipTooShort}.
std::vector<std::vector<double>> frame_and_window(std::span<const double> samples,
                                                  std::size_t frame_len, std::size_t hop);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// n_mels x (fft_size / 2 + 1), row-major, triangular filters between
/// break points equally spaced in mel and snapped to the nearest FFT bin.
/// Throws Error{DegenerateFilter} when two break points share a bin.
struct MelFilterbank {
  std::size_t n_mels = 0;
  std::size_t n_bins = 0;
  std::vector<double> weights;
  /// Break points in bins; n_mels + 2 entries.
  std::vector<std::size_t> break_bins;

  double weight(std::size_t filter, std::size_t bin) const { return weights[filter * n_bins + bin]; }
  std::vector<double> apply(std::span<const double> power) const;
};

MelFilterbank mel_filterbank(std::size_t n_mels, std::size_t fft_size, int sample_rate,
                             double fmin, double fmax);

/// Orthonormal DCT-II of the whole vector.
std::vector<double> dct2_ortho(std::span<const double> x);
/// Inverse of dct2_ortho (orthonormal DCT-III).
std::vector<double> idct2_ortho(std::span<const double> c);

/// Precomputes the filterbank and DCT basis for one (config, rate) pair.
/// Immutable after construction; safe to share across threads.
class MfccExtractor {
 public:
  MfccExtractor(MfccConfig config, int sample_rate = kCanonicalSampleRate);

  const MfccConfig& config() const { return config_; }
  int sample_rate() const { return sample_rate_; }
  const MelFilterbank& filterbank() const { return filterbank_; }

  /// Throws Error{ClipTooShort} or Error{InvalidArgument} on a rate mismatch.
  MfccMatrix compute(const AudioClip& clip) const;

 private:
  MfccConfig config_;
  int sample_rate_;
  MelFilterbank filterbank_;
  std::vector<double> window_;
  std::vector<double> dct_basis_;  // n_coeffs x n_mels
};

MfccMatrix mfcc(const AudioClip& clip, const MfccConfig& config = {});

/// Truncates to, or zero-pads at the end up to, target_frames.
MfccMatrix fit_frames(const MfccMatrix& m, std::size_t target_frames);

/// CSV dump: "# frames=T coeffs=C hop_s=H" then one comma-separated row
/// per frame. Values use the shortest round-trip decimal form.
std::string to_csv(const MfccMatrix& m);

}  // namespace hangul_coach

#endif  // HANGUL_COACH_MFCC_HPP
