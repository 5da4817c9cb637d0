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

#include "hangul_coach/mfcc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "hangul_coach/error.hpp"
#include "hangul_coach/fft.hpp"
#include "json.hpp"

namespace hangul_coach {
namespace {

double dct_scale(std::size_t j, std::size_t n) {
  return j == 0 ? std::sqrt(1.0 / static_cast<double>(n)) : std::sqrt(2.0 / static_cast<double>(n));
}

double dct_cos(std::size_t j, std::size_t i, std::size_t n) {
  return std::cos(std::numbers::pi * static_cast<double>(j) * static_cast<double>(2 * i + 1) /
                  static_cast<double>(2 * n));
}

void append_double(std::string& out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

}  // namespace

void MfccConfig::validate(int sample_rate) const {
  auto fail = [](const std::string& why) { throw Error(Errc::InvalidConfig, why); };
  if (sample_rate <= 0) fail("sample rate must be positive");
  if (frame_len == 0 || hop == 0) fail("frame_len and hop must be positive");
  if (!is_power_of_two(fft_size)) fail("fft_size must be a power of two");
  if (fft_size < frame_len) fail("fft_size must be >= frame_len");
  if (n_coeffs == 0 || n_coeffs > n_mels) fail("need 0 < n_coeffs <= n_mels");
  if (!(pre_emphasis >= 0.0 && pre_emphasis < 1.0)) fail("pre_emphasis must lie in [0, 1)");
  if (!(log_floor > 0.0)) fail("log_floor must be positive");
  const double top = upper_frequency(sample_rate);
  if (!(fmin >= 0.0 && fmin < top && top <= sample_rate / 2.0)) {
    fail("need 0 <= fmin < fmax <= sample_rate / 2");
  }
}

MfccConfig parse_mfcc_config(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, e.what());
  }
  if (!j.is_object()) throw Error(Errc::InvalidConfig, "MFCC config must be a JSON object");

  MfccConfig c;
  try {
    c.frame_len = j.value("frame_len", c.frame_len);
    c.hop = j.value("hop", c.hop);
    c.fft_size = j.value("fft_size", c.fft_size);
    c.n_mels = j.value("n_mels", c.n_mels);
    c.n_coeffs = j.value("n_coeffs", c.n_coeffs);
    c.pre_emphasis = j.value("pre_emphasis", c.pre_emphasis);
    c.fmin = j.value("fmin", c.fmin);
    if (j.contains("fmax") && !j["fmax"].is_null()) c.fmax = j["fmax"].get<double>();
    c.log_floor = j.value("log_floor", c.log_floor);
    c.apply_cmn = j.value("apply_cmn", c.apply_cmn);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, e.what());
  }
  return c;
}

MfccMatrix::MfccMatrix(std::size_t frames, std::size_t coeffs, double frame_hop_seconds)
    : frames_(frames), coeffs_(coeffs), hop_seconds_(frame_hop_seconds), values_(frames * coeffs) {}

std::vector<double> pre_emphasize(std::span<const double> samples, double alpha) {
  std::vector<double> out(samples.size());
  if (samples.empty()) return out;
  out[0] = samples[0];
  for (std::size_t n = 1; n < samples.size(); ++n) out[n] = samples[n] - alpha * samples[n - 1];
  return out;
}

std::size_t frame_count(std::size_t len, std::size_t frame_len, std::size_t hop) {
  if (len < frame_len) return 0;
  return 1 + (len - frame_len) / hop;
}

std::vector<double> hamming_window(std::size_t frame_len) {
  std::vector<double> w(frame_len, 1.0);
  if (frame_len == 1) return w;
  const double denom = static_cast<double>(frame_len - 1);
  for (std::size_t n = 0; n < frame_len; ++n) {
    w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / denom);
  }
  return w;
}

std::vector<std::vector<double>> frame_and_window(std::span<const double> samples,
                                                  std::size_t frame_len, std::size_t hop) {
  if (frame_len == 0 || hop == 0) throw Error(Errc::InvalidArgument, "frame_len and hop must be positive");
  const std::size_t count = frame_count(samples.size(), frame_len, hop);
  if (count == 0) {
    throw Error(Errc::ClipTooShort, std::to_string(samples.size()) + " samples, need at least " +
                                        std::to_string(frame_len));
  }
  const std::vector<double> window = hamming_window(frame_len);
  std::vector<std::vector<double>> frames(count, std::vector<double>(frame_len));
  for (std::size_t f = 0; f < count; ++f) {
    const std::size_t offset = f * hop;
    for (std::size_t n = 0; n < frame_len; ++n) frames[f][n] = samples[offset + n] * window[n];
  }
  return frames;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> MelFilterbank::apply(std::span<const double> power) const {
  std::vector<double> energies(n_mels, 0.0);
  for (std::size_t m = 0; m < n_mels; ++m) {
    // Only the support [left, right] is nonzero.
    double acc = 0.0;
    for (std::size_t k = break_bins[m]; k <= break_bins[m + 2]; ++k) acc += weight(m, k) * power[k];
    energies[m] = acc;
  }
  return energies;
}

MelFilterbank mel_filterbank(std::size_t n_mels, std::size_t fft_size, int sample_rate,
                             double fmin, double fmax) {
  MelFilterbank fb;
  fb.n_mels = n_mels;
  fb.n_bins = fft_size / 2 + 1;
  fb.weights.assign(n_mels * fb.n_bins, 0.0);

  const double mel_lo = hz_to_mel(fmin);
  const double mel_hi = hz_to_mel(fmax);
  const double bin_per_hz = static_cast<double>(fft_size) / sample_rate;
  fb.break_bins.resize(n_mels + 2);
  for (std::size_t i = 0; i < n_mels + 2; ++i) {
    const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / static_cast<double>(n_mels + 1);
    const double bin = std::round(mel_to_hz(mel) * bin_per_hz);
    fb.break_bins[i] = std::min(static_cast<std::size_t>(bin), fb.n_bins - 1);
  }
  for (std::size_t i = 1; i < fb.break_bins.size(); ++i) {
    if (fb.break_bins[i] <= fb.break_bins[i - 1]) {
      throw Error(Errc::DegenerateFilter,
                  "break points " + std::to_string(i - 1) + " and " + std::to_string(i) +
                      " share FFT bin " + std::to_string(fb.break_bins[i]) +
                      "; fft_size too small for n_mels");
    }
  }

  for (std::size_t m = 0; m < n_mels; ++m) {
    const std::size_t left = fb.break_bins[m];
    const std::size_t center = fb.break_bins[m + 1];
    const std::size_t right = fb.break_bins[m + 2];
    for (std::size_t k = left; k <= center; ++k) {
      fb.weights[m * fb.n_bins + k] =
          static_cast<double>(k - left) / static_cast<double>(center - left);
    }
    for (std::size_t k = center; k <= right; ++k) {
      fb.weights[m * fb.n_bins + k] =
          static_cast<double>(right - k) / static_cast<double>(right - center);
    }
  }
  return fb;
}

std::vector<double> dct2_ortho(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) throw Error(Errc::InvalidArgument, "DCT of an empty vector");
  std::vector<double> c(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * dct_cos(j, i, n);
    c[j] = dct_scale(j, n) * acc;
  }
  return c;
}

std::vector<double> idct2_ortho(std::span<const double> c) {
  const std::size_t n = c.size();
  if (n == 0) throw Error(Errc::InvalidArgument, "DCT of an empty vector");
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += dct_scale(j, n) * c[j] * dct_cos(j, i, n);
    x[i] = acc;
  }
  return x;
}

MfccExtractor::MfccExtractor(MfccConfig config, int sample_rate)
    : config_(std::move(config)), sample_rate_(sample_rate) {
  config_.validate(sample_rate_);
  filterbank_ = mel_filterbank(config_.n_mels, config_.fft_size, sample_rate_, config_.fmin,
                               config_.upper_frequency(sample_rate_));
  window_ = hamming_window(config_.frame_len);
  dct_basis_.resize(config_.n_coeffs * config_.n_mels);
  for (std::size_t j = 0; j < config_.n_coeffs; ++j) {
    for (std::size_t i = 0; i < config_.n_mels; ++i) {
      dct_basis_[j * config_.n_mels + i] = dct_scale(j, config_.n_mels) * dct_cos(j, i, config_.n_mels);
    }
  }
}

MfccMatrix MfccExtractor::compute(const AudioClip& clip) const {
  if (clip.sample_rate != sample_rate_) {
    throw Error(Errc::InvalidArgument, "clip rate " + std::to_string(clip.sample_rate) +
                                           " Hz does not match extractor rate " +
                                           std::to_string(sample_rate_) + " Hz");
  }
  const std::vector<double> emphasized = pre_emphasize(clip.samples, config_.pre_emphasis);
  const std::size_t n_frames = frame_count(emphasized.size(), config_.frame_len, config_.hop);
  if (n_frames == 0) {
    throw Error(Errc::ClipTooShort, std::to_string(emphasized.size()) +
                                        " samples, need at least " + std::to_string(config_.frame_len));
  }

  MfccMatrix out(n_frames, config_.n_coeffs,
                 static_cast<double>(config_.hop) / static_cast<double>(sample_rate_));
  std::vector<double> frame(config_.frame_len);
  std::vector<double> log_energy(config_.n_mels);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const std::size_t offset = f * config_.hop;
    for (std::size_t n = 0; n < config_.frame_len; ++n) frame[n] = emphasized[offset + n] * window_[n];
    const std::vector<double> power = power_spectrum(frame, config_.fft_size);
    const std::vector<double> energies = filterbank_.apply(power);
    for (std::size_t m = 0; m < config_.n_mels; ++m) {
      log_energy[m] = std::log(std::max(energies[m], config_.log_floor));
    }
    for (std::size_t j = 0; j < config_.n_coeffs; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < config_.n_mels; ++i) acc += dct_basis_[j * config_.n_mels + i] * log_energy[i];
      out.at(f, j) = acc;
    }
  }

  if (config_.apply_cmn) {
    for (std::size_t j = 0; j < config_.n_coeffs; ++j) {
      double mean = 0.0;
      for (std::size_t f = 0; f < n_frames; ++f) mean += out.at(f, j);
      mean /= static_cast<double>(n_frames);
      for (std::size_t f = 0; f < n_frames; ++f) out.at(f, j) -= mean;
    }
  }
  return out;
}

MfccMatrix mfcc(const AudioClip& clip, const MfccConfig& config) {
  return MfccExtractor(config, clip.sample_rate).compute(clip);
}

MfccMatrix fit_frames(const MfccMatrix& m, std::size_t target_frames) {
  if (target_frames == 0) throw Error(Errc::InvalidArgument, "target_frames must be positive");
  MfccMatrix out(target_frames, m.coeffs(), m.frame_hop_seconds());
  const std::size_t keep = std::min(target_frames, m.frames());
  for (std::size_t f = 0; f < keep; ++f) {
    std::copy(m.row(f).begin(), m.row(f).end(), out.row(f).begin());
  }
  return out;
}

std::string to_csv(const MfccMatrix& m) {
  std::string out = "# frames=" + std::to_string(m.frames()) + " coeffs=" + std::to_string(m.coeffs()) +
                    " hop_s=";
  append_double(out, m.frame_hop_seconds());
  out += '\n';
  for (std::size_t f = 0; f < m.frames(); ++f) {
    for (std::size_t c = 0; c < m.coeffs(); ++c) {
      if (c) out += ',';
      append_double(out, m.at(f, c));
    }
    out += '\n';
  }
  return out;
}

}  // namespace hangul_coach
