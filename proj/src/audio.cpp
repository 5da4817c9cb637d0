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

#include "hangul_coach/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>

#include "hangul_coach/error.hpp"

namespace hangul_coach {
namespace {

constexpr double kPcmScale = 32768.0;
constexpr double kPeakTarget = 0.95;

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 |
         static_cast<std::uint32_t>(b[at + 3]) << 24;
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FormatChunk {
  std::uint16_t format_code;
  std::uint16_t channels;
  std::uint32_t sample_rate;
  std::uint16_t block_align;
  std::uint16_t bits_per_sample;
};

}  // namespace

AudioClip load_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
    throw Error(Errc::MalformedContainer, "missing RIFF/WAVE header");
  }
  std::optional<FormatChunk> fmt;
  std::optional<std::span<const std::uint8_t>> data;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (tag_is(bytes, pos, "fmt ")) {
      if (size < 16 || body + size > bytes.size()) {
        throw Error(Errc::MalformedContainer, "truncated fmt chunk");
      }
      fmt = FormatChunk{read_u16(bytes, body), read_u16(bytes, body + 2),
                        read_u32(bytes, body + 4), read_u16(bytes, body + 12),
                        read_u16(bytes, body + 14)};
    } else if (tag_is(bytes, pos, "data")) {
      if (body + size > bytes.size()) {
        throw Error(Errc::MalformedContainer, "data chunk runs past end of file");
      }
      data = bytes.subspan(body, size);
    }
    // Chunks are word aligned.
    pos = body + size + (size & 1u);
  }
  if (!fmt) throw Error(Errc::MalformedContainer, "no fmt chunk");
  if (!data) throw Error(Errc::MalformedContainer, "no data chunk");

  if (fmt->format_code != 1) {
    throw Error(Errc::UnsupportedFormat,
                "format code " + std::to_string(fmt->format_code) + " is not PCM");
  }
  if (fmt->bits_per_sample != 16) {
    throw Error(Errc::UnsupportedFormat,
                std::to_string(fmt->bits_per_sample) + "-bit samples");
  }
  if (fmt->channels < 1 || fmt->channels > 2) {
    throw Error(Errc::UnsupportedFormat, std::to_string(fmt->channels) + " channels");
  }
  if (fmt->sample_rate == 0) {
    throw Error(Errc::UnsupportedFormat, "zero sample rate");
  }

  const std::size_t channels = fmt->channels;
  const std::size_t frame_bytes = 2 * channels;
  const std::size_t frames = data->size() / frame_bytes;
  if (frames == 0) throw Error(Errc::EmptyAudio, "no samples");

  AudioClip clip;
  clip.sample_rate = static_cast<int>(fmt->sample_rate);
  clip.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const auto raw = static_cast<std::int16_t>(read_u16(*data, i * frame_bytes + 2 * c));
      acc += raw / kPcmScale;
    }
    clip.samples[i] = acc / static_cast<double>(channels);
  }
  return clip;
}

AudioClip load_wav(std::string_view bytes) {
  return load_wav(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

AudioClip load_wav_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                        std::istreambuf_iterator<char>()};
  return load_wav(std::span<const std::uint8_t>(bytes));
}

std::vector<std::uint8_t> to_pcm16(const AudioClip& clip) {
  std::vector<std::uint8_t> out;
  out.reserve(clip.samples.size() * 2);
  for (double s : clip.samples) {
    const double scaled = std::clamp(std::round(s * kPcmScale), -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  return out;
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
  const std::vector<std::uint8_t> pcm = to_pcm16(clip);
  const auto data_size = static_cast<std::uint32_t>(pcm.size());
  const auto rate = static_cast<std::uint32_t>(clip.sample_rate);

  std::vector<std::uint8_t> out;
  out.reserve(44 + pcm.size());
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, 1);         // PCM
  put_u16(out, 1);         // mono
  put_u32(out, rate);
  put_u32(out, rate * 2);  // byte rate
  put_u16(out, 2);         // block align
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_size);
  out.insert(out.end(), pcm.begin(), pcm.end());
  return out;
}

void write_wav_file(const std::filesystem::path& path, const AudioClip& clip) {
  const std::vector<std::uint8_t> bytes = encode_wav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::IoError, "short write to " + path.string());
}

AudioClip resample(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0) {
    throw Error(Errc::InvalidArgument, "target rate must be positive");
  }
  if (target_rate == clip.sample_rate) return clip;

  const auto n_in = static_cast<std::int64_t>(clip.samples.size());
  // round(n * target / source) in exact integer arithmetic, half up.
  const std::int64_t n_out =
      (2 * n_in * target_rate + clip.sample_rate) / (2 * static_cast<std::int64_t>(clip.sample_rate));
  const double step = static_cast<double>(clip.sample_rate) / target_rate;

  AudioClip out;
  out.sample_rate = target_rate;
  out.samples.resize(static_cast<std::size_t>(n_out));
  if (n_in == 0) return out;
  for (std::int64_t i = 0; i < n_out; ++i) {
    const double t = static_cast<double>(i) * step;
    const auto left = std::min(static_cast<std::int64_t>(t), n_in - 1);
    const auto right = std::min(left + 1, n_in - 1);
    const double frac = t - static_cast<double>(left);
    const double a = clip.samples[static_cast<std::size_t>(left)];
    const double b = clip.samples[static_cast<std::size_t>(right)];
    out.samples[static_cast<std::size_t>(i)] = left == right ? a : a + frac * (b - a);
  }
  return out;
}

AudioClip normalize_peak(const AudioClip& clip) {
  double peak = 0.0;
  for (double s : clip.samples) peak = std::max(peak, std::abs(s));
  if (peak == 0.0 || peak == kPeakTarget) return clip;
  // (s / peak) * target keeps the peak exactly at target, which makes a
  // second application a no-op.
  AudioClip out = clip;
  for (double& s : out.samples) s = (s / peak) * kPeakTarget;
  return out;
}

AudioClip canonicalize(const AudioClip& clip) {
  return normalize_peak(resample(clip, kCanonicalSampleRate));
}

}  // namespace hangul_coach
