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

#ifndef HANGUL_COACH_AUDIO_HPP
#define HANGUL_COACH_AUDIO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hangul_coach {

/// Every pipeline stage after ingestion works at this rate, mono.
inline constexpr int kCanonicalSampleRate = 16000;

/// Mono PCM speech. Samples are in [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = kCanonicalSampleRate;

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  bool operator==(const AudioClip&) const = default;
};

/// Parses a RIFF/WAVE container holding 16-bit PCM, mono or stereo.
/// Stereo is averaged down to mono; integers are scaled by 1/32768.
/// Throws Error{MalformedContainer | UnsupportedFormat | EmptyAudio}.
AudioClip load_wav(std::span<const std::uint8_t> bytes);
AudioClip load_wav(std::string_view bytes);
AudioClip load_wav_file(const std::filesystem::path& path);

/// 16-bit little-endian PCM of the clip, one value per sample. Values are
/// rounded to nearest and clamped to the int16 range. This is the byte
/// stream sent to speech backends and hashed for mock fingerprints.
std::vector<std::uint8_t> to_pcm16(const AudioClip& clip);

/// Canonical 44-byte-header mono WAV.
std::vector<std::uint8_t> encode_wav(const AudioClip& clip);
void write_wav_file(const std::filesystem::path& path, const AudioClip& clip);

/// Linear interpolation; output length is round(len * target / source) and
/// positions past the last input sample clamp to it.
AudioClip resample(const AudioClip& clip, int target_rate);

/// Scales so the peak magnitude is 0.95. Silence is returned unchanged.
AudioClip normalize_peak(const AudioClip& clip);

/// resample to the canonical rate followed by normalize_peak.
AudioClip canonicalize(const AudioClip& clip);

}  // namespace hangul_coach

#endif  // HANGUL_COACH_AUDIO_HPP
