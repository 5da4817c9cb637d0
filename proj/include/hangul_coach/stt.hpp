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

#ifndef HANGUL_COACH_STT_HPP
#define HANGUL_COACH_STT_HPP

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "hangul_coach/audio.hpp"

namespace hangul_coach {

/// Environment variable consulted for the Google API key.
inline constexpr const char* kSttKeyEnv = "HANGUL_COACH_STT_KEY";

enum class SttBackend { Mock, Google };

struct SttConfig {
  SttBackend backend = SttBackend::Mock;
  std::string language_code = "ko-KR";
  std::string model_name = "latest_short";
  std::string api_key;  // google only; never logged
  double timeout_seconds = 10.0;
  std::filesystem::path mock_table_path;  // mock only
  /// Scheme and host of the recognize endpoint. Tests point this at a local
  /// server.
  std::string endpoint = "https://speech.googleapis.com";
};

/// Fills api_key from HANGUL_COACH_STT_KEY when the config leaves it empty.
SttConfig with_env_api_key(SttConfig config);

SttBackend parse_stt_backend(std::string_view name);

struct Transcript {
  std::string text;
  std::optional<double> confidence;
};

/// Longest clip accepted for synchronous recognition.
inline constexpr double kMaxUtteranceSeconds = 60.0;

class SttClient {
 public:
  virtual ~SttClient() = default;

  /// Checks the clip (non-empty, at most 60 s), brings it to 16 kHz and asks
  /// the backend for the top alternative. Throws Error{InvalidArgument} on a
  /// precondition failure before any backend call, otherwise Error{
  /// NoSpeechRecognized | BackendUnavailable | AuthFailure |
  /// FingerprintUnknown}.
  Transcript transcribe(const AudioClip& clip) const;

 protected:
  virtual Transcript recognize(const AudioClip& canonical_clip) const = 0;
};

/// Lowercase hex SHA-256 of the clip's 16-bit little-endian PCM bytes.
std::string pcm_fingerprint(const AudioClip& clip);

/// Looks clips up by fingerprint in a fixed table. Pure function of
/// (clip, table).
class MockSttClient final : public SttClient {
 public:
  explicit MockSttClient(std::map<std::string, std::string> table);
  /// Table file: JSON object, fingerprint -> transcript.
  static MockSttClient from_file(const std::filesystem::path& path);

  const std::map<std::string, std::string>& table() const { return table_; }

 protected:
  Transcript recognize(const AudioClip& clip) const override;

 private:
  std::map<std::string, std::string> table_;
};

/// speech:recognize over HTTPS with LINEAR16 audio.
class GoogleSttClient final : public SttClient {
 public:
  /// Throws Error{AuthFailure} when no API key is configured.
  explicit GoogleSttClient(SttConfig config);

  /// JSON body of the recognize request.
  static std::string build_request(const AudioClip& clip, const SttConfig& config);
  /// Top alternative of a recognize response.
  static Transcript parse_response(std::string_view body);

 protected:
  Transcript recognize(const AudioClip& clip) const override;

 private:
  SttConfig config_;
};

/// Throws Error{AuthFailure} (google without key) or the mock table's load
/// errors.
std::unique_ptr<SttClient> make_stt_client(const SttConfig& config);

}  // namespace hangul_coach

#endif  // HANGUL_COACH_STT_HPP
