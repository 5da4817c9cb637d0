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

#ifndef HANGUL_COACH_ERROR_HPP
#define HANGUL_COACH_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace hangul_coach {

/// Every domain failure carries one of these codes. The names are stable and
/// appear verbatim in CLI messages and service error bodies.
enum class Errc {
  // audio
  MalformedContainer,
  UnsupportedFormat,
  EmptyAudio,
  // dsp
  ClipTooShort,
  DegenerateFilter,
  InvalidConfig,
  // hangul
  NotHangulSyllable,
  IndexOutOfRange,
  UnsupportedCharacter,
  ScriptMismatch,
  // siamese
  ShapeMismatch,
  NonFiniteLoss,
  BadMagic,
  UnsupportedVersion,
  TruncatedFile,
  // stt
  NoSpeechRecognized,
  BackendUnavailable,
  AuthFailure,
  FingerprintUnknown,
  // scoring
  OutOfRange,
  EmptyPopulation,
  StorageFailure,
  // corpus
  MissingManifest,
  MissingAudio,
  DuplicateId,
  // service / generic
  UnknownSentence,
  InvalidArgument,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace hangul_coach

#endif  // HANGUL_COACH_ERROR_HPP
