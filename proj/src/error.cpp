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

#include "hangul_coach/error.hpp"

namespace hangul_coach {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedContainer: return "MalformedContainer";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::EmptyAudio: return "EmptyAudio";
    case Errc::ClipTooShort: return "ClipTooShort";
    case Errc::DegenerateFilter: return "DegenerateFilter";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::NotHangulSyllable: return "NotHangulSyllable";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::UnsupportedCharacter: return "UnsupportedCharacter";
    case Errc::ScriptMismatch: return "ScriptMismatch";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
    case Errc::BadMagic: return "BadMagic";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::TruncatedFile: return "TruncatedFile";
    case Errc::NoSpeechRecognized: return "NoSpeechRecognized";
    case Errc::BackendUnavailable: return "BackendUnavailable";
    case Errc::AuthFailure: return "AuthFailure";
    case Errc::FingerprintUnknown: return "FingerprintUnknown";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::EmptyPopulation: return "EmptyPopulation";
    case Errc::StorageFailure: return "StorageFailure";
    case Errc::MissingManifest: return "MissingManifest";
    case Errc::MissingAudio: return "MissingAudio";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::UnknownSentence: return "UnknownSentence";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace hangul_coach
