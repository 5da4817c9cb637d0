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

#ifndef HANGUL_COACH_CORPUS_HPP
#define HANGUL_COACH_CORPUS_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hangul_coach/audio.hpp"
#include "hangul_coach/mfcc.hpp"

namespace hangul_coach {

/// Resample to 16 kHz, peak-normalize, MFCC, fit to the network's 200
/// frames. Both answers and learner uploads go through this.
MfccMatrix acoustic_features(const AudioClip& clip, const MfccExtractor& extractor);

struct ReferenceEntry {
  std::string sentence_id;
  std::string text;
  std::filesystem::path answer_audio_path;
  MfccMatrix answer_mfcc;  // 200 x 13
};

/// Immutable after loading.
class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(std::vector<ReferenceEntry> entries);

  const std::vector<ReferenceEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  /// nullptr when absent.
  const ReferenceEntry* find(std::string_view sentence_id) const;

 private:
  std::vector<ReferenceEntry> entries_;
};

inline constexpr const char* kCatalogManifest = "sentences.json";

/// Reads `<directory>/sentences.json`, an array of
/// {"sentence_id", "text", "audio"} with audio relative to the directory.
/// Throws Error{MissingManifest | MissingAudio | DuplicateId | InvalidConfig}
/// or the audio/DSP/tokenizer error of the offending entry.
Catalog load_catalog(const std::filesystem::path& directory, const MfccExtractor& extractor);
Catalog load_catalog(const std::filesystem::path& directory);

}  // namespace hangul_coach

#endif  // HANGUL_COACH_CORPUS_HPP
