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

#include "hangul_coach/corpus.hpp"

#include <fstream>
#include <set>

#include "hangul_coach/error.hpp"
#include "hangul_coach/hangul.hpp"
#include "hangul_coach/siamese.hpp"
#include "json.hpp"

namespace hangul_coach {

MfccMatrix acoustic_features(const AudioClip& clip, const MfccExtractor& extractor) {
  return fit_frames(extractor.compute(canonicalize(clip)), net::kInputFrames);
}

Catalog::Catalog(std::vector<ReferenceEntry> entries) : entries_(std::move(entries)) {}

const ReferenceEntry* Catalog::find(std::string_view sentence_id) const {
  for (const ReferenceEntry& e : entries_) {
    if (e.sentence_id == sentence_id) return &e;
  }
  return nullptr;
}

Catalog load_catalog(const std::filesystem::path& directory, const MfccExtractor& extractor) {
  const std::filesystem::path manifest = directory / kCatalogManifest;
  std::ifstream in(manifest);
  if (!in) throw Error(Errc::MissingManifest, "no " + manifest.string());

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, manifest.string() + ": " + e.what());
  }
  if (!j.is_array()) throw Error(Errc::InvalidConfig, manifest.string() + " must hold a JSON array");

  std::vector<ReferenceEntry> entries;
  std::set<std::string> seen;
  for (const nlohmann::json& item : j) {
    if (!item.is_object() || item.size() != 3 || !item.contains("sentence_id") ||
        !item.contains("text") || !item.contains("audio") || !item["sentence_id"].is_string() ||
        !item["text"].is_string() || !item["audio"].is_string()) {
      throw Error(Errc::InvalidConfig,
                  "catalog entries need exactly string fields sentence_id, text, audio");
    }
    ReferenceEntry entry;
    entry.sentence_id = item["sentence_id"].get<std::string>();
    entry.text = item["text"].get<std::string>();
    entry.answer_audio_path = directory / item["audio"].get<std::string>();
    if (!seen.insert(entry.sentence_id).second) throw Error(Errc::DuplicateId, entry.sentence_id);

    try {
      tokenize(entry.text);
    } catch (const Error& e) {
      throw Error(e.code(), entry.sentence_id + ": " + e.detail());
    }
    std::error_code ec;
    if (!std::filesystem::is_regular_file(entry.answer_audio_path, ec)) {
      throw Error(Errc::MissingAudio, entry.sentence_id);
    }
    try {
      entry.answer_mfcc = acoustic_features(load_wav_file(entry.answer_audio_path), extractor);
    } catch (const Error& e) {
      throw Error(e.code(), entry.sentence_id + ": " + e.detail());
    }
    entries.push_back(std::move(entry));
  }
  return Catalog(std::move(entries));
}

Catalog load_catalog(const std::filesystem::path& directory) {
  return load_catalog(directory, MfccExtractor(MfccConfig{}));
}

}  // namespace hangul_coach
