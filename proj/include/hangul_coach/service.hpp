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

// HTTP assessment service.
//
//   POST /api/attempts       multipart: audio (WAV), user_id, sentence_id
//   GET  /api/sentences      [{sentence_id, text}]
//   GET  /api/leaderboard?n  [{user_id, sentence_id, similarity, level}]
//   GET  /api/health         {"status": "ok"}
//
// Errors come back as {"error", "code", "message"} with 400 (MalformedAudio,
// BadRequest), 404 (UnknownSentence), 422 (NoSpeechRecognized,
// UnalignableTranscript), 502 (SttUnavailable) or 500.

#ifndef HANGUL_COACH_SERVICE_HPP
#define HANGUL_COACH_SERVICE_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "hangul_coach/corpus.hpp"
#include "hangul_coach/error.hpp"
#include "hangul_coach/hangul.hpp"
#include "hangul_coach/mfcc.hpp"
#include "hangul_coach/scoring.hpp"
#include "hangul_coach/siamese.hpp"
#include "hangul_coach/stt.hpp"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace hangul_coach {

struct ServiceConfig {
  SttConfig stt;
  std::filesystem::path model_path;
  std::filesystem::path corpus_dir;
  std::filesystem::path store_path;
  std::filesystem::path static_dir;  // empty: no static files
  std::string host = "127.0.0.1";
  int port = 8080;
  LevelBands bands;
  /// Rank against attempts on the same sentence instead of all attempts.
  bool rank_per_sentence = false;
};

/// Relative paths are resolved against the config file's directory.
/// Throws Error{InvalidConfig | IoError}.
ServiceConfig load_service_config(const std::filesystem::path& path);

struct AssessmentResponse {
  std::uint64_t attempt_id = 0;
  std::string transcript;
  std::string reference_text;
  HighlightedDiff diff;
  double similarity = 0.0;
  Level level = Level::Beginner;
  double top_percent = 0.0;
};

nlohmann::ordered_json to_json(const AssessmentResponse& response);

/// An Error paired with the HTTP status and label it surfaces as.
struct HttpFailure {
  int status;
  std::string label;
  Errc code;
  std::string message;

  nlohmann::ordered_json body() const;
};

HttpFailure classify_failure(const Error& error);

/// Pipeline wiring. Model, catalog and extractor are read-only after
/// construction; the attempt store serializes its own writes, so one
/// instance can serve concurrent requests.
class AssessmentService {
 public:
  AssessmentService(SiameseModel model, Catalog catalog, std::unique_ptr<SttClient> stt,
                    std::unique_ptr<AttemptStore> store, MfccExtractor extractor = MfccExtractor(MfccConfig{}),
                    LevelBands bands = {}, bool rank_per_sentence = false);

  /// Loads model, catalog, STT backend and store named by the config.
  static std::unique_ptr<AssessmentService> from_config(const ServiceConfig& config);

  /// Full assessment of one uploaded clip. Nothing is persisted unless every
  /// stage succeeds. Throws Error (see classify_failure for the mapping).
  AssessmentResponse assess(const std::string& user_id, const std::string& sentence_id,
                            std::string_view wav_bytes);

  nlohmann::ordered_json list_sentences() const;
  /// Throws Error{InvalidArgument} for n < 1.
  nlohmann::ordered_json leaderboard(std::size_t n) const;

  /// Registers the API routes (and the static mount when static_dir is set).
  void mount(httplib::Server& server, const std::filesystem::path& static_dir = {});

  const Catalog& catalog() const { return catalog_; }
  const SiameseModel& model() const { return model_; }
  AttemptStore& store() { return *store_; }

 private:
  SiameseModel model_;
  Catalog catalog_;
  std::unique_ptr<SttClient> stt_;
  std::unique_ptr<AttemptStore> store_;
  MfccExtractor extractor_;
  LevelBands bands_;
  bool rank_per_sentence_;
};

}  // namespace hangul_coach

#endif  // HANGUL_COACH_SERVICE_HPP
