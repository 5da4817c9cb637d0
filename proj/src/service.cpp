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

#include "hangul_coach/service.hpp"

#include <charconv>
#include <fstream>
#include <optional>

#include "httplib.h"

namespace hangul_coach {
namespace {

constexpr const char* kJson = "application/json";

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  if (value.empty()) return {};
  const std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

void send_failure(httplib::Response& res, const HttpFailure& f) {
  res.status = f.status;
  res.set_content(f.body().dump(), kJson);
}

std::string form_value(const httplib::Request& req, const std::string& key) {
  if (req.has_file(key)) return req.get_file_value(key).content;
  if (req.has_param(key)) return req.get_param_value(key);
  return {};
}

}  // namespace

ServiceConfig load_service_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot read config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw Error(Errc::InvalidConfig, "service config must be a JSON object");

  const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";
  ServiceConfig c;
  try {
    if (j.contains("stt")) {
      const nlohmann::json& s = j["stt"];
      c.stt.backend = parse_stt_backend(s.value("backend", std::string("mock")));
      c.stt.language_code = s.value("language_code", c.stt.language_code);
      c.stt.model_name = s.value("model", c.stt.model_name);
      c.stt.api_key = s.value("api_key", std::string());
      c.stt.timeout_seconds = s.value("timeout_s", c.stt.timeout_seconds);
      c.stt.endpoint = s.value("endpoint", c.stt.endpoint);
      c.stt.mock_table_path = resolve(base, s.value("mock_table", std::string()));
    }
    c.model_path = resolve(base, j.value("model", std::string()));
    c.corpus_dir = resolve(base, j.value("corpus", std::string()));
    c.store_path = resolve(base, j.value("store", std::string()));
    c.static_dir = resolve(base, j.value("static_dir", std::string()));
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    if (j.contains("level_bands")) {
      c.bands.advanced = j["level_bands"].value("advanced", c.bands.advanced);
      c.bands.intermediate = j["level_bands"].value("intermediate", c.bands.intermediate);
    }
    c.rank_per_sentence = j.value("rank_per_sentence", false);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, path.string() + ": " + e.what());
  }
  if (c.model_path.empty()) throw Error(Errc::InvalidConfig, "config needs \"model\"");
  if (c.corpus_dir.empty()) throw Error(Errc::InvalidConfig, "config needs \"corpus\"");
  if (c.store_path.empty()) throw Error(Errc::InvalidConfig, "config needs \"store\"");
  if (c.port < 0 || c.port > 65535) throw Error(Errc::InvalidConfig, "port out of range");
  c.bands.validate();
  return c;
}

nlohmann::ordered_json to_json(const AssessmentResponse& r) {
  nlohmann::ordered_json j;
  j["attempt_id"] = r.attempt_id;
  j["transcript"] = r.transcript;
  j["reference_text"] = r.reference_text;
  j["similarity"] = r.similarity;
  j["level"] = std::string(to_string(r.level));
  j["top_percent"] = r.top_percent;
  j["diff"] = to_json(r.diff);
  return j;
}

nlohmann::ordered_json HttpFailure::body() const {
  nlohmann::ordered_json j;
  j["error"] = label;
  j["code"] = std::string(to_string(code));
  j["message"] = message;
  return j;
}

HttpFailure classify_failure(const Error& e) {
  auto make = [&e](int status, const char* label) {
    return HttpFailure{status, label, e.code(), e.detail()};
  };
  switch (e.code()) {
    case Errc::UnknownSentence:
      return make(404, "UnknownSentence");
    case Errc::MalformedContainer:
    case Errc::UnsupportedFormat:
    case Errc::EmptyAudio:
    case Errc::ClipTooShort:
      return make(400, "MalformedAudio");
    case Errc::InvalidArgument:
      return make(400, "BadRequest");
    case Errc::NoSpeechRecognized:
      return make(422, "NoSpeechRecognized");
    case Errc::UnsupportedCharacter:
      return make(422, "UnalignableTranscript");
    case Errc::BackendUnavailable:
    case Errc::AuthFailure:
    case Errc::FingerprintUnknown:
      return make(502, "SttUnavailable");
    default:
      return make(500, "InternalError");
  }
}

AssessmentService::AssessmentService(SiameseModel model, Catalog catalog,
                                     std::unique_ptr<SttClient> stt,
                                     std::unique_ptr<AttemptStore> store, MfccExtractor extractor,
                                     LevelBands bands, bool rank_per_sentence)
    : model_(std::move(model)),
      catalog_(std::move(catalog)),
      stt_(std::move(stt)),
      store_(std::move(store)),
      extractor_(std::move(extractor)),
      bands_(bands),
      rank_per_sentence_(rank_per_sentence) {
  bands_.validate();
}

std::unique_ptr<AssessmentService> AssessmentService::from_config(const ServiceConfig& config) {
  SiameseModel model = load_model(config.model_path);
  MfccExtractor extractor{MfccConfig{}};
  Catalog catalog = load_catalog(config.corpus_dir, extractor);
  std::unique_ptr<SttClient> stt = make_stt_client(config.stt);
  auto store = std::make_unique<AttemptStore>(config.store_path);
  return std::make_unique<AssessmentService>(std::move(model), std::move(catalog), std::move(stt),
                                             std::move(store), std::move(extractor), config.bands,
                                             config.rank_per_sentence);
}

AssessmentResponse AssessmentService::assess(const std::string& user_id,
                                             const std::string& sentence_id,
                                             std::string_view wav_bytes) {
  const ReferenceEntry* entry = catalog_.find(sentence_id);
  if (!entry) throw Error(Errc::UnknownSentence, "no sentence '" + sentence_id + "'");

  // Audio checks and features first so malformed uploads never reach STT.
  const AudioClip clip = canonicalize(load_wav(wav_bytes));
  if (clip.duration_seconds() > kMaxUtteranceSeconds) {
    throw Error(Errc::UnsupportedFormat, "recording longer than 60 s");
  }
  const MfccMatrix features = fit_frames(extractor_.compute(clip), net::kInputFrames);

  const Transcript transcript = stt_->transcribe(clip);
  const AlignmentScript script = align(entry->text, transcript.text);
  HighlightedDiff diff = highlight(script, entry->text, transcript.text);

  const double score = similarity(model_, features, entry->answer_mfcc);
  const Level level = level_of(score, bands_);

  AttemptRecord record;
  record.user_id = user_id;
  record.sentence_id = sentence_id;
  record.transcript = transcript.text;
  record.similarity = score;
  record.level = level;
  record.total_cost = script.total_cost;
  const AttemptRecord stored = store_->record_attempt(std::move(record));

  const std::vector<double> population =
      store_->scores(rank_per_sentence_ ? std::optional<std::string>(sentence_id) : std::nullopt);

  AssessmentResponse response;
  response.attempt_id = stored.id;
  response.transcript = transcript.text;
  response.reference_text = entry->text;
  response.diff = std::move(diff);
  response.similarity = score;
  response.level = level;
  response.top_percent = top_percent(score, population);
  return response;
}

nlohmann::ordered_json AssessmentService::list_sentences() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ReferenceEntry& e : catalog_.entries()) {
    arr.push_back({{"sentence_id", e.sentence_id}, {"text", e.text}});
  }
  return arr;
}

nlohmann::ordered_json AssessmentService::leaderboard(std::size_t n) const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const AttemptRecord& r : store_->leaderboard(n)) {
    arr.push_back({{"user_id", r.user_id},
                   {"sentence_id", r.sentence_id},
                   {"similarity", r.similarity},
                   {"level", std::string(to_string(r.level))}});
  }
  return arr;
}

void AssessmentService::mount(httplib::Server& server, const std::filesystem::path& static_dir) {
  server.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", kJson);
  });

  server.Get("/api/sentences", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(list_sentences().dump(), kJson);
  });

  server.Get("/api/leaderboard", [this](const httplib::Request& req, httplib::Response& res) {
    std::size_t n = 10;
    if (req.has_param("n")) {
      const std::string raw = req.get_param_value("n");
      const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), n);
      if (ec != std::errc() || ptr != raw.data() + raw.size() || n < 1) {
        send_failure(res, classify_failure(Error(Errc::InvalidArgument, "n must be a positive integer")));
        return;
      }
    }
    res.set_content(leaderboard(n).dump(), kJson);
  });

  server.Post("/api/attempts", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string user_id = form_value(req, "user_id");
    const std::string sentence_id = form_value(req, "sentence_id");
    if (user_id.empty() || sentence_id.empty()) {
      send_failure(res, classify_failure(Error(Errc::InvalidArgument, "user_id and sentence_id are required")));
      return;
    }
    if (!req.has_file("audio")) {
      send_failure(res, classify_failure(Error(Errc::MalformedContainer, "multipart field 'audio' missing")));
      return;
    }
    try {
      const AssessmentResponse r = assess(user_id, sentence_id, req.get_file_value("audio").content);
      res.set_content(to_json(r).dump(), kJson);
    } catch (const Error& e) {
      send_failure(res, classify_failure(e));
    }
  });

  if (!static_dir.empty()) {
    if (!server.set_mount_point("/", static_dir.string())) {
      throw Error(Errc::InvalidConfig, "static directory " + static_dir.string() + " does not exist");
    }
  }
}

}  // namespace hangul_coach
