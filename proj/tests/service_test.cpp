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

#include <gtest/gtest.h>

#include <thread>

#include "hangul_coach/service.hpp"
#include "httplib.h"
#include "oracles.hpp"
#include "test_support.hpp"

namespace hc = hangul_coach;
using testing_support::fixture_dir;
using testing_support::read_file;
using testing_support::TempDir;

namespace {

constexpr const char* kAnswer = "둘 다 청소하기 싫어 귀찮아";
constexpr const char* kUser = "요일 날 여기다 청소하기 싫어 귀찮아";

const std::vector<hc::Span> kRefSpans = {{"둘 ", hc::SpanFlag::Mispronounced},
                                         {"다 청소하기 싫어 귀찮아", hc::SpanFlag::Ok}};
const std::vector<hc::Span> kHypSpans = {{"요일 ", hc::SpanFlag::Extra},
                                         {"날 ", hc::SpanFlag::Mispronounced},
                                         {"여기", hc::SpanFlag::Extra},
                                         {"다 청소하기 싫어 귀찮아", hc::SpanFlag::Ok}};

std::string clip_bytes(const char* name) { return read_file(fixture_dir() / "clips" / name); }

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    config_ = hc::load_service_config(fixture_dir() / "service.json");
    config_.store_path = dir_ / "attempts.jsonl";
    service_ = hc::AssessmentService::from_config(config_);
  }

  hc::Errc failure_code(const std::string& sentence, const std::string& bytes) {
    try {
      service_->assess("u", sentence, bytes);
    } catch (const hc::Error& e) {
      return e.code();
    }
    ADD_FAILURE() << "assess did not throw";
    return hc::Errc::IoError;
  }

  TempDir dir_;
  hc::ServiceConfig config_;
  std::unique_ptr<hc::AssessmentService> service_;
};

}  // namespace

TEST_F(ServiceTest, ChoreSentenceAttempt) {
  const hc::AssessmentResponse r = service_->assess("kim", "s1", clip_bytes("f2.wav"));
  EXPECT_EQ(r.attempt_id, 1u);
  EXPECT_EQ(r.transcript, kUser);
  EXPECT_EQ(r.reference_text, kAnswer);
  EXPECT_EQ(r.diff.reference_spans, kRefSpans);
  EXPECT_EQ(r.diff.hypothesis_spans, kHypSpans);
  EXPECT_GE(r.similarity, 0.0);
  EXPECT_LE(r.similarity, 1.0);
  EXPECT_EQ(r.level, hc::level_of(r.similarity));
  EXPECT_EQ(r.top_percent, oracle::brute_top_percent(r.similarity, service_->store().scores()));

  const auto stored = service_->store().snapshot();
  ASSERT_EQ(stored.size(), 1u);
  EXPECT_EQ(stored[0].level, hc::level_of(stored[0].similarity));
  EXPECT_NEAR(stored[0].total_cost, 4.0 + 2.0 / 3.0, 1e-9);
}

TEST_F(ServiceTest, RankCountsEveryStoredAttempt) {
  service_->assess("a", "s1", clip_bytes("f1.wav"));
  service_->assess("b", "s1", clip_bytes("f2.wav"));
  const auto r = service_->assess("c", "s2", read_file(fixture_dir() / "corpus" / "s2.wav"));
  EXPECT_EQ(r.attempt_id, 3u);
  EXPECT_EQ(r.top_percent, oracle::brute_top_percent(r.similarity, service_->store().scores()));
}

TEST_F(ServiceTest, RankPerSentenceWhenConfigured) {
  config_.rank_per_sentence = true;
  service_ = hc::AssessmentService::from_config(config_);
  service_->assess("a", "s1", clip_bytes("f1.wav"));
  const auto r = service_->assess("c", "s2", read_file(fixture_dir() / "corpus" / "s2.wav"));
  EXPECT_EQ(r.top_percent, 100.0);
}

TEST_F(ServiceTest, ResponsesAreDeterministic) {
  auto body = [&] {
    nlohmann::ordered_json j = hc::to_json(service_->assess("kim", "s1", clip_bytes("f2.wav")));
    j.erase("attempt_id");
    j.erase("top_percent");
    return j.dump();
  };
  EXPECT_EQ(body(), body());
}

TEST_F(ServiceTest, FailuresLeaveStoreUntouched) {
  EXPECT_EQ(failure_code("s1", "not a wav"), hc::Errc::MalformedContainer);
  EXPECT_EQ(failure_code("s404", clip_bytes("f2.wav")), hc::Errc::UnknownSentence);
  EXPECT_EQ(failure_code("s1", clip_bytes("silence.wav")), hc::Errc::NoSpeechRecognized);
  const auto unknown = hc::encode_wav(hc::AudioClip{std::vector<double>(8000, 0.25), 16000});
  EXPECT_EQ(failure_code("s1", std::string(unknown.begin(), unknown.end())), hc::Errc::FingerprintUnknown);
  EXPECT_EQ(service_->store().size(), 0u);
  EXPECT_FALSE(std::filesystem::exists(config_.store_path));
}

TEST_F(ServiceTest, ListSentences) {
  const auto list = service_->list_sentences();
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[0]["sentence_id"], "s1");
  EXPECT_EQ(list[1]["sentence_id"], "s2");
  EXPECT_EQ(list[2]["sentence_id"], "s3");
  for (const auto& item : list) EXPECT_EQ(item.size(), 2u);
  EXPECT_EQ(list.dump().find(".wav"), std::string::npos);

  hc::AssessmentService empty(hc::init_model(1), hc::Catalog{},
                              std::make_unique<hc::MockSttClient>(std::map<std::string, std::string>{}),
                              std::make_unique<hc::AttemptStore>(dir_ / "other.jsonl"));
  EXPECT_EQ(empty.list_sentences().dump(), "[]");
}

TEST_F(ServiceTest, Leaderboard) {
  EXPECT_EQ(service_->leaderboard(10).dump(), "[]");
  service_->assess("a", "s1", clip_bytes("f1.wav"));
  service_->assess("b", "s1", clip_bytes("f2.wav"));
  service_->assess("c", "s2", read_file(fixture_dir() / "corpus" / "s2.wav"));
  const auto board = service_->leaderboard(10);
  ASSERT_EQ(board.size(), 3u);
  EXPECT_GE(board[0]["similarity"].get<double>(), board[1]["similarity"].get<double>());
  EXPECT_GE(board[1]["similarity"].get<double>(), board[2]["similarity"].get<double>());
  EXPECT_EQ(board[0].size(), 4u);
  for (const char* key : {"user_id", "sentence_id", "similarity", "level"}) EXPECT_TRUE(board[0].contains(key));
  EXPECT_EQ(service_->leaderboard(1).size(), 1u);
  EXPECT_EQ(service_->leaderboard(1)[0], board[0]);
}

TEST(ClassifyFailure, StatusTable) {
  const struct {
    hc::Errc code;
    int status;
    const char* label;
  } cases[] = {
      {hc::Errc::UnknownSentence, 404, "UnknownSentence"},
      {hc::Errc::MalformedContainer, 400, "MalformedAudio"},
      {hc::Errc::UnsupportedFormat, 400, "MalformedAudio"},
      {hc::Errc::EmptyAudio, 400, "MalformedAudio"},
      {hc::Errc::ClipTooShort, 400, "MalformedAudio"},
      {hc::Errc::InvalidArgument, 400, "BadRequest"},
      {hc::Errc::NoSpeechRecognized, 422, "NoSpeechRecognized"},
      {hc::Errc::UnsupportedCharacter, 422, "UnalignableTranscript"},
      {hc::Errc::BackendUnavailable, 502, "SttUnavailable"},
      {hc::Errc::AuthFailure, 502, "SttUnavailable"},
      {hc::Errc::FingerprintUnknown, 502, "SttUnavailable"},
      {hc::Errc::StorageFailure, 500, "InternalError"},
  };
  for (const auto& c : cases) {
    const hc::HttpFailure f = hc::classify_failure(hc::Error(c.code, "detail"));
    EXPECT_EQ(f.status, c.status);
    EXPECT_EQ(f.label, c.label);
    EXPECT_EQ(f.body()["error"], c.label);
    EXPECT_EQ(f.body()["message"], "detail");
  }
}

TEST(ServiceConfig, ResolvesPathsAndRequiresFields) {
  const hc::ServiceConfig c = hc::load_service_config(fixture_dir() / "service.json");
  EXPECT_EQ(c.model_path, fixture_dir() / "model.ksnm");
  EXPECT_EQ(c.corpus_dir, fixture_dir() / "corpus");
  EXPECT_EQ(c.stt.mock_table_path, fixture_dir() / "mock_stt.json");
  EXPECT_EQ(c.stt.backend, hc::SttBackend::Mock);

  TempDir dir;
  testing_support::write_file(dir / "c.json", R"({"corpus":"c","store":"s"})");
  EXPECT_ERRC(hc::load_service_config(dir / "c.json"), hc::Errc::InvalidConfig);
  testing_support::write_file(dir / "c.json", R"({"model":"m","corpus":"c","store":"s","port":70000})");
  EXPECT_ERRC(hc::load_service_config(dir / "c.json"), hc::Errc::InvalidConfig);
  testing_support::write_file(dir / "c.json",
                              R"({"model":"m","corpus":"c","store":"s","level_bands":{"advanced":0.95}})");
  EXPECT_ERRC(hc::load_service_config(dir / "c.json"), hc::Errc::InvalidConfig);
  EXPECT_ERRC(hc::load_service_config(dir / "missing.json"), hc::Errc::IoError);

  testing_support::write_file(dir / "c.json", R"({"model":"absent.ksnm","corpus":")" +
                                                  (fixture_dir() / "corpus").string() + R"(","store":"s"})");
  EXPECT_THROW(hc::AssessmentService::from_config(hc::load_service_config(dir / "c.json")), hc::Error);
}

class HttpServiceTest : public ServiceTest {
 protected:
  void SetUp() override {
    ServiceTest::SetUp();
    service_->mount(server_, config_.static_dir);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(HttpServiceTest, HealthSentencesAndStatic) {
  auto cli = client();
  auto health = cli.Get("/api/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(nlohmann::json::parse(health->body), nlohmann::json({{"status", "ok"}}));

  auto sentences = cli.Get("/api/sentences");
  ASSERT_TRUE(sentences);
  EXPECT_EQ(sentences->body, service_->list_sentences().dump());

  auto index = cli.Get("/");
  ASSERT_TRUE(index);
  EXPECT_EQ(index->status, 200);
  EXPECT_EQ(index->body, read_file(fixture_dir() / "static" / "index.html"));
}

TEST_F(HttpServiceTest, PostAttempt) {
  auto cli = client();
  const httplib::MultipartFormDataItems form = {
      {"audio", clip_bytes("f2.wav"), "f2.wav", "audio/wav"},
      {"user_id", "kim", "", ""},
      {"sentence_id", "s1", "", ""},
  };
  auto res = cli.Post("/api/attempts", form);
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  const auto j = nlohmann::ordered_json::parse(res->body);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"attempt_id", "transcript", "reference_text", "similarity", "level",
                                            "top_percent", "diff"}));
  EXPECT_EQ(j["transcript"], kUser);
  EXPECT_EQ(j["diff"].dump(), hc::to_json(hc::HighlightedDiff{kRefSpans, kHypSpans}).dump());
  EXPECT_EQ(j["level"], std::string(hc::to_string(hc::level_of(j["similarity"].get<double>()))));
  EXPECT_EQ(j["top_percent"], 100.0);

  auto board = cli.Get("/api/leaderboard?n=5");
  ASSERT_TRUE(board);
  EXPECT_EQ(nlohmann::json::parse(board->body).size(), 1u);
}

TEST_F(HttpServiceTest, RejectsBadRequestsWithoutWriting) {
  auto cli = client();
  auto post = [&](const std::string& audio, const std::string& sentence) {
    const httplib::MultipartFormDataItems form = {
        {"audio", audio, "x.wav", "audio/wav"}, {"user_id", "kim", "", ""}, {"sentence_id", sentence, "", ""}};
    return cli.Post("/api/attempts", form);
  };
  auto bad = post("not a wav", "s1");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(nlohmann::json::parse(bad->body)["error"], "MalformedAudio");

  auto missing = post(clip_bytes("f2.wav"), "s404");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  auto silent = post(clip_bytes("silence.wav"), "s1");
  ASSERT_TRUE(silent);
  EXPECT_EQ(silent->status, 422);

  const httplib::MultipartFormDataItems no_user = {{"audio", clip_bytes("f2.wav"), "x.wav", "audio/wav"},
                                                   {"sentence_id", "s1", "", ""}};
  auto no_user_res = cli.Post("/api/attempts", no_user);
  ASSERT_TRUE(no_user_res);
  EXPECT_EQ(no_user_res->status, 400);

  const httplib::MultipartFormDataItems no_audio = {{"user_id", "kim", "", ""}, {"sentence_id", "s1", "", ""}};
  auto no_audio_res = cli.Post("/api/attempts", no_audio);
  ASSERT_TRUE(no_audio_res);
  EXPECT_EQ(no_audio_res->status, 400);

  for (const char* q : {"/api/leaderboard?n=0", "/api/leaderboard?n=abc", "/api/leaderboard?n=-2"}) {
    auto res = cli.Get(q);
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400) << q;
  }
  EXPECT_EQ(service_->store().size(), 0u);
  EXPECT_FALSE(std::filesystem::exists(config_.store_path));
}

TEST_F(HttpServiceTest, ConcurrentAttempts) {
  std::vector<std::thread> workers;
  std::atomic<int> ok{0};
  for (int t = 0; t < 4; ++t) {
    workers.emplace_back([&, t] {
      auto cli = client();
      for (int i = 0; i < 3; ++i) {
        const httplib::MultipartFormDataItems form = {{"audio", clip_bytes("f1.wav"), "f1.wav", "audio/wav"},
                                                      {"user_id", "u" + std::to_string(t), "", ""},
                                                      {"sentence_id", "s1", "", ""}};
        auto res = cli.Post("/api/attempts", form);
        if (res && res->status == 200) ++ok;
      }
    });
  }
  for (auto& w : workers) w.join();
  EXPECT_EQ(ok.load(), 12);
  const auto records = hc::AttemptStore(config_.store_path).snapshot();
  ASSERT_EQ(records.size(), 12u);
  for (std::size_t i = 0; i < records.size(); ++i) EXPECT_EQ(records[i].id, i + 1);
}
