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

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "hangul_coach/stt.hpp"
#include "hangul_coach/synth.hpp"
#include "httplib.h"
#include "json.hpp"
#include "test_support.hpp"

namespace hc = hangul_coach;
using testing_support::fixture_dir;

namespace {

std::vector<std::uint8_t> base64_decode(const std::string& in) {
  static const std::string kAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::vector<std::uint8_t> out;
  std::uint32_t acc = 0;
  int bits = 0;
  for (char c : in) {
    if (c == '=') break;
    acc = (acc << 6) | static_cast<std::uint32_t>(kAlphabet.find(c));
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>(acc >> bits));
    }
  }
  return out;
}

// A stand-in recognize endpoint that records what it was sent.
class FakeRecognizer {
 public:
  FakeRecognizer() {
    server_.Post("/v1/speech:recognize", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu_);
      ++requests_;
      last_body_ = req.body;
      last_key_ = req.get_param_value("key");
      res.status = status_;
      res.set_content(reply_, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeRecognizer() {
    server_.stop();
    thread_.join();
  }

  void reply(int status, std::string body) {
    std::lock_guard lock(mu_);
    status_ = status;
    reply_ = std::move(body);
  }
  hc::SttConfig config(const std::string& key = "k3y/with+chars") const {
    hc::SttConfig c;
    c.backend = hc::SttBackend::Google;
    c.api_key = key;
    c.timeout_seconds = 5;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port_);
    return c;
  }
  int requests() {
    std::lock_guard lock(mu_);
    return requests_;
  }
  std::string last_body() {
    std::lock_guard lock(mu_);
    return last_body_;
  }
  std::string last_key() {
    std::lock_guard lock(mu_);
    return last_key_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::mutex mu_;
  int status_ = 200;
  std::string reply_ = "{}";
  int requests_ = 0;
  std::string last_body_;
  std::string last_key_;
};

hc::AudioClip short_clip(int rate = 16000) { return hc::synth::sine(220.0, 0.25, rate, 0.5); }

}  // namespace

TEST(GoogleStt, RequestBodyFormat) {
  const hc::AudioClip clip = short_clip();
  hc::SttConfig config;
  const auto body = nlohmann::json::parse(hc::GoogleSttClient::build_request(clip, config));
  EXPECT_EQ(body["config"]["encoding"], "LINEAR16");
  EXPECT_EQ(body["config"]["sampleRateHertz"], 16000);
  EXPECT_EQ(body["config"]["languageCode"], "ko-KR");
  EXPECT_EQ(body["config"]["model"], "latest_short");
  EXPECT_EQ(base64_decode(body["audio"]["content"].get<std::string>()), hc::to_pcm16(clip));
  EXPECT_EQ(body.size(), 2u);
  EXPECT_EQ(body["config"].size(), 4u);
}

TEST(GoogleStt, ParsesTopAlternative) {
  const hc::Transcript t = hc::GoogleSttClient::parse_response(
      R"({"results":[{"alternatives":[{"transcript":"둘 다","confidence":0.9},{"transcript":"둘"}]}]})");
  EXPECT_EQ(t.text, "둘 다");
  EXPECT_EQ(t.confidence, 0.9);
  EXPECT_ERRC(hc::GoogleSttClient::parse_response("{}"), hc::Errc::NoSpeechRecognized);
  EXPECT_ERRC(hc::GoogleSttClient::parse_response(R"({"results":[]})"), hc::Errc::NoSpeechRecognized);
  EXPECT_ERRC(hc::GoogleSttClient::parse_response(R"({"results":[{"alternatives":[{"transcript":""}]}]})"),
              hc::Errc::NoSpeechRecognized);
  EXPECT_ERRC(hc::GoogleSttClient::parse_response("<html>"), hc::Errc::BackendUnavailable);
}

TEST(GoogleStt, WireRoundTripResamplesTo16k) {
  FakeRecognizer fake;
  fake.reply(200, R"({"results":[{"alternatives":[{"transcript":"안녕하세요","confidence":0.75}]}]})");
  const hc::GoogleSttClient client(fake.config());
  const hc::Transcript t = client.transcribe(short_clip(8000));
  EXPECT_EQ(t.text, "안녕하세요");
  EXPECT_EQ(t.confidence, 0.75);
  EXPECT_EQ(fake.last_key(), "k3y/with+chars");
  const auto body = nlohmann::json::parse(fake.last_body());
  EXPECT_EQ(body["config"]["sampleRateHertz"], 16000);
  EXPECT_EQ(base64_decode(body["audio"]["content"].get<std::string>()).size(), 2u * 4000u);
}

TEST(GoogleStt, ErrorMapping) {
  FakeRecognizer fake;
  const hc::GoogleSttClient client(fake.config("secret-key-123"));
  const struct {
    int status;
    const char* body;
    hc::Errc expected;
  } cases[] = {
      {403, R"({"error":{"status":"PERMISSION_DENIED"}})", hc::Errc::AuthFailure},
      {401, "{}", hc::Errc::AuthFailure},
      {400, R"({"error":{"message":"API key not valid.","details":[{"reason":"API_KEY_INVALID"}]}})",
       hc::Errc::AuthFailure},
      {500, "{}", hc::Errc::BackendUnavailable},
      {429, "{}", hc::Errc::BackendUnavailable},
      {200, "{}", hc::Errc::NoSpeechRecognized},
  };
  for (const auto& c : cases) {
    fake.reply(c.status, c.body);
    try {
      client.transcribe(short_clip());
      ADD_FAILURE() << "status " << c.status << " did not throw";
    } catch (const hc::Error& e) {
      EXPECT_EQ(e.code(), c.expected) << c.status;
      EXPECT_EQ(std::string(e.what()).find("secret-key-123"), std::string::npos);
    }
  }
}

TEST(GoogleStt, UnreachableBackend) {
  hc::SttConfig config;
  config.api_key = "k";
  config.timeout_seconds = 2;
  {
    // Grab a free port, then release it so nothing listens there.
    httplib::Server probe;
    const int port = probe.bind_to_any_port("127.0.0.1");
    config.endpoint = "http://127.0.0.1:" + std::to_string(port);
  }
  const hc::GoogleSttClient client(config);
  EXPECT_ERRC(client.transcribe(short_clip()), hc::Errc::BackendUnavailable);
}

TEST(GoogleStt, PreconditionsCheckedBeforeAnyCall) {
  FakeRecognizer fake;
  const hc::GoogleSttClient client(fake.config());
  EXPECT_ERRC(client.transcribe(hc::AudioClip{{}, 16000}), hc::Errc::InvalidArgument);
  EXPECT_ERRC(client.transcribe(hc::AudioClip{std::vector<double>(16000 * 61), 16000}), hc::Errc::InvalidArgument);
  EXPECT_EQ(fake.requests(), 0);
}

TEST(GoogleStt, MissingKey) {
  ::unsetenv(hc::kSttKeyEnv);
  hc::SttConfig config;
  config.backend = hc::SttBackend::Google;
  EXPECT_ERRC(hc::GoogleSttClient{config}, hc::Errc::AuthFailure);
  EXPECT_ERRC(hc::make_stt_client(config), hc::Errc::AuthFailure);
  ::setenv(hc::kSttKeyEnv, "from-env", 1);
  EXPECT_EQ(hc::with_env_api_key(config).api_key, "from-env");
  config.api_key = "explicit";
  EXPECT_EQ(hc::with_env_api_key(config).api_key, "explicit");
  ::unsetenv(hc::kSttKeyEnv);
}

TEST(MockStt, FixtureTable) {
  const auto client = hc::MockSttClient::from_file(fixture_dir() / "mock_stt.json");
  auto load = [](const char* name) { return hc::canonicalize(hc::load_wav_file(fixture_dir() / "clips" / name)); };
  EXPECT_EQ(client.transcribe(load("f1.wav")).text, "둘 다 청소하기 싫어 귀찮아");
  EXPECT_EQ(client.transcribe(load("f2.wav")).text, "요일 날 여기다 청소하기 싫어 귀찮아");
  EXPECT_FALSE(client.transcribe(load("f1.wav")).confidence.has_value());
  EXPECT_ERRC(client.transcribe(load("silence.wav")), hc::Errc::NoSpeechRecognized);
  EXPECT_ERRC(client.transcribe(short_clip()), hc::Errc::FingerprintUnknown);
  EXPECT_ERRC(client.transcribe(hc::AudioClip{{}, 16000}), hc::Errc::InvalidArgument);
}

TEST(MockStt, FingerprintIsSha256OfPcm) {
  EXPECT_EQ(hc::pcm_fingerprint(hc::AudioClip{{}, 16000}),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  // Lowercase hex, stable across calls.
  const std::string fp = hc::pcm_fingerprint(short_clip());
  EXPECT_EQ(fp.size(), 64u);
  EXPECT_EQ(fp.find_first_not_of("0123456789abcdef"), std::string::npos);
  EXPECT_EQ(fp, hc::pcm_fingerprint(short_clip()));
}

TEST(MockStt, BadTables) {
  testing_support::TempDir dir;
  testing_support::write_file(dir / "t.json", "[1,2]");
  EXPECT_ERRC(hc::MockSttClient::from_file(dir / "t.json"), hc::Errc::InvalidConfig);
  testing_support::write_file(dir / "t.json", R"({"aa": 3})");
  EXPECT_ERRC(hc::MockSttClient::from_file(dir / "t.json"), hc::Errc::InvalidConfig);
  EXPECT_ERRC(hc::MockSttClient::from_file(dir / "missing.json"), hc::Errc::IoError);
}

TEST(SttConfig, BackendNames) {
  EXPECT_EQ(hc::parse_stt_backend("mock"), hc::SttBackend::Mock);
  EXPECT_EQ(hc::parse_stt_backend("google"), hc::SttBackend::Google);
  EXPECT_ERRC(hc::parse_stt_backend("whisper"), hc::Errc::InvalidConfig);
}
