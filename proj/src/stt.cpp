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

#include "hangul_coach/stt.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include "hangul_coach/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace hangul_coach {
namespace {

std::string base64(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += ch;
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

bool looks_like_key_rejection(int status, const std::string& body) {
  if (status == 401 || status == 403) return true;
  return status == 400 && (body.find("API_KEY_INVALID") != std::string::npos ||
                           body.find("API key not valid") != std::string::npos);
}

}  // namespace

SttConfig with_env_api_key(SttConfig config) {
  if (config.api_key.empty()) {
    if (const char* key = std::getenv(kSttKeyEnv)) config.api_key = key;
  }
  return config;
}

SttBackend parse_stt_backend(std::string_view name) {
  if (name == "mock") return SttBackend::Mock;
  if (name == "google") return SttBackend::Google;
  throw Error(Errc::InvalidConfig, "unknown STT backend '" + std::string(name) + "'");
}

Transcript SttClient::transcribe(const AudioClip& clip) const {
  if (clip.samples.empty()) throw Error(Errc::InvalidArgument, "cannot transcribe an empty clip");
  if (clip.duration_seconds() > kMaxUtteranceSeconds) {
    throw Error(Errc::InvalidArgument, "clip longer than 60 s");
  }
  if (clip.sample_rate == kCanonicalSampleRate) return recognize(clip);
  return recognize(resample(clip, kCanonicalSampleRate));
}

std::string pcm_fingerprint(const AudioClip& clip) {
  const std::vector<std::uint8_t> pcm = to_pcm16(clip);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(pcm.data(), pcm.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::IoError, "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

MockSttClient::MockSttClient(std::map<std::string, std::string> table) : table_(std::move(table)) {}

MockSttClient MockSttClient::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot read mock table " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, "mock table " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw Error(Errc::InvalidConfig, "mock table must be a JSON object");
  std::map<std::string, std::string> table;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_string()) throw Error(Errc::InvalidConfig, "mock table value for " + key + " is not a string");
    table.emplace(key, value.get<std::string>());
  }
  return MockSttClient(std::move(table));
}

Transcript MockSttClient::recognize(const AudioClip& clip) const {
  const std::string key = pcm_fingerprint(clip);
  const auto it = table_.find(key);
  if (it == table_.end()) throw Error(Errc::FingerprintUnknown, "no mock transcript for clip " + key);
  if (it->second.empty()) throw Error(Errc::NoSpeechRecognized, "mock transcript is empty");
  return Transcript{it->second, std::nullopt};
}

GoogleSttClient::GoogleSttClient(SttConfig config) : config_(std::move(config)) {
  if (config_.api_key.empty()) {
    throw Error(Errc::AuthFailure, std::string("no API key; set ") + kSttKeyEnv);
  }
}

std::string GoogleSttClient::build_request(const AudioClip& clip, const SttConfig& config) {
  nlohmann::ordered_json body;
  body["config"] = {{"encoding", "LINEAR16"},
                    {"sampleRateHertz", clip.sample_rate},
                    {"languageCode", config.language_code},
                    {"model", config.model_name}};
  body["audio"] = {{"content", base64(to_pcm16(clip))}};
  return body.dump();
}

Transcript GoogleSttClient::parse_response(std::string_view body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    throw Error(Errc::BackendUnavailable, "unparseable recognize response");
  }
  const auto results = j.find("results");
  if (results == j.end() || !results->is_array() || results->empty()) {
    throw Error(Errc::NoSpeechRecognized, "recognizer returned no results");
  }
  const nlohmann::json& first = (*results)[0];
  const auto alts = first.find("alternatives");
  if (alts == first.end() || !alts->is_array() || alts->empty()) {
    throw Error(Errc::NoSpeechRecognized, "recognizer returned no alternatives");
  }
  const nlohmann::json& top = (*alts)[0];
  Transcript t;
  t.text = top.value("transcript", std::string());
  if (t.text.empty()) throw Error(Errc::NoSpeechRecognized, "empty transcript");
  if (const auto c = top.find("confidence"); c != top.end() && c->is_number()) t.confidence = c->get<double>();
  return t;
}

Transcript GoogleSttClient::recognize(const AudioClip& clip) const {
  httplib::Client client(config_.endpoint);
  const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));

  const std::string path = "/v1/speech:recognize?key=" + url_encode(config_.api_key);
  const httplib::Result res = client.Post(path, build_request(clip, config_), "application/json");
  if (!res) {
    // The request URL carries the key, so only the transport error is reported.
    throw Error(Errc::BackendUnavailable, "recognize request failed: " + httplib::to_string(res.error()));
  }
  if (looks_like_key_rejection(res->status, res->body)) {
    throw Error(Errc::AuthFailure, "API key rejected (HTTP " + std::to_string(res->status) + ")");
  }
  if (res->status != 200) {
    throw Error(Errc::BackendUnavailable, "recognizer answered HTTP " + std::to_string(res->status));
  }
  return parse_response(res->body);
}

std::unique_ptr<SttClient> make_stt_client(const SttConfig& config) {
  switch (config.backend) {
    case SttBackend::Mock:
      return std::make_unique<MockSttClient>(MockSttClient::from_file(config.mock_table_path));
    case SttBackend::Google:
      return std::make_unique<GoogleSttClient>(with_env_api_key(config));
  }
  throw Error(Errc::InvalidConfig, "unknown STT backend");
}

}  // namespace hangul_coach
