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

// Writes the synthetic fixture corpus, clips, mock transcript table, model
// and service config used by the tests and the demo server.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "hangul_coach/audio.hpp"
#include "hangul_coach/siamese.hpp"
#include "hangul_coach/stt.hpp"
#include "hangul_coach/synth.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
namespace hc = hangul_coach;

namespace {

constexpr const char* kF1Text = "둘 다 청소하기 싫어 귀찮아";
constexpr const char* kF2Text = "요일 날 여기다 청소하기 싫어 귀찮아";
constexpr std::uint64_t kModelSeed = 2026;

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

// Key under which the mock recognizer will look the file up.
std::string key_of(const fs::path& wav) {
  return hc::pcm_fingerprint(hc::canonicalize(hc::load_wav_file(wav)));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <output dir>\n";
    return 2;
  }
  try {
    const fs::path root(argv[1]);
    fs::create_directories(root / "corpus");
    fs::create_directories(root / "clips");
    fs::create_directories(root / "toy");
    fs::create_directories(root / "static");

    struct Sentence {
      const char* id;
      const char* text;
    };
    const std::vector<Sentence> sentences = {
        {"s1", kF1Text}, {"s2", "안녕하세요 만나서 반갑습니다"}, {"s3", "오늘 날씨가 좋네요"}};
    nlohmann::ordered_json manifest = nlohmann::ordered_json::array();
    nlohmann::ordered_json mock = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const std::string file = std::string(sentences[i].id) + ".wav";
      hc::write_wav_file(root / "corpus" / file, hc::synth::speak(sentences[i].text, 100 + i));
      manifest.push_back({{"sentence_id", sentences[i].id}, {"text", sentences[i].text}, {"audio", file}});
      mock[key_of(root / "corpus" / file)] = sentences[i].text;
    }
    write_json(root / "corpus" / "sentences.json", manifest);

    hc::write_wav_file(root / "clips" / "f1.wav", hc::synth::speak(kF1Text, 1));
    hc::write_wav_file(root / "clips" / "f2.wav", hc::synth::speak(kF2Text, 2));
    hc::write_wav_file(root / "clips" / "silence.wav", hc::AudioClip{std::vector<double>(16000, 0.0), 16000});
    mock[key_of(root / "clips" / "f1.wav")] = kF1Text;
    mock[key_of(root / "clips" / "f2.wav")] = kF2Text;
    mock[key_of(root / "clips" / "silence.wav")] = "";
    write_json(root / "mock_stt.json", mock);

    // Briefly trained on tone pairs so distinct clips do not all score near 1.
    hc::TrainConfig train_config;
    train_config.epochs = 60;
    train_config.seed = kModelSeed;
    const auto toy_pairs = hc::synth::featurize(hc::synth::make_toy_set(kModelSeed, 8));
    hc::save_model(hc::train(hc::init_model(kModelSeed), toy_pairs, train_config).model, root / "model.ksnm");

    std::ofstream(root / "static" / "index.html") << "<!doctype html><title>Hangul Coach</title>\n";
    write_json(root / "service.json", {{"stt", {{"backend", "mock"}, {"mock_table", "mock_stt.json"}}},
                                       {"model", "model.ksnm"},
                                       {"corpus", "corpus"},
                                       {"store", "attempts.jsonl"},
                                       {"static_dir", "static"},
                                       {"host", "127.0.0.1"},
                                       {"port", 0}});

    // A small two-class training set in the pairs.json layout.
    const hc::synth::ToySet toy = hc::synth::make_toy_set(42, 8);
    for (std::size_t i = 0; i < toy.clips.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "clip_%02zu.wav", i);
      hc::write_wav_file(root / "toy" / name, toy.clips[i]);
    }
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const auto& p : toy.pairs) {
      char a[32], b[32];
      std::snprintf(a, sizeof a, "clip_%02zu.wav", p.a);
      std::snprintf(b, sizeof b, "clip_%02zu.wav", p.b);
      pairs.push_back({{"a", a}, {"b", b}, {"label", p.label}});
    }
    write_json(root / "toy" / "pairs.json", pairs);
  } catch (const std::exception& e) {
    std::cerr << "make_fixtures: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
