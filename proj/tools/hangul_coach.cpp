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

// Command-line front end. Exit codes: 0 success, 1 domain error, 2 usage.

#include <pthread.h>
#include <signal.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hangul_coach/audio.hpp"
#include "hangul_coach/corpus.hpp"
#include "hangul_coach/error.hpp"
#include "hangul_coach/hangul.hpp"
#include "hangul_coach/mfcc.hpp"
#include "hangul_coach/scoring.hpp"
#include "hangul_coach/service.hpp"
#include "hangul_coach/siamese.hpp"
#include "hangul_coach/stt.hpp"
#include "httplib.h"
#include "json.hpp"

namespace hc = hangul_coach;

namespace {

constexpr int kOk = 0;
constexpr int kDomainError = 1;

// Thrown to tag an Error with the pipeline stage it came from.
struct StageError {
  std::string stage;
  hc::Error error;
};

template <typename F>
auto stage(const std::string& name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const hc::Error& e) {
    throw StageError{name, e};
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hc::Error(hc::Errc::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_mfcc(const std::string& wav, const std::string& config_path, bool no_cmn, const std::string& out) {
  hc::MfccConfig config;
  if (!config_path.empty()) config = hc::parse_mfcc_config(read_text_file(config_path));
  if (no_cmn) config.apply_cmn = false;
  const hc::MfccMatrix m = hc::mfcc(hc::load_wav_file(wav), config);
  const std::string csv = hc::to_csv(m);
  if (out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!(f << csv)) throw hc::Error(hc::Errc::IoError, "cannot write " + out);
  }
  return kOk;
}

int run_align(const std::string& ref, const std::string& hyp, bool as_json) {
  const hc::AlignmentScript script = hc::align(ref, hyp);
  const hc::HighlightedDiff diff = hc::highlight(script, ref, hyp);
  if (as_json) {
    std::cout << hc::to_json(diff).dump() << "\n";
  } else {
    std::cout << hc::render_ansi(diff);
  }
  return kOk;
}

struct AssessArgs {
  std::string wav;
  std::string sentence_id;
  std::string corpus;
  std::string model;
  std::string stt = "mock";
  std::string mock_table;
};

int run_assess(const AssessArgs& a) {
  hc::SttConfig stt_config;
  stt_config.backend = stage("config", [&] { return hc::parse_stt_backend(a.stt); });
  stt_config.mock_table_path = a.mock_table;
  if (stt_config.backend == hc::SttBackend::Mock && a.mock_table.empty()) {
    throw StageError{"config", hc::Error(hc::Errc::InvalidConfig, "--stt mock needs --mock-table")};
  }
  const auto stt = stage("stt", [&] { return hc::make_stt_client(stt_config); });
  const hc::SiameseModel model = stage("model", [&] { return hc::load_model(a.model); });
  const hc::MfccExtractor extractor{hc::MfccConfig{}};
  const hc::Catalog catalog = stage("corpus", [&] { return hc::load_catalog(a.corpus, extractor); });
  const hc::ReferenceEntry* entry = catalog.find(a.sentence_id);
  if (entry == nullptr) {
    throw StageError{"corpus", hc::Error(hc::Errc::UnknownSentence, a.sentence_id)};
  }

  const hc::AudioClip clip = stage("audio", [&] { return hc::canonicalize(hc::load_wav_file(a.wav)); });
  const hc::MfccMatrix features = stage("mfcc", [&] { return hc::acoustic_features(clip, extractor); });
  const hc::Transcript transcript = stage("stt", [&] { return stt->transcribe(clip); });
  const hc::HighlightedDiff diff = stage("align", [&] {
    return hc::highlight(hc::align(entry->text, transcript.text), entry->text, transcript.text);
  });
  const double score = stage("siamese", [&] { return hc::similarity(model, features, entry->answer_mfcc); });
  const hc::Level level = stage("scoring", [&] { return hc::level_of(score); });

  std::cout << "transcript: " << transcript.text << "\n" << hc::render_ansi(diff);
  char line[64];
  std::snprintf(line, sizeof line, "similarity: %.4f\n", score);
  std::cout << line << "level: " << hc::to_string(level) << "\n";
  return kOk;
}

struct TrainArgs {
  std::string data;
  std::size_t epochs = 0;
  std::uint64_t seed = 0;
  std::string out;
  double lr = 1e-3;
  std::size_t batch = 16;
};

int run_train(const TrainArgs& a) {
  const std::filesystem::path dir(a.data);
  const std::filesystem::path manifest = dir / "pairs.json";
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(manifest.string()));
  } catch (const nlohmann::json::exception& e) {
    throw hc::Error(hc::Errc::InvalidConfig, manifest.string() + ": " + e.what());
  }
  if (!j.is_array()) throw hc::Error(hc::Errc::InvalidConfig, "pairs.json must be an array");

  const hc::MfccExtractor extractor{hc::MfccConfig{}};
  std::map<std::string, hc::MfccMatrix> cache;
  auto features = [&](const std::string& rel) -> const hc::MfccMatrix& {
    auto it = cache.find(rel);
    if (it == cache.end()) {
      it = cache.emplace(rel, hc::acoustic_features(hc::load_wav_file(dir / rel), extractor)).first;
    }
    return it->second;
  };
  std::vector<hc::PairExample> dataset;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("a") || !item.contains("b") || !item.contains("label") ||
        !item["a"].is_string() || !item["b"].is_string() || !item["label"].is_number_integer()) {
      throw hc::Error(hc::Errc::InvalidConfig, "pairs.json entries need a, b (paths) and label (0|1)");
    }
    const int label = item["label"].get<int>();
    if (label != 0 && label != 1) throw hc::Error(hc::Errc::InvalidConfig, "label must be 0 or 1");
    dataset.push_back({features(item["a"].get<std::string>()), features(item["b"].get<std::string>()), label});
  }

  hc::TrainConfig config;
  config.epochs = a.epochs;
  config.seed = a.seed;
  config.learning_rate = a.lr;
  config.batch_size = a.batch;
  config.validate();
  const hc::TrainResult result =
      hc::train(hc::init_model(a.seed), dataset, config, [](std::size_t epoch, double loss) {
        char line[64];
        std::snprintf(line, sizeof line, "epoch %zu loss %.6f\n", epoch, loss);
        std::cout << line << std::flush;
      });
  hc::save_model(result.model, a.out);
  return kOk;
}

int run_serve(const std::string& config_path) {
  const hc::ServiceConfig config = hc::load_service_config(config_path);
  auto service = hc::AssessmentService::from_config(config);

  httplib::Server server;
  // Without SO_REUSEPORT a port held by another process fails to bind.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  service->mount(server, config.static_dir);
  int port = config.port;
  if (port == 0) {
    port = server.bind_to_any_port(config.host);
    if (port < 0) throw hc::Error(hc::Errc::IoError, "cannot bind " + config.host);
  } else if (!server.bind_to_port(config.host, port)) {
    throw hc::Error(hc::Errc::IoError, "cannot bind " + config.host + ":" + std::to_string(port));
  }

  // Signals go to a dedicated waiter thread, which stops the server.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });

  std::cout << "listening on http://" << config.host << ":" << port << std::endl;
  const bool clean = server.listen_after_bind();
  if (!clean && server.is_running()) server.stop();
  // A stop that did not come from a signal still has to release the waiter.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Korean pronunciation assessment"};
  app.require_subcommand(1);

  std::string wav, config_path, out;
  bool no_cmn = false;
  auto* mfcc_cmd = app.add_subcommand("mfcc", "Dump the MFCC matrix of a WAV file as CSV");
  mfcc_cmd->add_option("wav", wav, "WAV file")->required();
  mfcc_cmd->add_option("--config", config_path, "MFCC config JSON file");
  mfcc_cmd->add_flag("--no-cmn", no_cmn, "Skip cepstral mean normalization");
  mfcc_cmd->add_option("--out", out, "Write CSV here instead of stdout");

  std::string ref, hyp;
  bool as_json = false;
  auto* align_cmd = app.add_subcommand("align", "Align two Hangul sentences and highlight differences");
  align_cmd->add_option("reference", ref, "Reference text")->required();
  align_cmd->add_option("hypothesis", hyp, "Hypothesis text")->required();
  align_cmd->add_flag("--json", as_json, "Emit the span structure as JSON");

  AssessArgs assess;
  auto* assess_cmd = app.add_subcommand("assess", "Assess one recording against a corpus sentence");
  assess_cmd->add_option("wav", assess.wav, "WAV file")->required();
  assess_cmd->add_option("--sentence-id", assess.sentence_id, "Sentence id")->required();
  assess_cmd->add_option("--corpus", assess.corpus, "Corpus directory")->required();
  assess_cmd->add_option("--model", assess.model, "Model file")->required();
  assess_cmd->add_option("--stt", assess.stt, "Recognizer backend")->check(CLI::IsMember({"mock", "google"}));
  assess_cmd->add_option("--mock-table", assess.mock_table, "Mock transcript table");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a model from a directory of WAV pairs");
  train_cmd->add_option("--data", train.data, "Directory with pairs.json")->required();
  train_cmd->add_option("--epochs", train.epochs, "Epochs")->required();
  train_cmd->add_option("--seed", train.seed, "Seed")->required();
  train_cmd->add_option("--out", train.out, "Output model file")->required();
  train_cmd->add_option("--lr", train.lr, "Learning rate");
  train_cmd->add_option("--batch", train.batch, "Batch size");

  std::string serve_config;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--config", serve_config, "Service config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*mfcc_cmd) return run_mfcc(wav, config_path, no_cmn, out);
    if (*align_cmd) return run_align(ref, hyp, as_json);
    if (*assess_cmd) return run_assess(assess);
    if (*train_cmd) return run_train(train);
    if (*serve_cmd) return run_serve(serve_config);
  } catch (const StageError& e) {
    std::cerr << "error in " << e.stage << ": " << e.error.what() << "\n";
    return kDomainError;
  } catch (const hc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return 2;
}
