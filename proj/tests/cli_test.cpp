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
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <regex>

#include "hangul_coach/hangul.hpp"
#include "hangul_coach/scoring.hpp"
#include "hangul_coach/siamese.hpp"
#include "httplib.h"
#include "json.hpp"
#include "test_support.hpp"

namespace hc = hangul_coach;
using testing_support::cli_path;
using testing_support::fixture_dir;
using testing_support::quote;
using testing_support::read_file;
using testing_support::run_command;
using testing_support::TempDir;

namespace {

constexpr const char* kAnswer = "둘 다 청소하기 싫어 귀찮아";
constexpr const char* kUser = "요일 날 여기다 청소하기 싫어 귀찮아";

std::string cli() { return quote(cli_path().string()); }
std::string fx(const std::string& rel) { return quote((fixture_dir() / rel).string()); }

std::string assess_cmd(const std::string& wav, const std::string& extra = "") {
  return cli() + " assess " + fx(wav) + " --sentence-id s1 --corpus " + fx("corpus") + " --model " +
         fx("model.ksnm") + " " + extra;
}

// Runs `serve` as a child process with stdout on a pipe.
class ServeProcess {
 public:
  explicit ServeProcess(const std::filesystem::path& config) {
    int fds[2];
    if (::pipe(fds) != 0) throw std::runtime_error("pipe");
    pid_ = ::fork();
    if (pid_ == 0) {
      ::dup2(fds[1], STDOUT_FILENO);
      ::close(fds[0]);
      ::close(fds[1]);
      const std::string bin = cli_path().string();
      const std::string cfg = config.string();
      ::execl(bin.c_str(), bin.c_str(), "serve", "--config", cfg.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(fds[1]);
    out_ = ::fdopen(fds[0], "r");
  }
  ~ServeProcess() {
    if (pid_ > 0 && !reaped_) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
    }
    if (out_) std::fclose(out_);
  }

  /// First stdout line, or empty at EOF.
  std::string read_line() {
    char buf[256];
    return std::fgets(buf, sizeof buf, out_) ? std::string(buf) : std::string();
  }
  void signal(int sig) { ::kill(pid_, sig); }
  int wait() {
    int status = 0;
    ::waitpid(pid_, &status, 0);
    reaped_ = true;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

 private:
  pid_t pid_ = -1;
  std::FILE* out_ = nullptr;
  bool reaped_ = false;
};

std::filesystem::path write_serve_config(const TempDir& dir, int port, const std::string& model = "") {
  nlohmann::json j = {{"stt", {{"backend", "mock"}, {"mock_table", (fixture_dir() / "mock_stt.json").string()}}},
                      {"model", model.empty() ? (fixture_dir() / "model.ksnm").string() : model},
                      {"corpus", (fixture_dir() / "corpus").string()},
                      {"store", (dir / "attempts.jsonl").string()},
                      {"static_dir", (fixture_dir() / "static").string()},
                      {"host", "127.0.0.1"},
                      {"port", port}};
  testing_support::write_file(dir / "service.json", j.dump());
  return dir / "service.json";
}

}  // namespace

TEST(CliUsage, ExitCodes) {
  EXPECT_EQ(run_command(cli()).exit_code, 2);
  EXPECT_EQ(run_command(cli() + " mfcc " + fx("clips/f1.wav") + " --bogus").exit_code, 2);
  EXPECT_EQ(run_command(cli() + " frobnicate").exit_code, 2);
  EXPECT_EQ(run_command(cli() + " assess " + fx("clips/f1.wav")).exit_code, 2);
  EXPECT_EQ(run_command(cli() + " --help").exit_code, 0);
}

TEST(CliMfcc, SilenceWithoutCmn) {
  const auto r = run_command(cli() + " mfcc --no-cmn " + fx("clips/silence.wav"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "# frames=98 coeffs=13 hop_s=0.01");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::istringstream cells(line);
    std::string cell;
    for (int j = 0; std::getline(cells, cell, ','); ++j) {
      EXPECT_NEAR(std::stod(cell), j == 0 ? std::log(1e-10) * std::sqrt(26.0) : 0.0, 1e-9);
    }
  }
  EXPECT_EQ(rows, 98);
}

TEST(CliMfcc, ConfigFile) {
  TempDir dir;
  testing_support::write_file(dir / "m.json", R"({"n_coeffs": 5, "apply_cmn": false})");
  const auto r = run_command(cli() + " mfcc " + fx("clips/silence.wav") + " --config " + quote((dir / "m.json").string()));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "# frames=98 coeffs=5 hop_s=0.01");
}

TEST(CliMfcc, OutFileAndErrors) {
  TempDir dir;
  const auto to_stdout = run_command(cli() + " mfcc " + fx("clips/f1.wav"));
  const auto to_file = run_command(cli() + " mfcc " + fx("clips/f1.wav") + " --out " + quote((dir / "m.csv").string()));
  ASSERT_EQ(to_file.exit_code, 0);
  EXPECT_TRUE(to_file.out.empty());
  EXPECT_EQ(read_file(dir / "m.csv"), to_stdout.out);

  const auto missing = run_command(cli() + " mfcc /nonexistent.wav");
  EXPECT_EQ(missing.exit_code, 1);
  EXPECT_FALSE(missing.err.empty());
}

TEST(CliAlign, ChoreSentenceHighlightsTheSubstitution) {
  const auto r = run_command(cli() + " align " + quote(kAnswer) + " " + quote(kUser));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const std::string first = r.out.substr(0, r.out.find('\n'));
  EXPECT_EQ(first, "answer: \x1b[31m둘\x1b[0m 다 청소하기 싫어 귀찮아");
}

TEST(CliAlign, IdenticalTextsHaveNoEscapes) {
  const auto r = run_command(cli() + " align " + quote(kAnswer) + " " + quote(kAnswer));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out.find('\x1b'), std::string::npos);
}

TEST(CliAlign, LatinHypothesisFails) {
  const auto r = run_command(cli() + " align " + quote(kAnswer) + " " + quote("hello"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("UnsupportedCharacter"), std::string::npos);
}

TEST(CliAlign, JsonMatchesServiceSerialization) {
  const auto r = run_command(cli() + " align --json " + quote(kAnswer) + " " + quote(kUser));
  ASSERT_EQ(r.exit_code, 0);
  const auto diff = hc::highlight(hc::align(kAnswer, kUser), kAnswer, kUser);
  EXPECT_EQ(r.out, hc::to_json(diff).dump() + "\n");
}

TEST(CliAssess, ChoreSentenceReport) {
  const auto r = run_command(assess_cmd("clips/f2.wav", "--stt mock --mock-table " + fx("mock_stt.json")));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find(std::string("transcript: ") + kUser), std::string::npos);
  EXPECT_NE(r.out.find("answer: \x1b[31m둘\x1b[0m"), std::string::npos);
  std::smatch m;
  ASSERT_TRUE(std::regex_search(r.out, m, std::regex("similarity: ([01]\\.\\d{4})\nlevel: (\\w+)")));
  const double score = std::stod(m[1]);
  EXPECT_GE(score, 0.0);
  EXPECT_LE(score, 1.0);
  EXPECT_EQ(m[2].str(), std::string(hc::to_string(hc::level_of(score))));
}

TEST(CliAssess, OwnRecordingScoresSigmoidOfBias) {
  const auto r = run_command(cli() + " assess " + fx("corpus/s1.wav") + " --sentence-id s1 --corpus " +
                             fx("corpus") + " --model " + fx("model.ksnm") + " --mock-table " + fx("mock_stt.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const double expected = hc::sigmoid(hc::load_model(fixture_dir() / "model.ksnm").head_bias());
  char line[64];
  std::snprintf(line, sizeof line, "similarity: %.4f\n", expected);
  EXPECT_NE(r.out.find(line), std::string::npos) << r.out;
}

TEST(CliAssess, GoogleWithoutKey) {
  const auto r = run_command("env -u HANGUL_COACH_STT_KEY " + assess_cmd("clips/f2.wav", "--stt google"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("AuthFailure"), std::string::npos);
  EXPECT_NE(r.err.find("stt"), std::string::npos);
}

TEST(CliAssess, StageErrors) {
  const auto silent = run_command(assess_cmd("clips/silence.wav", "--mock-table " + fx("mock_stt.json")));
  EXPECT_EQ(silent.exit_code, 1);
  EXPECT_NE(silent.err.find("error in stt: NoSpeechRecognized"), std::string::npos) << silent.err;

  const auto no_model = run_command(cli() + " assess " + fx("clips/f2.wav") + " --sentence-id s1 --corpus " +
                                    fx("corpus") + " --model /nonexistent.ksnm --mock-table " + fx("mock_stt.json"));
  EXPECT_EQ(no_model.exit_code, 1);
  EXPECT_NE(no_model.err.find("error in model"), std::string::npos);

  const auto bad_audio = run_command(assess_cmd("mock_stt.json", "--mock-table " + fx("mock_stt.json")));
  EXPECT_EQ(bad_audio.exit_code, 1);
  EXPECT_NE(bad_audio.err.find("error in audio"), std::string::npos);
}

TEST(CliTrain, ZeroEpochsWritesInitialModel) {
  TempDir dir;
  const auto r = run_command(cli() + " train --data " + fx("toy") + " --epochs 0 --seed 17 --out " +
                             quote((dir / "m.ksnm").string()));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto expected = hc::serialize_model(hc::init_model(17));
  EXPECT_EQ(read_file(dir / "m.ksnm"), std::string(expected.begin(), expected.end()));
}

TEST(CliTrain, SameSeedSameBytes) {
  TempDir dir;
  auto train = [&](const std::string& name) {
    return run_command(cli() + " train --data " + fx("toy") + " --epochs 2 --seed 3 --batch 8 --out " +
                       quote((dir / name).string()));
  };
  const auto a = train("a.ksnm");
  const auto b = train("b.ksnm");
  ASSERT_EQ(a.exit_code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(std::regex_search(a.out, std::regex("^epoch 1 loss \\d+\\.\\d{6}\nepoch 2 loss \\d+\\.\\d{6}\n$")))
      << a.out;
  EXPECT_EQ(read_file(dir / "a.ksnm"), read_file(dir / "b.ksnm"));
}

TEST(CliTrain, ManifestErrors) {
  TempDir dir;
  const std::string out = " --epochs 1 --seed 1 --out " + quote((dir / "m.ksnm").string());
  EXPECT_EQ(run_command(cli() + " train --data " + quote(dir.path().string()) + out).exit_code, 1);
  testing_support::write_file(dir / "pairs.json", R"([{"a":"x.wav","b":"y.wav","label":1}])");
  EXPECT_EQ(run_command(cli() + " train --data " + quote(dir.path().string()) + out).exit_code, 1);
  testing_support::write_file(dir / "pairs.json", R"([{"a":"x.wav","b":"y.wav","label":4}])");
  EXPECT_EQ(run_command(cli() + " train --data " + quote(dir.path().string()) + out).exit_code, 1);
  EXPECT_FALSE(std::filesystem::exists(dir / "m.ksnm"));
}

TEST(CliServe, HealthThenInterrupt) {
  TempDir dir;
  ServeProcess serve(write_serve_config(dir, 0));
  const std::string line = serve.read_line();
  std::smatch m;
  ASSERT_TRUE(std::regex_search(line, m, std::regex(":(\\d+)"))) << line;
  httplib::Client client("127.0.0.1", std::stoi(m[1]));
  auto res = client.Get("/api/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(nlohmann::json::parse(res->body), nlohmann::json({{"status", "ok"}}));
  serve.signal(SIGINT);
  EXPECT_EQ(serve.wait(), 0);
}

TEST(CliServe, OccupiedPort) {
  TempDir dir;
  httplib::Server blocker;
  const int port = blocker.bind_to_any_port("127.0.0.1");
  const auto r = run_command(cli() + " serve --config " + quote(write_serve_config(dir, port).string()));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliServe, MissingModelFailsBeforeBinding) {
  TempDir dir;
  const auto r = run_command(cli() + " serve --config " +
                             quote(write_serve_config(dir, 0, (dir / "absent.ksnm").string()).string()));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_FALSE(r.err.empty());
}
