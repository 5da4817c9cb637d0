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

#include "hangul_coach/scoring.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>

#include "hangul_coach/error.hpp"

namespace hangul_coach {
namespace {

std::int64_t system_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

bool ranks_before(const AttemptRecord& a, const AttemptRecord& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  return a.id < b.id;
}

// Appends `line` with one write(2) and fsyncs. On a short write the file is
// truncated back to its previous length.
void append_durably(const std::filesystem::path& path, const std::string& line) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw Error(Errc::StorageFailure, "cannot open " + path.string() + ": " + std::strerror(errno));
  }
  const off_t before = ::lseek(fd, 0, SEEK_END);
  const ssize_t written = ::write(fd, line.data(), line.size());
  if (written != static_cast<ssize_t>(line.size())) {
    const int err = errno;
    if (before >= 0) [[maybe_unused]] const int rc = ::ftruncate(fd, before);
    ::close(fd);
    throw Error(Errc::StorageFailure, "write to " + path.string() + " failed: " + std::strerror(err));
  }
  if (::fsync(fd) != 0) {
    const int err = errno;
    ::close(fd);
    throw Error(Errc::StorageFailure, "fsync of " + path.string() + " failed: " + std::strerror(err));
  }
  ::close(fd);
}

}  // namespace

std::string_view to_string(Level level) {
  switch (level) {
    case Level::Beginner: return "Beginner";
    case Level::Intermediate: return "Intermediate";
    case Level::Advanced: return "Advanced";
    case Level::NativeLike: return "NativeLike";
  }
  return "Beginner";
}

Level parse_level(std::string_view name) {
  for (Level l : {Level::Beginner, Level::Intermediate, Level::Advanced, Level::NativeLike}) {
    if (to_string(l) == name) return l;
  }
  throw Error(Errc::InvalidArgument, "unknown level '" + std::string(name) + "'");
}

void LevelBands::validate() const {
  if (!(0.0 <= intermediate && intermediate <= advanced && advanced <= kNativeLikeThreshold)) {
    throw Error(Errc::InvalidConfig, "level bands must satisfy 0 <= intermediate <= advanced <= 0.9");
  }
}

Level level_of(double score, const LevelBands& bands) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw Error(Errc::OutOfRange, "similarity " + std::to_string(score) + " outside [0, 1]");
  }
  if (score > kNativeLikeThreshold) return Level::NativeLike;
  if (score > bands.advanced) return Level::Advanced;
  if (score > bands.intermediate) return Level::Intermediate;
  return Level::Beginner;
}

double top_percent(double score, std::span<const double> population) {
  if (population.empty()) throw Error(Errc::EmptyPopulation, "no scores to rank against");
  const auto at_or_above = static_cast<std::uint64_t>(
      std::count_if(population.begin(), population.end(), [score](double s) { return s >= score; }));
  const auto n = static_cast<std::uint64_t>(population.size());
  // Tenths of a percent, rounded half up in integer arithmetic.
  const std::uint64_t tenths = (2000 * at_or_above + n) / (2 * n);
  return static_cast<double>(tenths) / 10.0;
}

nlohmann::ordered_json to_json(const AttemptRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["user_id"] = r.user_id;
  j["sentence_id"] = r.sentence_id;
  j["transcript"] = r.transcript;
  j["similarity"] = r.similarity;
  j["level"] = std::string(to_string(r.level));
  j["total_cost"] = r.total_cost;
  j["timestamp"] = r.timestamp;
  return j;
}

AttemptRecord attempt_from_json(const nlohmann::json& j) {
  AttemptRecord r;
  r.id = j.at("id").get<std::uint64_t>();
  r.user_id = j.at("user_id").get<std::string>();
  r.sentence_id = j.at("sentence_id").get<std::string>();
  r.transcript = j.at("transcript").get<std::string>();
  r.similarity = j.at("similarity").get<double>();
  r.level = parse_level(j.at("level").get<std::string>());
  r.total_cost = j.at("total_cost").get<double>();
  r.timestamp = j.at("timestamp").get<std::int64_t>();
  return r;
}

std::vector<AttemptRecord> leaderboard(std::span<const AttemptRecord> records, std::size_t n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "leaderboard size must be at least 1");
  std::vector<AttemptRecord> sorted(records.begin(), records.end());
  std::stable_sort(sorted.begin(), sorted.end(), ranks_before);
  if (sorted.size() > n) sorted.resize(n);
  return sorted;
}

AttemptStore::AttemptStore(std::filesystem::path path, Clock clock)
    : path_(std::move(path)), clock_(clock ? std::move(clock) : Clock(system_seconds)) {
  std::error_code ec;
  if (!std::filesystem::exists(path_, ec)) return;
  std::ifstream in(path_);
  if (!in) throw Error(Errc::StorageFailure, "cannot read " + path_.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records_.push_back(attempt_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw Error(Errc::StorageFailure,
                  path_.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

AttemptRecord AttemptStore::record_attempt(AttemptRecord record) {
  if (!(record.similarity >= 0.0 && record.similarity <= 1.0)) {
    throw Error(Errc::OutOfRange, "similarity outside [0, 1]");
  }
  std::unique_lock lock(mutex_);
  record.id = records_.size() + 1;
  const std::int64_t last = records_.empty() ? 0 : records_.back().timestamp;
  record.timestamp = std::max(clock_(), last);
  append_durably(path_, to_json(record).dump() + "\n");
  records_.push_back(record);
  return record;
}

std::vector<AttemptRecord> AttemptStore::snapshot() const {
  std::shared_lock lock(mutex_);
  return records_;
}

std::vector<double> AttemptStore::scores(const std::optional<std::string>& sentence_id) const {
  std::shared_lock lock(mutex_);
  std::vector<double> out;
  out.reserve(records_.size());
  for (const AttemptRecord& r : records_) {
    if (!sentence_id || r.sentence_id == *sentence_id) out.push_back(r.similarity);
  }
  return out;
}

std::vector<AttemptRecord> AttemptStore::leaderboard(std::size_t n) const {
  const std::vector<AttemptRecord> snap = snapshot();
  return hangul_coach::leaderboard(snap, n);
}

std::size_t AttemptStore::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

}  // namespace hangul_coach
