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

#ifndef HANGUL_COACH_SCORING_HPP
#define HANGUL_COACH_SCORING_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace hangul_coach {

/// Ordered: a higher enumerator is a better level.
enum class Level { Beginner, Intermediate, Advanced, NativeLike };

std::string_view to_string(Level level);
/// Throws Error{InvalidArgument}.
Level parse_level(std::string_view name);

/// Scores strictly above this are native-like. Not configurable.
inline constexpr double kNativeLikeThreshold = 0.9;

/// Lower band edges; each band is (edge, next edge].
struct LevelBands {
  double advanced = 0.75;
  double intermediate = 0.5;

  /// Throws Error{InvalidConfig} unless 0 <= intermediate <= advanced <= 0.9.
  void validate() const;
};

/// Throws Error{OutOfRange} for scores outside [0, 1].
Level level_of(double score, const LevelBands& bands = {});

/// Share of the population scoring at least `score`, in percent, rounded to
/// one decimal. Throws Error{EmptyPopulation}.
double top_percent(double score, std::span<const double> population);

struct AttemptRecord {
  std::uint64_t id = 0;
  std::string user_id;
  std::string sentence_id;
  std::string transcript;
  double similarity = 0.0;
  Level level = Level::Beginner;
  double total_cost = 0.0;
  std::int64_t timestamp = 0;  // UTC seconds

  bool operator==(const AttemptRecord&) const = default;
};

nlohmann::ordered_json to_json(const AttemptRecord& record);
AttemptRecord attempt_from_json(const nlohmann::json& j);

/// Top-n by similarity, ties broken by earlier timestamp, then lower id.
std::vector<AttemptRecord> leaderboard(std::span<const AttemptRecord> records, std::size_t n);

/// Append-only JSON-lines file of attempts. Writes are serialized; readers
/// work on snapshots.
class AttemptStore {
 public:
  using Clock = std::function<std::int64_t()>;

  /// Loads any existing records. A missing file is an empty store.
  /// Throws Error{StorageFailure} on unreadable or corrupt files.
  explicit AttemptStore(std::filesystem::path path, Clock clock = {});

  /// Assigns id (count + 1) and a timestamp no earlier than the previous
  /// one, appends one line and fsyncs. Returns the stored record.
  /// Throws Error{StorageFailure}; the file is unchanged on failure.
  AttemptRecord record_attempt(AttemptRecord record);

  std::vector<AttemptRecord> snapshot() const;
  /// Similarity of every attempt, optionally restricted to one sentence.
  std::vector<double> scores(const std::optional<std::string>& sentence_id = std::nullopt) const;
  std::vector<AttemptRecord> leaderboard(std::size_t n) const;
  std::size_t size() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  Clock clock_;
  mutable std::shared_mutex mutex_;
  std::vector<AttemptRecord> records_;
};

}  // namespace hangul_coach

#endif  // HANGUL_COACH_SCORING_HPP
