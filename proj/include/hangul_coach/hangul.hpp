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

// Hangul syllable arithmetic, jamo-weighted alignment of a transcript
// against its reference sentence, and the flagged-span diff shown to the
// learner.

#ifndef HANGUL_COACH_HANGUL_HPP
#define HANGUL_COACH_HANGUL_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace hangul_coach {

inline constexpr char32_t kFirstSyllable = 0xAC00;
inline constexpr char32_t kLastSyllable = 0xD7A3;
inline constexpr int kLeadCount = 19;
inline constexpr int kVowelCount = 21;
inline constexpr int kTailCount = 28;  // index 0 is "no tail"

inline bool is_hangul_syllable(char32_t ch) { return ch >= kFirstSyllable && ch <= kLastSyllable; }

struct Syllable {
  char32_t codepoint;
  int lead;
  int vowel;
  int tail;
  bool operator==(const Syllable&) const = default;
};

/// Throws Error{NotHangulSyllable}.
Syllable decompose(char32_t ch);
/// Throws Error{IndexOutOfRange}.
char32_t compose(int lead, int vowel, int tail);

/// Number of differing {lead, vowel, tail} components, 0..3.
int jamo_mismatches(const Syllable& a, const Syllable& b);
/// jamo_mismatches / 3.
double jamo_distance(const Syllable& a, const Syllable& b);

/// One alignment token: a syllable and its byte range in the source text.
struct SyllableToken {
  char32_t syllable;
  std::size_t begin;
  std::size_t end;
};

struct TokenizedText {
  std::string text;
  std::vector<SyllableToken> tokens;
  /// Token indices followed directly by whitespace.
  std::vector<std::size_t> space_after;

  std::vector<char32_t> syllables() const;
};

/// Accepts Hangul syllables, ASCII whitespace and ASCII punctuation. Only
/// syllables become tokens. Throws Error{UnsupportedCharacter}.
TokenizedText tokenize(std::string_view text);

enum class EditKind { Match, Substitute, Delete, Insert };

struct EditOp {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  EditKind kind;
  std::size_t ref_index = kNone;
  std::size_t hyp_index = kNone;
  double cost = 0.0;

  bool operator==(const EditOp&) const = default;
};

struct AlignmentScript {
  std::vector<EditOp> ops;
  double total_cost = 0.0;
};

/// Minimum-cost edit script over syllables. Costs: match 0, substitute
/// jamo_distance, insert 1, delete 1. The backtrace prefers
/// Match > Substitute > Delete > Insert so results are deterministic.
AlignmentScript align_syllables(std::span<const char32_t> reference,
                                std::span<const char32_t> hypothesis);
/// Tokenizes both texts (spacing and punctuation are ignored) and aligns.
AlignmentScript align(std::string_view reference, std::string_view hypothesis);

enum class SpanFlag { Ok, Mispronounced, Missing, Extra };

std::string_view to_string(SpanFlag flag);

struct Span {
  std::string text;
  SpanFlag flag;
  bool operator==(const Span&) const = default;
};

struct HighlightedDiff {
  std::vector<Span> reference_spans;
  std::vector<Span> hypothesis_spans;
};

/// Flags each syllable from the script and merges runs of equal flags.
/// Whitespace and punctuation join the span before them (or the first span
/// when they lead the text), so span texts concatenate back to the inputs.
/// Throws Error{ScriptMismatch} when the script does not fit the texts.
HighlightedDiff highlight(const AlignmentScript& script, std::string_view reference,
                          std::string_view hypothesis);

/// {"reference_spans":[{"text":..,"flag":..}],"hypothesis_spans":[..]}.
/// The CLI and the service both serialize diffs through this.
nlohmann::ordered_json to_json(const HighlightedDiff& diff);

/// One line per side; non-ok spans are wrapped in ESC[31m ... ESC[0m with
/// trailing whitespace kept outside the colored run.
std::string render_ansi(const HighlightedDiff& diff);

}  // namespace hangul_coach

#endif  // HANGUL_COACH_HANGUL_HPP
