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

#include "hangul_coach/hangul.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>

#include "hangul_coach/error.hpp"

namespace hangul_coach {
namespace {

constexpr int kSyllablesPerLead = kVowelCount * kTailCount;  // 588

// Costs are kept in thirds so every DP comparison is exact integer math.
constexpr int kIndelUnits = 3;
constexpr double kUnitsPerCost = 3.0;

std::string codepoint_label(char32_t ch) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(ch));
  return buf;
}

// Decodes one UTF-8 scalar at `pos`; returns nullopt on malformed input.
std::optional<char32_t> decode_utf8(std::string_view s, std::size_t& pos) {
  const auto lead = static_cast<unsigned char>(s[pos]);
  std::size_t extra = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    cp = lead;
  } else if ((lead & 0xE0) == 0xC0) {
    cp = lead & 0x1F;
    extra = 1;
  } else if ((lead & 0xF0) == 0xE0) {
    cp = lead & 0x0F;
    extra = 2;
  } else if ((lead & 0xF8) == 0xF0) {
    cp = lead & 0x07;
    extra = 3;
  } else {
    return std::nullopt;
  }
  if (pos + extra >= s.size()) return std::nullopt;
  for (std::size_t i = 1; i <= extra; ++i) {
    const auto c = static_cast<unsigned char>(s[pos + i]);
    if ((c & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (c & 0x3F);
  }
  if (cp > 0x10FFFF) return std::nullopt;
  pos += extra + 1;
  return cp;
}

bool is_ascii_space(char32_t ch) {
  return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\f' || ch == '\v';
}

bool is_ascii_punct(char32_t ch) {
  return (ch >= 0x21 && ch <= 0x2F) || (ch >= 0x3A && ch <= 0x40) || (ch >= 0x5B && ch <= 0x60) ||
         (ch >= 0x7B && ch <= 0x7E);
}

struct Run {
  std::size_t begin;
  std::size_t end;
  SpanFlag flag;
};

// Splits `text` into spans: each token owns the bytes from its start up to
// the next token's start; bytes before the first token go to the first span.
std::vector<Span> build_spans(const TokenizedText& t, const std::vector<SpanFlag>& flags) {
  std::vector<Span> spans;
  if (t.tokens.empty()) {
    if (!t.text.empty()) spans.push_back({t.text, SpanFlag::Ok});
    return spans;
  }
  std::vector<Run> runs;
  for (std::size_t i = 0; i < t.tokens.size(); ++i) {
    const std::size_t begin = i == 0 ? 0 : t.tokens[i].begin;
    const std::size_t end = i + 1 < t.tokens.size() ? t.tokens[i + 1].begin : t.text.size();
    if (!runs.empty() && runs.back().flag == flags[i]) {
      runs.back().end = end;
    } else {
      runs.push_back({begin, end, flags[i]});
    }
  }
  spans.reserve(runs.size());
  for (const Run& r : runs) spans.push_back({t.text.substr(r.begin, r.end - r.begin), r.flag});
  return spans;
}

}  // namespace

Syllable decompose(char32_t ch) {
  if (!is_hangul_syllable(ch)) {
    throw Error(Errc::NotHangulSyllable, codepoint_label(ch) + " is not a precomposed Hangul syllable");
  }
  const int offset = static_cast<int>(ch - kFirstSyllable);
  return Syllable{ch, offset / kSyllablesPerLead, (offset % kSyllablesPerLead) / kTailCount,
                  offset % kTailCount};
}

char32_t compose(int lead, int vowel, int tail) {
  if (lead < 0 || lead >= kLeadCount || vowel < 0 || vowel >= kVowelCount || tail < 0 ||
      tail >= kTailCount) {
    throw Error(Errc::IndexOutOfRange, "jamo indices (" + std::to_string(lead) + ", " +
                                           std::to_string(vowel) + ", " + std::to_string(tail) +
                                           ") out of range");
  }
  return kFirstSyllable + static_cast<char32_t>((lead * kVowelCount + vowel) * kTailCount + tail);
}

int jamo_mismatches(const Syllable& a, const Syllable& b) {
  return (a.lead != b.lead) + (a.vowel != b.vowel) + (a.tail != b.tail);
}

double jamo_distance(const Syllable& a, const Syllable& b) {
  return jamo_mismatches(a, b) / kUnitsPerCost;
}

std::vector<char32_t> TokenizedText::syllables() const {
  std::vector<char32_t> out;
  out.reserve(tokens.size());
  for (const SyllableToken& t : tokens) out.push_back(t.syllable);
  return out;
}

TokenizedText tokenize(std::string_view text) {
  TokenizedText out;
  out.text = std::string(text);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t begin = pos;
    const std::optional<char32_t> cp = decode_utf8(text, pos);
    if (!cp) {
      throw Error(Errc::UnsupportedCharacter, "invalid UTF-8 at byte " + std::to_string(begin));
    }
    if (is_hangul_syllable(*cp)) {
      out.tokens.push_back({*cp, begin, pos});
    } else if (is_ascii_space(*cp)) {
      if (!out.tokens.empty() &&
          (out.space_after.empty() || out.space_after.back() != out.tokens.size() - 1)) {
        out.space_after.push_back(out.tokens.size() - 1);
      }
    } else if (!is_ascii_punct(*cp)) {
      throw Error(Errc::UnsupportedCharacter,
                  codepoint_label(*cp) + " at byte " + std::to_string(begin));
    }
  }
  return out;
}

AlignmentScript align_syllables(std::span<const char32_t> reference,
                                std::span<const char32_t> hypothesis) {
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();
  std::vector<Syllable> ref;
  std::vector<Syllable> hyp;
  ref.reserve(n);
  hyp.reserve(m);
  for (char32_t c : reference) ref.push_back(decompose(c));
  for (char32_t c : hypothesis) hyp.push_back(decompose(c));

  // dist[i][j]: cost in thirds of aligning ref[0..i) with hyp[0..j).
  const std::size_t width = m + 1;
  std::vector<int> dist((n + 1) * width, 0);
  auto at = [&](std::size_t i, std::size_t j) -> int& { return dist[i * width + j]; };
  for (std::size_t i = 1; i <= n; ++i) at(i, 0) = static_cast<int>(i) * kIndelUnits;
  for (std::size_t j = 1; j <= m; ++j) at(0, j) = static_cast<int>(j) * kIndelUnits;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const int diag = at(i - 1, j - 1) + jamo_mismatches(ref[i - 1], hyp[j - 1]);
      at(i, j) = std::min({diag, at(i - 1, j) + kIndelUnits, at(i, j - 1) + kIndelUnits});
    }
  }

  AlignmentScript script;
  script.total_cost = at(n, m) / kUnitsPerCost;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const int units = jamo_mismatches(ref[i - 1], hyp[j - 1]);
      if (at(i, j) == at(i - 1, j - 1) + units) {
        script.ops.push_back({units == 0 ? EditKind::Match : EditKind::Substitute, i - 1, j - 1,
                              units / kUnitsPerCost});
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + kIndelUnits) {
      script.ops.push_back({EditKind::Delete, i - 1, EditOp::kNone, 1.0});
      --i;
      continue;
    }
    script.ops.push_back({EditKind::Insert, EditOp::kNone, j - 1, 1.0});
    --j;
  }
  std::reverse(script.ops.begin(), script.ops.end());
  return script;
}

AlignmentScript align(std::string_view reference, std::string_view hypothesis) {
  const std::vector<char32_t> ref = tokenize(reference).syllables();
  const std::vector<char32_t> hyp = tokenize(hypothesis).syllables();
  return align_syllables(ref, hyp);
}

std::string_view to_string(SpanFlag flag) {
  switch (flag) {
    case SpanFlag::Ok: return "ok";
    case SpanFlag::Mispronounced: return "mispronounced";
    case SpanFlag::Missing: return "missing";
    case SpanFlag::Extra: return "extra";
  }
  return "ok";
}

HighlightedDiff highlight(const AlignmentScript& script, std::string_view reference,
                          std::string_view hypothesis) {
  const TokenizedText ref = tokenize(reference);
  const TokenizedText hyp = tokenize(hypothesis);
  std::vector<std::optional<SpanFlag>> ref_flags(ref.tokens.size());
  std::vector<std::optional<SpanFlag>> hyp_flags(hyp.tokens.size());

  auto assign = [](std::vector<std::optional<SpanFlag>>& flags, std::size_t index, SpanFlag flag,
                   const char* side) {
    if (index >= flags.size()) {
      throw Error(Errc::ScriptMismatch, std::string(side) + " index " + std::to_string(index) +
                                            " exceeds token count " + std::to_string(flags.size()));
    }
    if (flags[index]) {
      throw Error(Errc::ScriptMismatch,
                  std::string(side) + " token " + std::to_string(index) + " appears twice");
    }
    flags[index] = flag;
  };

  for (const EditOp& op : script.ops) {
    switch (op.kind) {
      case EditKind::Match:
        assign(ref_flags, op.ref_index, SpanFlag::Ok, "reference");
        assign(hyp_flags, op.hyp_index, SpanFlag::Ok, "hypothesis");
        break;
      case EditKind::Substitute:
        assign(ref_flags, op.ref_index, SpanFlag::Mispronounced, "reference");
        assign(hyp_flags, op.hyp_index, SpanFlag::Mispronounced, "hypothesis");
        break;
      case EditKind::Delete:
        assign(ref_flags, op.ref_index, SpanFlag::Missing, "reference");
        break;
      case EditKind::Insert:
        assign(hyp_flags, op.hyp_index, SpanFlag::Extra, "hypothesis");
        break;
    }
  }

  auto unwrap = [](const std::vector<std::optional<SpanFlag>>& flags, const char* side) {
    std::vector<SpanFlag> out;
    out.reserve(flags.size());
    for (std::size_t i = 0; i < flags.size(); ++i) {
      if (!flags[i]) {
        throw Error(Errc::ScriptMismatch,
                    std::string(side) + " token " + std::to_string(i) + " not covered by the script");
      }
      out.push_back(*flags[i]);
    }
    return out;
  };

  HighlightedDiff diff;
  diff.reference_spans = build_spans(ref, unwrap(ref_flags, "reference"));
  diff.hypothesis_spans = build_spans(hyp, unwrap(hyp_flags, "hypothesis"));
  return diff;
}

nlohmann::ordered_json to_json(const HighlightedDiff& diff) {
  auto side = [](const std::vector<Span>& spans) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Span& s : spans) {
      arr.push_back({{"text", s.text}, {"flag", std::string(to_string(s.flag))}});
    }
    return arr;
  };
  nlohmann::ordered_json j;
  j["reference_spans"] = side(diff.reference_spans);
  j["hypothesis_spans"] = side(diff.hypothesis_spans);
  return j;
}

std::string render_ansi(const HighlightedDiff& diff) {
  auto line = [](const std::vector<Span>& spans) {
    std::string out;
    for (const Span& s : spans) {
      if (s.flag == SpanFlag::Ok) {
        out += s.text;
        continue;
      }
      const std::size_t last = s.text.find_last_not_of(" \t\r\n\f\v");
      const std::size_t cut = last == std::string::npos ? 0 : last + 1;
      out += "\x1b[31m";
      out.append(s.text, 0, cut);
      out += "\x1b[0m";
      out.append(s.text, cut);
    }
    return out;
  };
  return "answer: " + line(diff.reference_spans) + "\nuser:   " + line(diff.hypothesis_spans) + "\n";
}

}  // namespace hangul_coach
