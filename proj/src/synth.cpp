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

#include "hangul_coach/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hangul_coach/corpus.hpp"
#include "hangul_coach/hangul.hpp"

namespace hangul_coach::synth {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

AudioClip sine(double frequency_hz, double seconds, int sample_rate, double amplitude) {
  AudioClip clip;
  clip.sample_rate = sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    clip.samples[i] = amplitude * std::sin(2.0 * std::numbers::pi * frequency_hz *
                                           static_cast<double>(i) / sample_rate);
  }
  return clip;
}

AudioClip tone_bursts(double frequency_hz, std::mt19937_64& rng, std::size_t samples) {
  constexpr double rate = kCanonicalSampleRate;
  AudioClip clip;
  clip.samples.resize(samples);
  for (double& s : clip.samples) s = uniform(rng, -0.003, 0.003);

  std::size_t pos = static_cast<std::size_t>(uniform(rng, 0.0, 0.2) * rate);
  while (pos < samples) {
    const auto len = static_cast<std::size_t>(uniform(rng, 0.15, 0.35) * rate);
    const double f = frequency_hz * uniform(rng, 0.98, 1.02);
    const double gain = uniform(rng, 0.3, 0.9);
    const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const std::size_t end = std::min(samples, pos + len);
    for (std::size_t i = pos; i < end; ++i) {
      const double t = static_cast<double>(i - pos) / rate;
      // 10 ms raised-cosine ramps keep the burst edges from clicking.
      const double edge = std::min({1.0, t / 0.01, static_cast<double>(end - i) / rate / 0.01});
      clip.samples[i] += gain * edge * std::sin(2.0 * std::numbers::pi * f * t + phase);
    }
    pos = end + static_cast<std::size_t>(uniform(rng, 0.05, 0.2) * rate);
  }
  for (double& s : clip.samples) s = std::clamp(s, -1.0, 1.0);
  return clip;
}

ToySet make_toy_set(std::uint64_t seed, std::size_t per_class) {
  std::mt19937_64 rng(seed);
  ToySet set;
  set.clips.reserve(2 * per_class);
  for (std::size_t i = 0; i < per_class; ++i) set.clips.push_back(tone_bursts(440.0, rng));
  for (std::size_t i = 0; i < per_class; ++i) set.clips.push_back(tone_bursts(880.0, rng));

  const std::size_t n = per_class;
  for (std::size_t i = 0; i < n; ++i) {
    // Alternate A-A and B-B positives; each clip meets a different partner.
    const std::size_t offset = i % 2 == 0 ? 0 : n;
    set.pairs.push_back({offset + i, offset + (i + 7) % n, 1});
    set.pairs.push_back({i, n + (i + 13) % n, 0});
  }
  return set;
}

std::vector<PairExample> featurize(const ToySet& set) {
  const MfccExtractor extractor{MfccConfig{}};
  std::vector<MfccMatrix> features;
  features.reserve(set.clips.size());
  for (const AudioClip& clip : set.clips) features.push_back(acoustic_features(clip, extractor));
  std::vector<PairExample> pairs;
  pairs.reserve(set.pairs.size());
  for (const PairSpec& p : set.pairs) pairs.push_back({features[p.a], features[p.b], p.label});
  return pairs;
}

AudioClip speak(std::string_view hangul_text, std::uint64_t voice_seed) {
  constexpr double rate = kCanonicalSampleRate;
  constexpr std::size_t syllable_len = static_cast<std::size_t>(0.14 * rate);
  constexpr std::size_t pause_len = static_cast<std::size_t>(0.06 * rate);
  std::mt19937_64 rng(voice_seed);
  const double base_pitch = uniform(rng, 110.0, 150.0);

  const TokenizedText tokens = tokenize(hangul_text);
  AudioClip clip;
  clip.samples.assign(pause_len, 0.0);
  for (std::size_t t = 0; t < tokens.tokens.size(); ++t) {
    const Syllable s = decompose(tokens.tokens[t].syllable);
    const double f0 = base_pitch * (1.0 + 0.02 * s.lead);
    const double tilt = 0.35 + 0.03 * s.vowel;
    const std::size_t start = clip.samples.size();
    clip.samples.resize(start + syllable_len, 0.0);
    for (std::size_t i = 0; i < syllable_len; ++i) {
      const double time = static_cast<double>(i) / rate;
      const double env = std::sin(std::numbers::pi * static_cast<double>(i) / syllable_len);
      double v = 0.0;
      for (int h = 1; h <= 8; ++h) v += std::pow(tilt, h - 1) * std::sin(2.0 * std::numbers::pi * f0 * h * time);
      // A closing consonant shows up as a short noisy tail.
      if (s.tail != 0 && i > syllable_len * 3 / 4) v += 0.2 * uniform(rng, -1.0, 1.0);
      clip.samples[start + i] = 0.3 * env * v;
    }
    const bool spaced = std::find(tokens.space_after.begin(), tokens.space_after.end(), t) !=
                        tokens.space_after.end();
    clip.samples.resize(clip.samples.size() + (spaced ? 2 * pause_len : pause_len / 2), 0.0);
  }
  for (double& s : clip.samples) s = std::clamp(s + uniform(rng, -0.002, 0.002), -1.0, 1.0);
  return clip;
}

}  // namespace hangul_coach::synth
