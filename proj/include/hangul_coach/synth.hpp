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

// Deterministic synthetic audio for fixtures, demos and the training
// smoke test. Nothing here is used on the request path.

#ifndef HANGUL_COACH_SYNTH_HPP
#define HANGUL_COACH_SYNTH_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "hangul_coach/audio.hpp"
#include "hangul_coach/siamese.hpp"

namespace hangul_coach::synth {

/// Samples giving exactly 200 MFCC frames with the default 400/160 framing.
inline constexpr std::size_t kToyClipSamples = 400 + 199 * 160;

/// Portable uniform draw in [lo, hi).
double uniform(std::mt19937_64& rng, double lo, double hi);

AudioClip sine(double frequency_hz, double seconds, int sample_rate = kCanonicalSampleRate,
               double amplitude = 1.0);

/// A few tone bursts at roughly `frequency_hz` with jittered onsets,
/// lengths, pitch (+-2%) and gain over a faint noise floor.
AudioClip tone_bursts(double frequency_hz, std::mt19937_64& rng,
                      std::size_t samples = kToyClipSamples);

/// Labelled pair by index into a clip list.
struct PairSpec {
  std::size_t a;
  std::size_t b;
  int label;
};

/// Two-class toy set: class A bursts near 440 Hz (indices 0..n-1), class B
/// near 880 Hz (indices n..2n-1). Positives pair clips within a class,
/// negatives across; n of each.
struct ToySet {
  std::vector<AudioClip> clips;
  std::vector<PairSpec> pairs;
};
ToySet make_toy_set(std::uint64_t seed, std::size_t per_class = 40);

/// Runs every clip through the acoustic front end and builds PairExamples.
std::vector<PairExample> featurize(const ToySet& set);

/// A rough voiced rendering of a Hangul sentence: one harmonic burst per
/// syllable whose pitch and spectral tilt follow the jamo indices. Only
/// meant to give fixtures distinct, repeatable audio.
AudioClip speak(std::string_view hangul_text, std::uint64_t voice_seed);

}  // namespace hangul_coach::synth

#endif  // HANGUL_COACH_SYNTH_HPP
