// audio/toy-corpus.h

// Copyright 2026  The BargeBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Synthetic phoneme corpus.  Every phoneme of a 20-entry inventory is a fixed
// (F1, F2) formant pair on a 5 x 4 grid; a keyword is rendered as a sequence
// of harmonic two-formant segments with exactly known sample alignments.
// The inventory and lexicon below are mirrored in data/phonemes.tsv and
// data/lexicon.tsv (a unit test keeps the two in sync).

#ifndef BARGEBENCH_AUDIO_TOY_CORPUS_H_
#define BARGEBENCH_AUDIO_TOY_CORPUS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bargebench/audio/waveform.h"

namespace bargebench {

inline constexpr int kNumPhonemes = 20;
inline constexpr int kMinKeywordPhonemes = 2;
inline constexpr int kMaxKeywordPhonemes = 6;
/// Nominal phoneme length before duration jitter.
inline constexpr double kNominalPhonemeSeconds = 0.080;

struct PhonemeInfo {
  int id;
  std::string_view symbol;
  double f1_hz;
  double f2_hz;
};

const std::array<PhonemeInfo, kNumPhonemes> &PhonemeInventory();

struct LexiconEntry {
  std::string_view word;
  std::string_view phonemes;  // space-separated inventory symbols
};

std::span<const LexiconEntry> Lexicon();

/// Looks a word up in the lexicon.  Throws ConfigError for unknown words.
std::vector<int> WordToPhonemes(std::string_view word);

/// Renders the inventory / lexicon as the committed TSV text.
std::string PhonemeInventoryTsv();
std::string LexiconTsv();

struct ToyKeyword {
  std::string text;
  std::vector<int> phoneme_ids;
  /// Half-open [start, end) sample spans, one per phoneme, ordered and
  /// non-overlapping.
  std::vector<std::pair<size_t, size_t>> alignment;
};

/// Renders a phoneme sequence.  Without a jitter seed every phoneme lasts
/// exactly kNominalPhonemeSeconds at a 120 Hz pitch.  With a seed the pitch
/// is scaled by a factor in [0.9, 1.1] and each phoneme's duration by a
/// factor in [0.85, 1.15], all drawn deterministically from the seed.
/// Throws ConfigError if an id is out of range or the length is not in
/// [2, 6].
std::pair<Waveform, ToyKeyword> SynthKeyword(
    std::span<const int> phoneme_ids, std::optional<uint64_t> jitter_seed,
    std::string text = {});

/// Same rendering without the 2..6 length restriction; used for babble.
Waveform SynthPhonemeSequence(std::span<const int> phoneme_ids,
                              std::optional<uint64_t> jitter_seed);

/// Polyphonic harmonic note sequence standing in for music playback.
Waveform SynthToyMusic(uint64_t seed, double seconds);

/// Random phoneme strings with short pauses, standing in for speech playback.
Waveform SynthToyBabble(uint64_t seed, double seconds);

}  // namespace bargebench

#endif  // BARGEBENCH_AUDIO_TOY_CORPUS_H_
