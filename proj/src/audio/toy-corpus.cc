// audio/toy-corpus.cc

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

#include "bargebench/audio/toy-corpus.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bargebench/common/error.h"
#include "bargebench/common/rng.h"

namespace bargebench {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBasePitchHz = 120.0;
constexpr double kFormantBandwidthHz = 80.0;
constexpr double kHarmonicCeilingHz = 4000.0;
constexpr double kPhonemePeak = 0.4;
constexpr double kNoiseStd = 0.002;
constexpr double kFadeSeconds = 0.008;

// id = f1_index * 4 + f2_index.
constexpr std::array<PhonemeInfo, kNumPhonemes> kInventory = {{
    {0, "uw", 250, 1000},  {1, "uh", 250, 1500},  {2, "ih", 250, 2000},
    {3, "iy", 250, 2500},  {4, "ow", 400, 1000},  {5, "er", 400, 1500},
    {6, "ey", 400, 2000},  {7, "el", 400, 2500},  {8, "oh", 550, 1000},
    {9, "ax", 550, 1500},  {10, "eh", 550, 2000}, {11, "en", 550, 2500},
    {12, "aw", 700, 1000}, {13, "ah", 700, 1500}, {14, "ae", 700, 2000},
    {15, "em", 700, 2500}, {16, "aa", 850, 1000}, {17, "ay", 850, 1500},
    {18, "oy", 850, 2000}, {19, "ng", 850, 2500},
}};

constexpr std::array<LexiconEntry, 10> kLexicon = {{
    {"kiro", "iy er oh"},
    {"tamu", "ae em uw"},
    {"bixo", "ih ng ow"},
    {"sira", "ey ah aa"},
    {"nelo", "en eh ax ow"},
    {"hamoki", "aa em ow ih"},
    {"lumi", "el uh iy"},
    {"vadesa", "ay ey ax ae"},
    {"doru", "oh er uw"},
    {"pokaneli", "oy aw en el ih"},
}};

int SymbolToId(std::string_view sym) {
  for (const auto &p : kInventory)
    if (p.symbol == sym) return p.id;
  throw ConfigError("unknown phoneme symbol '" + std::string(sym) + "'");
}

double Resonance(double f, double center) {
  double x = (f - center) / kFormantBandwidthHz;
  return 1.0 / (1.0 + x * x);
}

// Appends one phoneme segment to `out` and returns its [start, end).
std::pair<size_t, size_t> RenderPhoneme(int id, double pitch_hz, size_t n,
                                        std::vector<double> *out) {
  const PhonemeInfo &ph = kInventory[id];
  std::vector<double> freqs, amps;
  double amp_sum = 0.0;
  for (int h = 1; h * pitch_hz < kHarmonicCeilingHz; ++h) {
    double f = h * pitch_hz;
    double a = Resonance(f, ph.f1_hz) + Resonance(f, ph.f2_hz);
    freqs.push_back(f);
    amps.push_back(a);
    amp_sum += a;
  }
  const size_t fade = static_cast<size_t>(kFadeSeconds * kSampleRate);
  const size_t start = out->size();
  for (size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / kSampleRate;
    double v = 0.0;
    for (size_t k = 0; k < freqs.size(); ++k)
      v += amps[k] * std::sin(kTwoPi * freqs[k] * t);
    double env = 1.0;
    if (i < fade)
      env = 0.5 - 0.5 * std::cos(std::numbers::pi * i / fade);
    else if (n - 1 - i < fade)
      env = 0.5 - 0.5 * std::cos(std::numbers::pi * (n - 1 - i) / fade);
    out->push_back(kPhonemePeak * env * v / amp_sum);
  }
  return {start, out->size()};
}

std::vector<std::pair<size_t, size_t>> RenderSequence(
    std::span<const int> ids, std::optional<uint64_t> jitter_seed,
    std::vector<double> *samples) {
  for (int id : ids) {
    if (id < 0 || id >= kNumPhonemes)
      throw ConfigError("phoneme id " + std::to_string(id) +
                        " outside inventory [0, " +
                        std::to_string(kNumPhonemes) + ")");
  }
  Rng rng(jitter_seed.value_or(0));
  double pitch = kBasePitchHz;
  if (jitter_seed) pitch *= rng.Uniform(0.9, 1.1);
  const double nominal = kNominalPhonemeSeconds * kSampleRate;
  std::vector<std::pair<size_t, size_t>> spans;
  for (int id : ids) {
    double factor = jitter_seed ? rng.Uniform(0.85, 1.15) : 1.0;
    auto n = static_cast<size_t>(std::lround(nominal * factor));
    spans.push_back(RenderPhoneme(id, pitch, n, samples));
  }
  Rng noise(Mix64(jitter_seed.value_or(0), 0x6e6f697365ULL));
  for (double &v : *samples) v += kNoiseStd * noise.Normal();
  return spans;
}

}  // namespace

const std::array<PhonemeInfo, kNumPhonemes> &PhonemeInventory() {
  return kInventory;
}

std::span<const LexiconEntry> Lexicon() { return kLexicon; }

std::vector<int> WordToPhonemes(std::string_view word) {
  for (const auto &e : kLexicon) {
    if (e.word != word) continue;
    std::vector<int> ids;
    std::istringstream is{std::string(e.phonemes)};
    std::string sym;
    while (is >> sym) ids.push_back(SymbolToId(sym));
    return ids;
  }
  throw ConfigError("keyword '" + std::string(word) + "' not in lexicon");
}

std::string PhonemeInventoryTsv() {
  std::ostringstream os;
  os << "id\tsymbol\tf1_hz\tf2_hz\n";
  for (const auto &p : kInventory)
    os << p.id << '\t' << p.symbol << '\t' << p.f1_hz << '\t' << p.f2_hz
       << '\n';
  return os.str();
}

std::string LexiconTsv() {
  std::ostringstream os;
  os << "word\tphonemes\n";
  for (const auto &e : kLexicon) os << e.word << '\t' << e.phonemes << '\n';
  return os.str();
}

std::pair<Waveform, ToyKeyword> SynthKeyword(
    std::span<const int> phoneme_ids, std::optional<uint64_t> jitter_seed,
    std::string text) {
  const int n = static_cast<int>(phoneme_ids.size());
  if (n < kMinKeywordPhonemes || n > kMaxKeywordPhonemes)
    throw ConfigError("keyword must have 2..6 phonemes, got " +
                      std::to_string(n));
  Waveform w;
  ToyKeyword kw;
  kw.text = std::move(text);
  kw.phoneme_ids.assign(phoneme_ids.begin(), phoneme_ids.end());
  kw.alignment = RenderSequence(phoneme_ids, jitter_seed, &w.samples);
  return {std::move(w), std::move(kw)};
}

Waveform SynthPhonemeSequence(std::span<const int> phoneme_ids,
                              std::optional<uint64_t> jitter_seed) {
  Waveform w;
  RenderSequence(phoneme_ids, jitter_seed, &w.samples);
  return w;
}

Waveform SynthToyMusic(uint64_t seed, double seconds) {
  // Two voices over a pentatonic scale, three decaying partials per note.
  static constexpr std::array<double, 10> kScale = {
      196.0, 220.0, 246.9, 293.7, 329.6, 392.0, 440.0, 493.9, 587.3, 659.3};
  Rng rng(seed);
  const auto total = static_cast<size_t>(std::lround(seconds * kSampleRate));
  std::vector<double> out(total, 0.0);
  for (int voice = 0; voice < 2; ++voice) {
    size_t pos = 0;
    while (pos < total) {
      auto len = static_cast<size_t>(rng.Uniform(0.12, 0.30) * kSampleRate);
      double f0 = kScale[rng.Index(kScale.size())] * (voice == 0 ? 1.0 : 0.5);
      double gain = rng.Uniform(0.10, 0.18);
      for (size_t i = 0; i < len && pos + i < total; ++i) {
        double t = static_cast<double>(i) / kSampleRate;
        double env = std::exp(-4.0 * t) * std::min(1.0, t / 0.01);
        double v = std::sin(kTwoPi * f0 * t) +
                   0.5 * std::sin(kTwoPi * 2 * f0 * t) +
                   0.25 * std::sin(kTwoPi * 3 * f0 * t);
        out[pos + i] += gain * env * v;
      }
      pos += len;
    }
  }
  for (double &v : out) v += kNoiseStd * rng.Normal();
  return Waveform(std::move(out), kSampleRate);
}

Waveform SynthToyBabble(uint64_t seed, double seconds) {
  Rng rng(seed);
  const auto total = static_cast<size_t>(std::lround(seconds * kSampleRate));
  std::vector<double> out;
  out.reserve(total);
  while (out.size() < total) {
    std::vector<int> ids(2 + rng.Index(4));
    for (int &id : ids) id = static_cast<int>(rng.Index(kNumPhonemes));
    Waveform word = SynthPhonemeSequence(ids, rng.NextU64());
    out.insert(out.end(), word.samples.begin(), word.samples.end());
    auto pause = static_cast<size_t>(rng.Uniform(0.02, 0.08) * kSampleRate);
    for (size_t i = 0; i < pause; ++i) out.push_back(kNoiseStd * rng.Normal());
  }
  out.resize(total);
  return Waveform(std::move(out), kSampleRate);
}

}  // namespace bargebench
