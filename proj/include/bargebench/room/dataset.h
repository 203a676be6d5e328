// room/dataset.h

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

// Dataset builder: scenario examples written as WAV pairs plus a JSONL
// manifest.  Example i is fully determined by Mix64(seed, i).

#ifndef BARGEBENCH_ROOM_DATASET_H_
#define BARGEBENCH_ROOM_DATASET_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bargebench/room/scenario.h"

namespace bargebench {

struct DatasetConfig {
  uint64_t seed = 0;
  /// Example counts, indexed by ScenarioKind.
  std::array<int, 4> counts = {0, 0, 0, 0};
  /// Query keywords (lexicon words).  Negatives speak a different entry.
  std::vector<std::string> keywords = {"kiro", "tamu"};
  /// Text files listing WAV paths, one per line, relative to the list.  Unset
  /// means the synthetic music / babble generators.
  std::optional<std::filesystem::path> music_list;
  std::optional<std::filesystem::path> speech_list;
  /// Length of music / speech playback excerpts.
  double playback_seconds = 0.6;
};

/// Throws ConfigError for negative counts, unknown keywords, fewer than two
/// keywords when negatives are needed, or a non-positive playback length.
void ValidateDatasetConfig(const DatasetConfig &cfg);

struct ExamplePlan {
  size_t index = 0;
  ScenarioKind kind = ScenarioKind::kNonPlayback;
  size_t ordinal = 0;  // position among examples of the same kind
  uint64_t seed = 0;   // Mix64(dataset seed, index)
};

/// Kinds interleaved round-robin (skipping exhausted kinds); even ordinals
/// are positives.
std::vector<ExamplePlan> PlanDataset(const DatasetConfig &cfg);

struct SourcePools {
  std::vector<Waveform> music;
  std::vector<Waveform> speech;
};

/// Reads the WAV lists named in cfg.  A list requested by a nonzero count
/// that yields no files is a ConfigError.
SourcePools LoadSourcePools(const DatasetConfig &cfg);

/// Everything SynthesizeExample needs, drawn from plan.seed.
struct ExampleDraw {
  ScenarioSpec spec;
  std::optional<Waveform> user_speech;
  std::optional<Waveform> playback_src;
  std::string keyword;
  std::vector<int> phoneme_ids;
  ExampleLabels labels;
};

ExampleDraw DrawExample(const DatasetConfig &cfg, const SourcePools &pools,
                        const ExamplePlan &plan);

ScenarioExample RenderExample(const ExampleDraw &draw,
                              ScenarioPaths *paths = nullptr);

/// One manifest line.  The schema is closed: kManifestFields lists every key.
struct ManifestEntry {
  std::string id;
  ScenarioKind kind = ScenarioKind::kNonPlayback;
  std::string mixed_path;     // relative to the manifest directory
  std::string playback_path;  // relative to the manifest directory
  std::string keyword;
  std::vector<int> phoneme_ids;
  int y_utt = 0;
  std::vector<int> y_phon;
  std::optional<double> sir_db;
  double rt60 = 0.0;
  double delay_s = 0.0;
  uint64_t seed = 0;
};

inline constexpr std::array<std::string_view, 12> kManifestFields = {
    "id",     "kind",        "mixed_path", "playback_path",
    "keyword", "phoneme_ids", "y_utt",      "y_phon",
    "sir_db", "rt60",        "delay_s",    "seed"};

namespace internal {
constexpr bool MentionsCleanSignal(std::string_view f) {
  for (std::string_view bad : {"clean", "user_speech", "target", "dry_user",
                               "source_speech", "reference_speech"})
    if (f.find(bad) != std::string_view::npos) return true;
  return false;
}
constexpr bool SchemaIsMixedOnly() {
  for (std::string_view f : kManifestFields)
    if (MentionsCleanSignal(f)) return false;
  return true;
}
}  // namespace internal

static_assert(internal::SchemaIsMixedOnly(),
              "manifest schema must not carry clean user speech");

/// One JSON object, keys in kManifestFields order, no whitespace.
std::string ManifestLine(const ManifestEntry &e);

/// Strict parse: throws FormatError on unknown or missing keys, wrong types,
/// labels outside {0, 1}, or y_phon / phoneme_ids length mismatch.
ManifestEntry ParseManifestLine(std::string_view line);

/// Reads a JSONL manifest; errors carry the line number.
std::vector<ManifestEntry> ReadManifest(const std::filesystem::path &path);

/// Peak level of the written WAVs.
inline constexpr double kWrittenPeak = 0.5;

/// Writes mixed/<id>.wav, playback/<id>.wav and manifest.jsonl under out_dir
/// and returns the entries.  Examples render on `threads` workers; the
/// manifest is written once at the end, through a temporary file.
std::vector<ManifestEntry> BuildDataset(const DatasetConfig &cfg,
                                        const std::filesystem::path &out_dir,
                                        int threads = 1);

/// Loaded audio for one manifest entry.
struct LoadedExample {
  ManifestEntry entry;
  Waveform mixed;
  Waveform playback_ref;
};

LoadedExample LoadExample(const ManifestEntry &entry,
                          const std::filesystem::path &manifest_dir);

}  // namespace bargebench

#endif  // BARGEBENCH_ROOM_DATASET_H_
