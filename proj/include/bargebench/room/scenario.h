// room/scenario.h

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

// The four barge-in capture conditions and their synthesis from dry sources.

#ifndef BARGEBENCH_ROOM_SCENARIO_H_
#define BARGEBENCH_ROOM_SCENARIO_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bargebench/audio/waveform.h"
#include "bargebench/room/room-acoustics.h"

namespace bargebench {

enum class ScenarioKind {
  kNonPlayback,
  kPlaybackMusic,
  kPlaybackSpeech,
  kSelfReferencing,
};

inline constexpr std::array<ScenarioKind, 4> kAllScenarioKinds = {
    ScenarioKind::kNonPlayback, ScenarioKind::kPlaybackMusic,
    ScenarioKind::kPlaybackSpeech, ScenarioKind::kSelfReferencing};

/// "NonPlayback", "PlaybackMusic", ...
std::string_view KindName(ScenarioKind kind);
/// Inverse of KindName; throws ConfigError for unknown names.
ScenarioKind ParseKind(std::string_view name);

inline bool HasPlayback(ScenarioKind k) { return k != ScenarioKind::kNonPlayback; }
inline bool HasUserSpeech(ScenarioKind k) {
  return k != ScenarioKind::kSelfReferencing;
}
inline bool HasSir(ScenarioKind k) {
  return k == ScenarioKind::kPlaybackMusic || k == ScenarioKind::kPlaybackSpeech;
}

inline constexpr double kMinFloorArea = 10.0, kMaxFloorArea = 50.0;
inline constexpr double kMinAspect = 0.5, kMaxAspect = 2.0;
inline constexpr double kMinHeight = 2.5, kMaxHeight = 5.0;
inline constexpr double kMinRt60 = 0.2, kMaxRt60 = 0.6;
inline constexpr double kMinDelay = 0.01, kMaxDelay = 0.1;
inline constexpr double kMinSirDb = -12.0, kMaxSirDb = 3.0;
inline constexpr double kWallMargin = 0.1;
inline constexpr int kMaxPlacementTries = 1000;

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kNonPlayback;
  RoomSpec room;
  Vec3 user_pos, speaker_pos, mic_pos;
  double propagation_delay = 0.0;  // s
  std::optional<double> sir_db;    // Playback* only
  uint64_t seed = 0;
};

/// Draws a scenario from a generator seeded by `seed`.  Positions are drawn
/// over the whole room and redrawn until every one clears each wall by
/// `margin` and both sources are at least `margin` from the mic; after
/// kMaxPlacementTries failures a GeometryError asks for a smaller margin.
ScenarioSpec SampleScenario(ScenarioKind kind, uint64_t seed,
                            double margin = kWallMargin);

/// Throws ConfigError naming the first field that breaks the sampling
/// intervals or the sir_db presence rule.
void ValidateScenario(const ScenarioSpec &spec);

struct SirMix {
  Waveform mixed;
  double gain = 0.0;
};

/// mixed = target + g echo with g = sqrt(P_t / (P_e 10^(sir/10))), P being
/// SupportPower.  The shorter input is zero-padded.  Throws
/// DegenerateSignalError if either input is silent.
SirMix MixAtSir(const Waveform &target, const Waveform &echo, double sir_db);

/// Microphone capture and labels for one scenario.  There is deliberately no
/// clean user speech member.
struct ScenarioExample {
  Waveform mixed;
  Waveform playback_ref;
  std::string keyword;
  std::vector<int> phoneme_ids;
  int y_utt = 0;
  std::vector<int> y_phon;
  ScenarioSpec spec;
};

struct ExampleLabels {
  int y_utt = 0;
  std::vector<int> y_phon;
};

/// Intermediate signals, exposed so tests can rebuild each path on its own.
struct ScenarioPaths {
  std::vector<double> user_path;   // user speech * RIR(user -> mic)
  std::vector<double> echo_path;   // delayed playback * RIR(speaker -> mic)
  double absorption = 0.0;
};

/// Renders both acoustic paths of `spec`.  Either source may be absent, in
/// which case its path is empty.
ScenarioPaths RenderPaths(const ScenarioSpec &spec,
                          const std::optional<Waveform> &user_speech,
                          const std::optional<Waveform> &playback_src);

/// Builds the capture for spec.kind.  NonPlayback takes user speech only,
/// SelfReferencing takes the playback only, Playback* take both.
/// SelfReferencing forces all labels to 0.  mixed and playback_ref share a
/// length (the longer of the two).  Throws ConfigError naming the offending
/// argument when the presence rules or label shapes are violated.  If
/// \`paths\` is given it receives the unscaled paths that went into mixed.
ScenarioExample SynthesizeExample(const ScenarioSpec &spec,
                                  const std::optional<Waveform> &user_speech,
                                  const std::optional<Waveform> &playback_src,
                                  std::string keyword,
                                  std::vector<int> phoneme_ids,
                                  ExampleLabels labels,
                                  ScenarioPaths *paths = nullptr);

}  // namespace bargebench

#endif  // BARGEBENCH_ROOM_SCENARIO_H_
