// room/scenario.cc

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

#include "bargebench/room/scenario.h"

#include <algorithm>
#include <cmath>

#include "bargebench/common/error.h"
#include "bargebench/common/rng.h"

namespace bargebench {

namespace {

constexpr std::array<std::string_view, 4> kKindNames = {
    "NonPlayback", "PlaybackMusic", "PlaybackSpeech", "SelfReferencing"};

bool Clears(const RoomSpec &room, const Vec3 &p, double margin) {
  return p.x >= margin && p.x <= room.length - margin && p.y >= margin &&
         p.y <= room.width - margin && p.z >= margin &&
         p.z <= room.height - margin;
}

void RequireRange(double v, double lo, double hi, const char *field) {
  if (!(v >= lo && v <= hi))
    throw ConfigError(std::string(field) + "=" + std::to_string(v) +
                      " outside [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
}

std::vector<double> RenderPath(const ScenarioSpec &spec, const Vec3 &src,
                               const std::vector<double> &dry, double alpha,
                               double delay_s) {
  const double delay = delay_s * kSampleRate;
  const auto shift = static_cast<size_t>(std::floor(delay));
  RirOptions opts;
  opts.order = ReflectionOrder(spec.room);
  opts.absorption = alpha;
  opts.extra_delay_samples = delay - static_cast<double>(shift);
  Rir rir = GenerateRir(spec.room, src, spec.mic_pos, opts);
  return Convolve(DelaySamples(dry, shift), rir.taps);
}

}  // namespace

std::string_view KindName(ScenarioKind kind) {
  return kKindNames[static_cast<size_t>(kind)];
}

ScenarioKind ParseKind(std::string_view name) {
  for (size_t i = 0; i < kKindNames.size(); ++i)
    if (kKindNames[i] == name) return static_cast<ScenarioKind>(i);
  throw ConfigError("unknown scenario kind '" + std::string(name) + "'");
}

ScenarioSpec SampleScenario(ScenarioKind kind, uint64_t seed, double margin) {
  Rng rng(seed);
  ScenarioSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  const double area = rng.Uniform(kMinFloorArea, kMaxFloorArea);
  const double aspect = rng.Uniform(kMinAspect, kMaxAspect);
  const double height = rng.Uniform(kMinHeight, kMaxHeight);
  const double rt60 = rng.Uniform(kMinRt60, kMaxRt60);
  spec.room = MakeRoom(area, aspect, height, rt60);
  auto draw = [&rng, &spec] {
    return Vec3{rng.Uniform(0.0, spec.room.length),
                rng.Uniform(0.0, spec.room.width),
                rng.Uniform(0.0, spec.room.height)};
  };
  bool placed = false;
  for (int t = 0; t < kMaxPlacementTries && !placed; ++t) {
    spec.user_pos = draw();
    spec.speaker_pos = draw();
    spec.mic_pos = draw();
    placed = Clears(spec.room, spec.user_pos, margin) &&
             Clears(spec.room, spec.speaker_pos, margin) &&
             Clears(spec.room, spec.mic_pos, margin) &&
             Distance(spec.user_pos, spec.mic_pos) >= margin &&
             Distance(spec.speaker_pos, spec.mic_pos) >= margin;
  }
  if (!placed)
    throw GeometryError("no placement cleared a " + std::to_string(margin) +
                        " m margin in " + std::to_string(kMaxPlacementTries) +
                        " tries; widen the room or lower the margin");
  spec.propagation_delay = rng.Uniform(kMinDelay, kMaxDelay);
  const double sir = rng.Uniform(kMinSirDb, kMaxSirDb);
  if (HasSir(kind)) spec.sir_db = sir;
  return spec;
}

void ValidateScenario(const ScenarioSpec &spec) {
  const RoomSpec &r = spec.room;
  RequireRange(r.floor_area, kMinFloorArea, kMaxFloorArea, "floor_area");
  RequireRange(r.height, kMinHeight, kMaxHeight, "height");
  RequireRange(r.rt60, kMinRt60, kMaxRt60, "rt60");
  if (std::abs(r.length * r.width - r.floor_area) > 1e-9)
    throw ConfigError("length*width differs from floor_area");
  RequireInside(r, spec.user_pos, kWallMargin, "user");
  RequireInside(r, spec.speaker_pos, kWallMargin, "speaker");
  RequireInside(r, spec.mic_pos, kWallMargin, "mic");
  RequireRange(spec.propagation_delay, kMinDelay, kMaxDelay,
               "propagation_delay");
  if (HasSir(spec.kind)) {
    if (!spec.sir_db) throw ConfigError("sir_db missing for playback kind");
    RequireRange(*spec.sir_db, kMinSirDb, kMaxSirDb, "sir_db");
  } else if (spec.sir_db) {
    throw ConfigError("sir_db must be absent for " +
                      std::string(KindName(spec.kind)));
  }
}

SirMix MixAtSir(const Waveform &target, const Waveform &echo, double sir_db) {
  if (target.sample_rate != echo.sample_rate)
    throw ConfigError("target and echo sample rates differ");
  const double pt = SupportPower(target.samples);
  const double pe = SupportPower(echo.samples);
  if (pt == 0.0) throw DegenerateSignalError("target signal is silent");
  if (pe == 0.0) throw DegenerateSignalError("echo signal is silent");
  SirMix out;
  out.gain = std::sqrt(pt / (pe * std::pow(10.0, sir_db / 10.0)));
  std::vector<double> mixed = target.samples;
  PadTo(&mixed, std::max(target.size(), echo.size()));
  for (size_t i = 0; i < echo.size(); ++i) mixed[i] += out.gain * echo.samples[i];
  out.mixed = Waveform(std::move(mixed), target.sample_rate);
  return out;
}

ScenarioPaths RenderPaths(const ScenarioSpec &spec,
                          const std::optional<Waveform> &user_speech,
                          const std::optional<Waveform> &playback_src) {
  ScenarioPaths paths;
  paths.absorption =
      CalibratedAbsorption(spec.room, ReflectionOrder(spec.room));
  if (user_speech)
    paths.user_path = RenderPath(spec, spec.user_pos, user_speech->samples,
                                 paths.absorption, 0.0);
  if (playback_src)
    paths.echo_path = RenderPath(spec, spec.speaker_pos, playback_src->samples,
                                 paths.absorption, spec.propagation_delay);
  return paths;
}

ScenarioExample SynthesizeExample(const ScenarioSpec &spec,
                                  const std::optional<Waveform> &user_speech,
                                  const std::optional<Waveform> &playback_src,
                                  std::string keyword,
                                  std::vector<int> phoneme_ids,
                                  ExampleLabels labels,
                                  ScenarioPaths *paths_out) {
  const ScenarioKind kind = spec.kind;
  if (HasUserSpeech(kind) != user_speech.has_value())
    throw ConfigError(std::string("user_speech must be ") +
                      (HasUserSpeech(kind) ? "present" : "absent") + " for " +
                      std::string(KindName(kind)));
  if (HasPlayback(kind) != playback_src.has_value())
    throw ConfigError(std::string("playback_src must be ") +
                      (HasPlayback(kind) ? "present" : "absent") + " for " +
                      std::string(KindName(kind)));
  if (HasSir(kind) && !spec.sir_db)
    throw ConfigError("sir_db missing for " + std::string(KindName(kind)));
  if (labels.y_phon.size() != phoneme_ids.size())
    throw ConfigError("y_phon length " + std::to_string(labels.y_phon.size()) +
                      " != phoneme count " +
                      std::to_string(phoneme_ids.size()));
  if (user_speech) {
    ValidateWaveform(*user_speech);
    RequireOperatingRate(*user_speech, "user_speech");
  }
  if (playback_src) {
    ValidateWaveform(*playback_src);
    RequireOperatingRate(*playback_src, "playback_src");
  }

  ScenarioPaths paths = RenderPaths(spec, user_speech, playback_src);
  if (paths_out) *paths_out = paths;
  ScenarioExample ex;
  switch (kind) {
    case ScenarioKind::kNonPlayback:
      ex.mixed = Waveform(std::move(paths.user_path), kSampleRate);
      break;
    case ScenarioKind::kSelfReferencing:
      ex.mixed = Waveform(std::move(paths.echo_path), kSampleRate);
      break;
    default:
      ex.mixed = MixAtSir(Waveform(std::move(paths.user_path), kSampleRate),
                          Waveform(std::move(paths.echo_path), kSampleRate),
                          *spec.sir_db)
                     .mixed;
      break;
  }
  ex.playback_ref.sample_rate = kSampleRate;
  if (playback_src) ex.playback_ref.samples = playback_src->samples;
  const size_t n = std::max(ex.mixed.size(), ex.playback_ref.size());
  PadTo(&ex.mixed.samples, n);
  PadTo(&ex.playback_ref.samples, n);

  ex.keyword = std::move(keyword);
  ex.phoneme_ids = std::move(phoneme_ids);
  ex.y_utt = labels.y_utt;
  ex.y_phon = std::move(labels.y_phon);
  if (kind == ScenarioKind::kSelfReferencing) {
    ex.y_utt = 0;
    std::fill(ex.y_phon.begin(), ex.y_phon.end(), 0);
  }
  ex.spec = spec;
  return ex;
}

}  // namespace bargebench
