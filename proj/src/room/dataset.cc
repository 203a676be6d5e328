// room/dataset.cc

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

#include "bargebench/room/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "bargebench/audio/toy-corpus.h"
#include "bargebench/audio/wav-io.h"
#include "bargebench/common/error.h"
#include "bargebench/common/file-util.h"
#include "bargebench/common/parallel.h"
#include "bargebench/common/rng.h"

namespace bargebench {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// Sub-stream tags under an example seed.
constexpr uint64_t kLabelStream = 1;
constexpr uint64_t kUserStream = 2;
constexpr uint64_t kPlaybackStream = 3;
constexpr uint64_t kOnsetStream = 4;

std::vector<Waveform> LoadWavList(const fs::path &list) {
  std::ifstream in(list);
  if (!in) throw IoError("cannot open WAV list " + list.string());
  std::vector<Waveform> out;
  std::string line;
  while (std::getline(in, line)) {
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty() || line[0] == '#') continue;
    fs::path p(line);
    if (p.is_relative()) p = list.parent_path() / p;
    Waveform w = ReadWav(p.string());
    RequireOperatingRate(w, p.string().c_str());
    out.push_back(std::move(w));
  }
  return out;
}

Waveform Excerpt(const std::vector<Waveform> &pool, double seconds, Rng *rng) {
  const Waveform &w = pool[rng->Index(pool.size())];
  const auto n = static_cast<size_t>(std::lround(seconds * kSampleRate));
  if (w.size() <= n) return w;
  const size_t start = rng->Index(w.size() - n + 1);
  return Waveform(std::vector<double>(w.samples.begin() + start,
                                      w.samples.begin() + start + n),
                  kSampleRate);
}

std::vector<double> ScaledToPeak(const std::vector<double> &x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return x;
  std::vector<double> y(x.size());
  const double g = kWrittenPeak / peak;
  std::transform(x.begin(), x.end(), y.begin(), [g](double v) { return g * v; });
  return y;
}

[[noreturn]] void Bad(const std::string &what) {
  throw FormatError("manifest: " + what);
}

const Json &Field(const Json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end()) Bad(std::string("missing field '") + key + "'");
  return *it;
}

std::string StringField(const Json &j, const char *key) {
  const Json &v = Field(j, key);
  if (!v.is_string()) Bad(std::string(key) + " must be a string");
  return v.get<std::string>();
}

double NumberField(const Json &j, const char *key) {
  const Json &v = Field(j, key);
  if (!v.is_number()) Bad(std::string(key) + " must be a number");
  return v.get<double>();
}

std::vector<int> IntArrayField(const Json &j, const char *key, int lo, int hi) {
  const Json &v = Field(j, key);
  if (!v.is_array()) Bad(std::string(key) + " must be an array");
  std::vector<int> out;
  for (const Json &e : v) {
    if (!e.is_number_integer()) Bad(std::string(key) + " entries must be integers");
    auto x = e.get<int64_t>();
    if (x < lo || x > hi)
      Bad(std::string(key) + " entry " + std::to_string(x) + " outside [" +
          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

}  // namespace

void ValidateDatasetConfig(const DatasetConfig &cfg) {
  for (size_t k = 0; k < cfg.counts.size(); ++k)
    if (cfg.counts[k] < 0)
      throw ConfigError("count for " +
                        std::string(KindName(static_cast<ScenarioKind>(k))) +
                        " is negative");
  if (cfg.keywords.empty()) throw ConfigError("keywords must not be empty");
  std::set<std::string> seen;
  for (const auto &k : cfg.keywords) {
    WordToPhonemes(k);
    if (!seen.insert(k).second)
      throw ConfigError("keyword '" + k + "' listed twice");
  }
  const bool need_negatives = cfg.counts[0] > 1 || cfg.counts[1] > 1 ||
                              cfg.counts[2] > 1;
  if (need_negatives && cfg.keywords.size() < 2)
    throw ConfigError("negatives need at least two keywords");
  if (!(cfg.playback_seconds > 0.0))
    throw ConfigError("playback_seconds must be positive");
}

std::vector<ExamplePlan> PlanDataset(const DatasetConfig &cfg) {
  ValidateDatasetConfig(cfg);
  std::array<size_t, 4> used = {0, 0, 0, 0};
  size_t total = 0;
  for (int c : cfg.counts) total += static_cast<size_t>(c);
  std::vector<ExamplePlan> plan;
  plan.reserve(total);
  while (plan.size() < total) {
    for (size_t k = 0; k < 4; ++k) {
      if (used[k] >= static_cast<size_t>(cfg.counts[k])) continue;
      ExamplePlan p;
      p.index = plan.size();
      p.kind = static_cast<ScenarioKind>(k);
      p.ordinal = used[k]++;
      p.seed = Mix64(cfg.seed, p.index);
      plan.push_back(p);
    }
  }
  return plan;
}

SourcePools LoadSourcePools(const DatasetConfig &cfg) {
  SourcePools pools;
  auto load = [](const std::optional<fs::path> &list, int count,
                 const char *what) {
    std::vector<Waveform> out;
    if (!list || count == 0) return out;
    out = LoadWavList(*list);
    if (out.empty())
      throw ConfigError(std::string(what) + " pool " + list->string() +
                        " lists no WAV files");
    return out;
  };
  pools.music = load(cfg.music_list, cfg.counts[1], "music");
  pools.speech = load(cfg.speech_list, cfg.counts[2], "speech");
  return pools;
}

ExampleDraw DrawExample(const DatasetConfig &cfg, const SourcePools &pools,
                        const ExamplePlan &plan) {
  ExampleDraw d;
  d.spec = SampleScenario(plan.kind, plan.seed);
  Rng rng(Mix64(plan.seed, kLabelStream));
  const size_t nk = cfg.keywords.size();
  const size_t query = rng.Index(nk);
  const bool positive = plan.ordinal % 2 == 0 || nk < 2;
  size_t spoken = query;
  if (!positive) spoken = (query + 1 + rng.Index(nk - 1)) % nk;

  d.keyword = cfg.keywords[query];
  d.phoneme_ids = WordToPhonemes(d.keyword);
  const std::vector<int> spoken_ids = WordToPhonemes(cfg.keywords[spoken]);
  d.labels.y_utt = positive ? 1 : 0;
  for (int id : d.phoneme_ids)
    d.labels.y_phon.push_back(
        std::find(spoken_ids.begin(), spoken_ids.end(), id) != spoken_ids.end()
            ? 1 : 0);

  if (HasUserSpeech(plan.kind)) {
    // Leading silence from the same range as the loopback delay, so the
    // keyword onset alone cannot tell a user from the device's own echo.
    Rng onset(Mix64(plan.seed, kOnsetStream));
    const auto lead = static_cast<size_t>(
        std::lround(onset.Uniform(kMinDelay, kMaxDelay) * kSampleRate));
    Waveform speech = SynthKeyword(spoken_ids, Mix64(plan.seed, kUserStream)).first;
    speech.samples.insert(speech.samples.begin(), lead, 0.0);
    d.user_speech = std::move(speech);
  }

  Rng pick(Mix64(plan.seed, kPlaybackStream));
  const uint64_t src_seed = pick.NextU64();
  switch (plan.kind) {
    case ScenarioKind::kPlaybackMusic:
      d.playback_src = pools.music.empty()
                           ? SynthToyMusic(src_seed, cfg.playback_seconds)
                           : Excerpt(pools.music, cfg.playback_seconds, &pick);
      break;
    case ScenarioKind::kPlaybackSpeech:
      d.playback_src = pools.speech.empty()
                           ? SynthToyBabble(src_seed, cfg.playback_seconds)
                           : Excerpt(pools.speech, cfg.playback_seconds, &pick);
      break;
    case ScenarioKind::kSelfReferencing:
      // The device replays the query keyword in its own voice.
      d.playback_src = SynthKeyword(d.phoneme_ids, src_seed).first;
      d.labels.y_utt = 0;
      std::fill(d.labels.y_phon.begin(), d.labels.y_phon.end(), 0);
      break;
    case ScenarioKind::kNonPlayback:
      break;
  }
  return d;
}

ScenarioExample RenderExample(const ExampleDraw &draw, ScenarioPaths *paths) {
  return SynthesizeExample(draw.spec, draw.user_speech, draw.playback_src,
                           draw.keyword, draw.phoneme_ids, draw.labels, paths);
}

std::string ManifestLine(const ManifestEntry &e) {
  Json j;
  j["id"] = e.id;
  j["kind"] = std::string(KindName(e.kind));
  j["mixed_path"] = e.mixed_path;
  j["playback_path"] = e.playback_path;
  j["keyword"] = e.keyword;
  j["phoneme_ids"] = e.phoneme_ids;
  j["y_utt"] = e.y_utt;
  j["y_phon"] = e.y_phon;
  j["sir_db"] = e.sir_db ? Json(*e.sir_db) : Json(nullptr);
  j["rt60"] = e.rt60;
  j["delay_s"] = e.delay_s;
  j["seed"] = e.seed;
  return j.dump();
}

ManifestEntry ParseManifestLine(std::string_view line) {
  Json j = Json::parse(line, nullptr, false);
  if (j.is_discarded()) Bad("line is not valid JSON");
  if (!j.is_object()) Bad("line is not a JSON object");
  for (const auto &item : j.items()) {
    if (std::find(kManifestFields.begin(), kManifestFields.end(), item.key()) ==
        kManifestFields.end())
      Bad("unknown field '" + item.key() + "'");
  }
  ManifestEntry e;
  e.id = StringField(j, "id");
  try {
    e.kind = ParseKind(StringField(j, "kind"));
  } catch (const ConfigError &err) {
    Bad(err.what());
  }
  e.mixed_path = StringField(j, "mixed_path");
  e.playback_path = StringField(j, "playback_path");
  e.keyword = StringField(j, "keyword");
  e.phoneme_ids = IntArrayField(j, "phoneme_ids", 0, kNumPhonemes - 1);
  const Json &y = Field(j, "y_utt");
  if (!y.is_number_integer() || (y.get<int64_t>() != 0 && y.get<int64_t>() != 1))
    Bad("y_utt must be 0 or 1");
  e.y_utt = y.get<int>();
  e.y_phon = IntArrayField(j, "y_phon", 0, 1);
  if (e.y_phon.size() != e.phoneme_ids.size())
    Bad("y_phon and phoneme_ids lengths differ");
  const Json &sir = Field(j, "sir_db");
  if (!sir.is_null()) {
    if (!sir.is_number()) Bad("sir_db must be a number or null");
    e.sir_db = sir.get<double>();
  }
  if (HasSir(e.kind) != e.sir_db.has_value())
    Bad("sir_db presence does not match kind " + std::string(KindName(e.kind)));
  e.rt60 = NumberField(j, "rt60");
  e.delay_s = NumberField(j, "delay_s");
  const Json &seed = Field(j, "seed");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() &&
                                      seed.get<int64_t>() >= 0))
    Bad("seed must be a non-negative integer");
  e.seed = seed.get<uint64_t>();
  return e;
}

std::vector<ManifestEntry> ReadManifest(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::vector<ManifestEntry> out;
  std::string line;
  for (size_t n = 1; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    try {
      out.push_back(ParseManifestLine(line));
    } catch (const FormatError &e) {
      throw FormatError(path.string() + ":" + std::to_string(n) + ": " +
                        e.what());
    }
  }
  return out;
}

std::vector<ManifestEntry> BuildDataset(const DatasetConfig &cfg,
                                        const fs::path &out_dir, int threads) {
  const std::vector<ExamplePlan> plan = PlanDataset(cfg);
  const SourcePools pools = LoadSourcePools(cfg);
  std::error_code ec;
  fs::create_directories(out_dir / "mixed", ec);
  if (!ec) fs::create_directories(out_dir / "playback", ec);
  if (ec)
    throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<ManifestEntry> entries(plan.size());
  ParallelFor(plan.size(), threads, [&](size_t i) {
    const ExamplePlan &p = plan[i];
    ScenarioExample ex = RenderExample(DrawExample(cfg, pools, p));
    char id[32];
    std::snprintf(id, sizeof(id), "ex%06zu", p.index);
    ManifestEntry &e = entries[i];
    e.id = id;
    e.kind = p.kind;
    e.mixed_path = "mixed/" + e.id + ".wav";
    e.playback_path = "playback/" + e.id + ".wav";
    e.keyword = ex.keyword;
    e.phoneme_ids = ex.phoneme_ids;
    e.y_utt = ex.y_utt;
    e.y_phon = ex.y_phon;
    e.sir_db = ex.spec.sir_db;
    e.rt60 = ex.spec.room.rt60;
    e.delay_s = ex.spec.propagation_delay;
    e.seed = p.seed;
    WriteWav((out_dir / e.mixed_path).string(),
             Waveform(ScaledToPeak(ex.mixed.samples), kSampleRate));
    WriteWav((out_dir / e.playback_path).string(),
             Waveform(ScaledToPeak(ex.playback_ref.samples), kSampleRate));
  });

  std::string text;
  for (const auto &e : entries) text += ManifestLine(e) + '\n';
  WriteFileAtomic(out_dir / "manifest.jsonl", text);
  return entries;
}

LoadedExample LoadExample(const ManifestEntry &entry,
                          const fs::path &manifest_dir) {
  LoadedExample out;
  out.entry = entry;
  out.mixed = ReadWav((manifest_dir / entry.mixed_path).string());
  out.playback_ref = ReadWav((manifest_dir / entry.playback_path).string());
  RequireOperatingRate(out.mixed, "mixed");
  RequireOperatingRate(out.playback_ref, "playback");
  return out;
}

}  // namespace bargebench
