// metrics/evaluate.cc


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

#include "bargebench/metrics/evaluate.h"

#include <fmt/format.h>

#include "bargebench/common/error.h"
#include "bargebench/common/file-util.h"
#include "bargebench/common/log.h"
#include "bargebench/common/parallel.h"
#include "bargebench/kws/trainer.h"
#include "bargebench/room/dataset.h"

namespace bargebench {

namespace fs = std::filesystem;

std::vector<ScoredExample> ScoreManifest(const KwsModel &model,
                                         const fs::path &manifest,
                                         const EvalOptions &opts) {
  if (opts.nlms) ValidateNlmsOptions(*opts.nlms);
  const std::vector<ManifestEntry> entries = ReadManifest(manifest);
  if (entries.empty())
    throw ConfigError("manifest " + manifest.string() + " has no examples");
  const int vocab = model.config().phoneme_vocab;
  for (const ManifestEntry &e : entries)
    for (int id : e.phoneme_ids)
      if (id < 0 || id >= vocab)
        throw ConfigError(fmt::format(
            "example {} uses phoneme id {} but the model vocabulary is {}",
            e.id, id, vocab));
  const fs::path dir = manifest.parent_path();
  std::vector<ScoredExample> out(entries.size());
  ParallelFor(entries.size(), opts.threads, [&](size_t i) {
    LoadedExample ex = LoadExample(entries[i], dir);
    if (opts.nlms)
      ex.mixed = NlmsProcess(ex.mixed, ex.playback_ref, *opts.nlms).residual;
    ModelOutput o = model.Forward(ModelFeatures(ex.mixed, model.config()),
                                  ModelFeatures(ex.playback_ref, model.config()),
                                  entries[i].phoneme_ids);
    out[i] = {entries[i].id, entries[i].kind, entries[i].y_utt, o.p_utt.item()};
  });
  return out;
}

EvalReport ReportFromScores(const std::vector<ScoredExample> &scores) {
  std::vector<ScenarioKind> kinds;
  ScoredSet set;
  for (const ScoredExample &s : scores) {
    kinds.push_back(s.kind);
    set.scores.push_back(s.p_utt);
    set.labels.push_back(s.y_utt);
  }
  return MakeEvalReport(kinds, set);
}

std::string ScoresJsonl(const std::vector<ScoredExample> &scores) {
  std::string out;
  for (const ScoredExample &s : scores) {
    nlohmann::ordered_json j = {{"id", s.id},
                                {"kind", KindName(s.kind)},
                                {"y_utt", s.y_utt},
                                {"p_utt", s.p_utt}};
    out += j.dump() + "\n";
  }
  return out;
}

EvalReport Evaluate(const fs::path &checkpoint, const fs::path &manifest,
                    const EvalOptions &opts, std::vector<ScoredExample> *scores) {
  KwsModel model = LoadModel(checkpoint);
  std::vector<ScoredExample> s = ScoreManifest(model, manifest, opts);
  EvalReport report = ReportFromScores(s);
  nlohmann::ordered_json aec = nullptr;
  if (opts.nlms)
    aec = {{"type", "nlms"},
           {"taps", opts.nlms->taps},
           {"step", opts.nlms->step},
           {"eps", opts.nlms->eps}};
  report.meta = {{"checkpoint", checkpoint.string()},
                 {"checkpoint_hash", fmt::format("{:016x}", Fnv1a64(ReadFile(checkpoint)))},
                 {"manifest", manifest.string()},
                 {"model", ModelConfigToJson(model.config())},
                 {"aec", aec}};
  for (const KindReport &k : report.kinds)
    spdlog::info("eval: {} n={} mae={:.4f}", KindName(k.kind), k.n, k.mae);
  if (scores) *scores = std::move(s);
  return report;
}

}  // namespace bargebench
