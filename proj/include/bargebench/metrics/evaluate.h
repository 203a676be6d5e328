// metrics/evaluate.h


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

#ifndef BARGEBENCH_METRICS_EVALUATE_H_
#define BARGEBENCH_METRICS_EVALUATE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bargebench/aec/nlms.h"
#include "bargebench/kws/model.h"
#include "bargebench/metrics/report.h"

namespace bargebench {

struct EvalOptions {
  int threads = 1;
  /// When set, the mixed input is replaced by the NLMS residual against the
  /// playback reference before scoring.
  std::optional<NlmsOptions> nlms;
};

struct ScoredExample {
  std::string id;
  ScenarioKind kind = ScenarioKind::kNonPlayback;
  int y_utt = 0;
  double p_utt = 0.0;
};

/// P_utt of every manifest example, in manifest order.  Throws ConfigError
/// for an empty manifest or an example the model cannot read (a phoneme id
/// outside its vocabulary).
std::vector<ScoredExample> ScoreManifest(const KwsModel &model,
                                         const std::filesystem::path &manifest,
                                         const EvalOptions &opts = {});

EvalReport ReportFromScores(const std::vector<ScoredExample> &scores);

/// One {"id", "kind", "y_utt", "p_utt"} object per line.
std::string ScoresJsonl(const std::vector<ScoredExample> &scores);

/// Loads the checkpoint, scores the manifest and reports per kind.  meta
/// records the checkpoint, its hash, the manifest, the model config and the
/// echo canceller.
EvalReport Evaluate(const std::filesystem::path &checkpoint,
                    const std::filesystem::path &manifest,
                    const EvalOptions &opts = {},
                    std::vector<ScoredExample> *scores = nullptr);

}  // namespace bargebench

#endif  // BARGEBENCH_METRICS_EVALUATE_H_
