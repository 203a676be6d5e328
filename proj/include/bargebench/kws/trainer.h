// kws/trainer.h

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

#ifndef BARGEBENCH_KWS_TRAINER_H_
#define BARGEBENCH_KWS_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "bargebench/kws/model.h"
#include "bargebench/room/dataset.h"

namespace bargebench {

struct TrainConfig {
  /// Drives initialisation, the validation split and batch order.
  uint64_t seed = 0;
  int steps = 600;
  int batch_size = 8;
  double learning_rate = 1e-3;
  /// Weight of the phoneme term in the loss.
  double phoneme_weight = 1.0;
  /// Share of each kind held out for checkpoint selection.
  double validation_fraction = 0.1;
  /// Validation period in steps; 0 means once per pass over the train split.
  int eval_every = 0;
};

void ValidateTrainConfig(const TrainConfig &cfg);
nlohmann::ordered_json TrainConfigToJson(const TrainConfig &cfg);
/// Same rules as ModelConfigFromJson, keys under "train.".
TrainConfig TrainConfigFromJson(const nlohmann::ordered_json &j);

/// One manifest line with model features computed.
struct TrainExample {
  std::string id;
  ScenarioKind kind = ScenarioKind::kNonPlayback;
  FeatureMatrix mixed, playback;
  std::vector<int> phoneme_ids;
  int y_utt = 0;
  std::vector<int> y_phon;
};

/// Reads the manifest and its WAVs; features on `threads` workers.  An empty
/// manifest is a ConfigError.
std::vector<TrainExample> LoadExamples(const std::filesystem::path &manifest,
                                       const ModelConfig &cfg, int threads = 1);

struct TrainSplit {
  std::vector<size_t> train, validation;
};

/// Holds out round(fraction * n_k) examples of every kind k (at least one
/// when fraction > 0 and n_k >= 2), chosen by seed.  Indices ascend.
TrainSplit SplitExamples(const std::vector<TrainExample> &examples,
                         double fraction, uint64_t seed);

/// Endless batch stream.  Slots cycle over kinds in declaration order and
/// alternate positive / negative inside a kind, so a batch of 8 holds one
/// positive and one negative per kind.  A kind with a single class (all of
/// SelfReferencing) fills both of its slots from that class.  Every bucket is
/// walked in a fresh shuffle each time it runs out.
class BatchSampler {
 public:
  BatchSampler(const std::vector<TrainExample> &examples,
               const std::vector<size_t> &pool, uint64_t seed);
  std::vector<size_t> Next(int batch_size);

 private:
  struct Bucket {
    std::vector<size_t> items;
    size_t cursor = 0;
  };
  size_t Draw(Bucket *b);

  std::vector<std::pair<Bucket *, Bucket *>> kinds_;  // (positive, negative)
  std::vector<Bucket> buckets_;
  size_t slot_ = 0;
  uint64_t state_;
};

/// Mean loss over the listed examples, forward only.
double MeanLoss(const KwsModel &model, const std::vector<TrainExample> &examples,
                const std::vector<size_t> &indices, double phoneme_weight);

struct TrainResult {
  int steps = 0;
  int best_step = 0;
  double best_validation_loss = 0.0;  // NaN without a validation split
  double initial_train_loss = 0.0;    // whole train split, before step 1
  double final_train_loss = 0.0;      // whole train split, after the last step
  std::vector<double> step_losses;
  std::filesystem::path checkpoint;
  uint64_t checkpoint_hash = 0;
};

/// Adam on per-example graphs averaged over each batch.  Writes into out_dir:
///   model.ckpt.json   parameters with the lowest validation loss
///   train_log.jsonl   {step, loss, lr} per step
///   validation.jsonl  {step, validation_loss} per validation
/// A non-finite loss or gradient throws NumericError carrying the step.
TrainResult Train(const std::vector<TrainExample> &examples,
                  const ModelConfig &model_cfg, const TrainConfig &train_cfg,
                  const std::filesystem::path &out_dir);

/// Checkpoint meta: {"model": ..., "train": ..., "step": ..., ...}.
KwsModel LoadModel(const std::filesystem::path &checkpoint);

}  // namespace bargebench

#endif  // BARGEBENCH_KWS_TRAINER_H_
