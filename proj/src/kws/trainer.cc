// kws/trainer.cc

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

#include "bargebench/kws/trainer.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "bargebench/autodiff/adam.h"
#include "bargebench/common/error.h"
#include "bargebench/common/log.h"
#include "bargebench/common/parallel.h"
#include "bargebench/common/rng.h"
#include "bargebench/kws/loss.h"

namespace bargebench {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

void ValidateTrainConfig(const TrainConfig &cfg) {
  if (cfg.steps < 1) throw ConfigError("train.steps must be >= 1");
  if (cfg.batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate))
    throw ConfigError("train.learning_rate must be positive");
  if (!(cfg.phoneme_weight >= 0.0) || !std::isfinite(cfg.phoneme_weight))
    throw ConfigError("train.phoneme_weight must be >= 0");
  if (!(cfg.validation_fraction >= 0.0 && cfg.validation_fraction < 1.0))
    throw ConfigError("train.validation_fraction must lie in [0, 1)");
  if (cfg.eval_every < 0) throw ConfigError("train.eval_every must be >= 0");
}

ordered_json TrainConfigToJson(const TrainConfig &cfg) {
  ordered_json j;
  j["seed"] = cfg.seed;
  j["steps"] = cfg.steps;
  j["batch_size"] = cfg.batch_size;
  j["learning_rate"] = cfg.learning_rate;
  j["phoneme_weight"] = cfg.phoneme_weight;
  j["validation_fraction"] = cfg.validation_fraction;
  j["eval_every"] = cfg.eval_every;
  return j;
}

TrainConfig TrainConfigFromJson(const ordered_json &j) {
  if (!j.is_object()) throw ConfigError("train config must be a table");
  TrainConfig cfg;
  for (const auto &[key, v] : j.items()) {
    auto int_field = [&](int *dst) {
      if (!v.is_number_integer())
        throw ConfigError("train." + key + " must be an integer");
      *dst = v.get<int>();
    };
    auto real_field = [&](double *dst) {
      if (!v.is_number()) throw ConfigError("train." + key + " must be a number");
      *dst = v.get<double>();
    };
    if (key == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0))
        throw ConfigError("train.seed must be a non-negative integer");
      cfg.seed = v.get<uint64_t>();
    } else if (key == "steps") {
      int_field(&cfg.steps);
    } else if (key == "batch_size") {
      int_field(&cfg.batch_size);
    } else if (key == "learning_rate") {
      real_field(&cfg.learning_rate);
    } else if (key == "phoneme_weight") {
      real_field(&cfg.phoneme_weight);
    } else if (key == "validation_fraction") {
      real_field(&cfg.validation_fraction);
    } else if (key == "eval_every") {
      int_field(&cfg.eval_every);
    } else {
      throw ConfigError("unknown key train." + key);
    }
  }
  ValidateTrainConfig(cfg);
  return cfg;
}

std::vector<TrainExample> LoadExamples(const fs::path &manifest,
                                       const ModelConfig &cfg, int threads) {
  const std::vector<ManifestEntry> entries = ReadManifest(manifest);
  if (entries.empty())
    throw ConfigError("manifest " + manifest.string() + " has no examples");
  const fs::path dir = manifest.parent_path();
  std::vector<TrainExample> out(entries.size());
  ParallelFor(entries.size(), threads, [&](size_t i) {
    LoadedExample ex = LoadExample(entries[i], dir);
    TrainExample &t = out[i];
    t.id = entries[i].id;
    t.kind = entries[i].kind;
    t.mixed = ModelFeatures(ex.mixed, cfg);
    t.playback = ModelFeatures(ex.playback_ref, cfg);
    t.phoneme_ids = entries[i].phoneme_ids;
    t.y_utt = entries[i].y_utt;
    t.y_phon = entries[i].y_phon;
  });
  return out;
}

TrainSplit SplitExamples(const std::vector<TrainExample> &examples,
                         double fraction, uint64_t seed) {
  TrainSplit split;
  std::vector<bool> held(examples.size(), false);
  for (ScenarioKind kind : kAllScenarioKinds) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < examples.size(); ++i)
      if (examples[i].kind == kind) idx.push_back(i);
    if (idx.empty() || fraction <= 0.0) continue;
    auto n = static_cast<size_t>(std::lround(fraction * idx.size()));
    if (idx.size() >= 2) n = std::clamp<size_t>(n, 1, idx.size() - 1);
    else n = 0;
    std::mt19937_64 gen(Mix64(seed, static_cast<uint64_t>(kind)));
    std::shuffle(idx.begin(), idx.end(), gen);
    for (size_t k = 0; k < n; ++k) held[idx[k]] = true;
  }
  for (size_t i = 0; i < examples.size(); ++i)
    (held[i] ? split.validation : split.train).push_back(i);
  return split;
}

BatchSampler::BatchSampler(const std::vector<TrainExample> &examples,
                           const std::vector<size_t> &pool, uint64_t seed)
    : state_(seed) {
  if (pool.empty()) throw ConfigError("no training examples");
  buckets_.resize(2 * kAllScenarioKinds.size());
  for (size_t i : pool) {
    size_t k = static_cast<size_t>(examples[i].kind);
    buckets_[2 * k + (examples[i].y_utt == 1 ? 0 : 1)].items.push_back(i);
  }
  for (size_t k = 0; k < kAllScenarioKinds.size(); ++k) {
    Bucket *pos = &buckets_[2 * k], *neg = &buckets_[2 * k + 1];
    if (pos->items.empty() && neg->items.empty()) continue;
    if (pos->items.empty()) pos = neg;
    if (neg->items.empty()) neg = pos;
    kinds_.push_back({pos, neg});
  }
  for (Bucket &b : buckets_) b.cursor = b.items.size();  // shuffle on first use
}

size_t BatchSampler::Draw(Bucket *b) {
  if (b->cursor == b->items.size()) {
    std::mt19937_64 gen(state_);
    state_ = SplitMix64(state_);
    std::sort(b->items.begin(), b->items.end());
    std::shuffle(b->items.begin(), b->items.end(), gen);
    b->cursor = 0;
  }
  return b->items[b->cursor++];
}

std::vector<size_t> BatchSampler::Next(int batch_size) {
  std::vector<size_t> batch;
  for (int i = 0; i < batch_size; ++i) {
    const size_t kind = (slot_ / 2) % kinds_.size();
    auto [pos, neg] = kinds_[kind];
    batch.push_back(Draw(slot_ % 2 == 0 ? pos : neg));
    ++slot_;
  }
  return batch;
}

double MeanLoss(const KwsModel &model, const std::vector<TrainExample> &examples,
                const std::vector<size_t> &indices, double phoneme_weight) {
  if (indices.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (size_t i : indices) {
    const TrainExample &ex = examples[i];
    ModelOutput out = model.Forward(ex.mixed, ex.playback, ex.phoneme_ids);
    sum += KwsLoss(out, ex.y_utt, ex.y_phon, phoneme_weight).item();
  }
  return sum / static_cast<double>(indices.size());
}

namespace {

ordered_json CheckpointMeta(const ModelConfig &mc, const TrainConfig &tc,
                            int step, double val_loss) {
  ordered_json meta;
  meta["model"] = ModelConfigToJson(mc);
  meta["train"] = TrainConfigToJson(tc);
  meta["step"] = step;
  if (std::isfinite(val_loss)) meta["validation_loss"] = val_loss;
  else meta["validation_loss"] = nullptr;
  return meta;
}

}  // namespace

TrainResult Train(const std::vector<TrainExample> &examples,
                  const ModelConfig &model_cfg, const TrainConfig &cfg,
                  const fs::path &out_dir) {
  ValidateTrainConfig(cfg);
  ValidateModelConfig(model_cfg);
  if (examples.empty()) throw ConfigError("training set is empty");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const TrainSplit split =
      SplitExamples(examples, cfg.validation_fraction, Mix64(cfg.seed, 2));
  if (split.train.empty()) throw ConfigError("validation split leaves no training data");
  KwsModel model(model_cfg, Mix64(cfg.seed, 0));
  BatchSampler sampler(examples, split.train, Mix64(cfg.seed, 1));
  ad::AdamOptions ao;
  ao.learning_rate = cfg.learning_rate;
  ad::Adam adam(&model.params(), ao);
  const int per_epoch = static_cast<int>(
      (split.train.size() + cfg.batch_size - 1) / cfg.batch_size);
  const int eval_every = cfg.eval_every > 0 ? cfg.eval_every : per_epoch;

  TrainResult res;
  res.checkpoint = out_dir / "model.ckpt.json";
  res.best_validation_loss = std::numeric_limits<double>::quiet_NaN();
  res.initial_train_loss = MeanLoss(model, examples, split.train, cfg.phoneme_weight);
  spdlog::info("train: {} train / {} validation examples, {} parameters, "
               "initial loss {:.5f}",
               split.train.size(), split.validation.size(),
               model.params().NumParameters(), res.initial_train_loss);

  std::ofstream log(out_dir / "train_log.jsonl", std::ios::binary | std::ios::trunc);
  std::ofstream vlog(out_dir / "validation.jsonl", std::ios::binary | std::ios::trunc);
  if (!log || !vlog) throw IoError("cannot write logs in " + out_dir.string());

  const double inv_b = 1.0 / cfg.batch_size;
  for (int step = 1; step <= cfg.steps; ++step) {
    double batch_loss = 0.0;
    try {
      for (size_t i : sampler.Next(cfg.batch_size)) {
        const TrainExample &ex = examples[i];
        ModelOutput out = model.Forward(ex.mixed, ex.playback, ex.phoneme_ids);
        ad::Tensor loss = KwsLoss(out, ex.y_utt, ex.y_phon, cfg.phoneme_weight);
        batch_loss += loss.item() * inv_b;
        ad::Backward(loss, inv_b);
      }
      if (!std::isfinite(batch_loss)) throw NumericError("loss is not finite");
      adam.Step();
    } catch (const NumericError &e) {
      throw NumericError("training step " + std::to_string(step) + ": " + e.what());
    }
    res.step_losses.push_back(batch_loss);
    ordered_json line;
    line["step"] = step;
    line["loss"] = batch_loss;
    line["lr"] = cfg.learning_rate;
    log << line.dump() << '\n';

    const bool last = step == cfg.steps;
    if (split.validation.empty()) {
      if (last) {
        SaveCheckpoint(model.params(), CheckpointMeta(model_cfg, cfg, step, NAN),
                       res.checkpoint.string());
        res.best_step = step;
      }
      continue;
    }
    if (step % eval_every != 0 && !last) continue;
    const double val =
        MeanLoss(model, examples, split.validation, cfg.phoneme_weight);
    ordered_json vline;
    vline["step"] = step;
    vline["validation_loss"] = val;
    vlog << vline.dump() << '\n';
    spdlog::info("train: step {} loss {:.5f} validation {:.5f}", step,
                 batch_loss, val);
    if (!(val >= res.best_validation_loss)) {  // also true while best is NaN
      res.best_validation_loss = val;
      res.best_step = step;
      SaveCheckpoint(model.params(), CheckpointMeta(model_cfg, cfg, step, val),
                     res.checkpoint.string());
    }
  }
  log.flush();
  vlog.flush();
  if (!log || !vlog) throw IoError("log write failed in " + out_dir.string());
  res.steps = cfg.steps;
  res.final_train_loss = MeanLoss(model, examples, split.train, cfg.phoneme_weight);
  res.checkpoint_hash = ad::HashFile(res.checkpoint.string());
  return res;
}

KwsModel LoadModel(const fs::path &checkpoint) {
  ad::Checkpoint ckpt = ad::ReadCheckpoint(checkpoint.string());
  if (!ckpt.meta.contains("model"))
    throw FormatError(checkpoint.string() + ": checkpoint has no model config");
  ModelConfig cfg;
  try {
    cfg = ModelConfigFromJson(ckpt.meta["model"]);
  } catch (const ConfigError &e) {
    throw FormatError(checkpoint.string() + ": " + e.what());
  }
  KwsModel model(cfg, 0);
  ad::ApplyCheckpoint(ckpt, &model.params());
  return model;
}

}  // namespace bargebench
