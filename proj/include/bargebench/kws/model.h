// kws/model.h

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

// Keyword spotter over a mixed microphone signal and the device's own
// playback.  Stages: shared audio encoder, phoneme text encoder, optional
// mask refiner, causal self-attention over [audio; text] and a GRU
// discriminator with utterance and per-phoneme heads.

#ifndef BARGEBENCH_KWS_MODEL_H_
#define BARGEBENCH_KWS_MODEL_H_

#include <cstdint>
#include <vector>

#include "bargebench/audio/log-mel.h"
#include "bargebench/audio/waveform.h"
#include "bargebench/autodiff/ops.h"
#include "bargebench/autodiff/params.h"
#include "bargebench/kws/model-config.h"

namespace bargebench {

/// Log-mel of the first max_seconds of w, shifted and scaled by the config's
/// feature statistics.
FeatureMatrix ModelFeatures(const Waveform &w, const ModelConfig &cfg);

struct JointEmbedding {
  ad::Tensor rows;  // (T_a + T_t) x D
  int boundary = 0; // T_a
};

struct ModelOutput {
  ad::Tensor p_utt;   // [1]
  ad::Tensor p_phon;  // [T_t]
};

class KwsModel {
 public:
  /// Builds the parameter set for cfg with Glorot-uniform weights and zero
  /// biases drawn from init_seed.
  KwsModel(const ModelConfig &cfg, uint64_t init_seed);

  const ModelConfig &config() const { return cfg_; }
  ad::ParamStore &params() { return params_; }
  const ad::ParamStore &params() const { return params_; }

  /// T_f x n_mels features -> (stride * T_f) x D.  One parameter set serves
  /// mixed and playback audio.  Throws DegenerateSignalError on empty input.
  ad::Tensor AudioEncode(const FeatureMatrix &features) const;

  /// Phoneme ids -> T_t x D, non-negative.  Throws ConfigError on an id
  /// outside the vocabulary.
  ad::Tensor TextEncode(const std::vector<int> &phoneme_ids) const;

  /// sigmoid([E^m, E^p] W + b) per frame.
  ad::Tensor RefineMaskD(const ad::Tensor &em, const ad::Tensor &ep) const;
  /// sigmoid of a causal depthwise time convolution over E^m and E^p.
  ad::Tensor RefineMaskC(const ad::Tensor &em, const ad::Tensor &ep) const;
  static ad::Tensor ApplyMask(const ad::Tensor &em, const ad::Tensor &mask);
  /// E^a: E^m masked by the configured subnet, or E^m itself without one.
  ad::Tensor Refine(const ad::Tensor &em, const ad::Tensor &ep) const;

  /// Causal single-head self-attention over E^a stacked on E^t.  Throws
  /// ShapeError on an empty operand.
  JointEmbedding PatternExtract(const ad::Tensor &ea, const ad::Tensor &et) const;

  /// GRU over every joint row; P_utt from the last state, P_phon from the
  /// text rows.  Throws ShapeError without text rows.
  ModelOutput Discriminate(const JointEmbedding &joint) const;

  /// Full pass.  The playback path is skipped when there is no refiner.
  ModelOutput Forward(const FeatureMatrix &mixed, const FeatureMatrix &playback,
                      const std::vector<int> &phoneme_ids) const;

 private:
  const ad::Tensor &P(const char *name) const { return params_.Get(name); }

  ModelConfig cfg_;
  ad::ParamStore params_;
};

}  // namespace bargebench

#endif  // BARGEBENCH_KWS_MODEL_H_
