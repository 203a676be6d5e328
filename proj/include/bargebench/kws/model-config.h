// kws/model-config.h

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

#ifndef BARGEBENCH_KWS_MODEL_CONFIG_H_
#define BARGEBENCH_KWS_MODEL_CONFIG_H_

#include <cstddef>
#include <string_view>

#include "json.hpp"

#include "bargebench/audio/toy-corpus.h"

namespace bargebench {

enum class MaskSubnet { kNone, kD, kC };

/// "none", "D", "C".
std::string_view MaskSubnetName(MaskSubnet m);
/// Throws ConfigError for anything else.
MaskSubnet ParseMaskSubnet(std::string_view name);

struct ModelConfig {
  MaskSubnet mask_subnet = MaskSubnet::kNone;
  /// Time taps of the Subnet C depthwise convolution.
  int kernel_width = 4;
  int n_mels = 40;
  int conv1_channels = 8;
  int conv2_channels = 32;
  int embed_dim = 128;
  /// Stride and kernel width of the transposed-conv upsampler.
  int upsample_stride = 2;
  int attention_heads = 1;
  int gru_dim = 128;
  int phoneme_vocab = kNumPhonemes;
  /// Model input is the first max_seconds of audio.
  double max_seconds = 0.5;
  /// Log-mel features enter the network as (x - mean) / std.
  double feature_mean = -5.0;
  double feature_std = 5.0;
};

/// Throws ConfigError naming the field.
void ValidateModelConfig(const ModelConfig &cfg);

nlohmann::ordered_json ModelConfigToJson(const ModelConfig &cfg);
/// Missing keys keep their defaults; unknown keys and bad types are
/// ConfigErrors.  The result is validated.
ModelConfig ModelConfigFromJson(const nlohmann::ordered_json &j);

/// Mel bins left after the two stride-2 frequency convolutions.
int FrontendBins(const ModelConfig &cfg);

/// Exact trainable scalar count, by arithmetic on the layer sizes.
size_t ParamCount(const ModelConfig &cfg);

}  // namespace bargebench

#endif  // BARGEBENCH_KWS_MODEL_CONFIG_H_
