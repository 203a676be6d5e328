// kws/model-config.cc

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

#include "bargebench/kws/model-config.h"

#include <cmath>
#include <string>

#include "bargebench/common/error.h"

namespace bargebench {

using nlohmann::ordered_json;

std::string_view MaskSubnetName(MaskSubnet m) {
  switch (m) {
    case MaskSubnet::kNone: return "none";
    case MaskSubnet::kD: return "D";
    case MaskSubnet::kC: return "C";
  }
  return "none";
}

MaskSubnet ParseMaskSubnet(std::string_view name) {
  for (MaskSubnet m : {MaskSubnet::kNone, MaskSubnet::kD, MaskSubnet::kC})
    if (MaskSubnetName(m) == name) return m;
  throw ConfigError("model.mask_subnet must be one of none, D, C; got '" +
                    std::string(name) + "'");
}

namespace {

void RequirePositive(int v, const char *field) {
  if (v < 1)
    throw ConfigError(std::string("model.") + field + " must be >= 1, got " +
                      std::to_string(v));
}

int HalvedBins(int w) { return (w - 1) / 2 + 1; }  // k3 s2 p1

}  // namespace

void ValidateModelConfig(const ModelConfig &cfg) {
  RequirePositive(cfg.kernel_width, "kernel_width");
  RequirePositive(cfg.n_mels, "n_mels");
  RequirePositive(cfg.conv1_channels, "conv1_channels");
  RequirePositive(cfg.conv2_channels, "conv2_channels");
  RequirePositive(cfg.embed_dim, "embed_dim");
  RequirePositive(cfg.upsample_stride, "upsample_stride");
  RequirePositive(cfg.gru_dim, "gru_dim");
  RequirePositive(cfg.phoneme_vocab, "phoneme_vocab");
  if (cfg.attention_heads != 1)
    throw ConfigError("model.attention_heads: only single-head attention is "
                      "implemented, got " +
                      std::to_string(cfg.attention_heads));
  if (!(cfg.max_seconds >= 0.05) || !std::isfinite(cfg.max_seconds))
    throw ConfigError("model.max_seconds must be at least 0.05");
  if (!std::isfinite(cfg.feature_mean))
    throw ConfigError("model.feature_mean must be finite");
  if (!(cfg.feature_std > 0.0) || !std::isfinite(cfg.feature_std))
    throw ConfigError("model.feature_std must be positive");
}

ordered_json ModelConfigToJson(const ModelConfig &cfg) {
  ordered_json j;
  j["mask_subnet"] = std::string(MaskSubnetName(cfg.mask_subnet));
  j["kernel_width"] = cfg.kernel_width;
  j["n_mels"] = cfg.n_mels;
  j["conv1_channels"] = cfg.conv1_channels;
  j["conv2_channels"] = cfg.conv2_channels;
  j["embed_dim"] = cfg.embed_dim;
  j["upsample_stride"] = cfg.upsample_stride;
  j["attention_heads"] = cfg.attention_heads;
  j["gru_dim"] = cfg.gru_dim;
  j["phoneme_vocab"] = cfg.phoneme_vocab;
  j["max_seconds"] = cfg.max_seconds;
  j["feature_mean"] = cfg.feature_mean;
  j["feature_std"] = cfg.feature_std;
  return j;
}

ModelConfig ModelConfigFromJson(const ordered_json &j) {
  if (!j.is_object()) throw ConfigError("model config must be a table");
  ModelConfig cfg;
  for (const auto &[key, v] : j.items()) {
    auto int_field = [&](int *dst) {
      if (!v.is_number_integer())
        throw ConfigError("model." + key + " must be an integer");
      *dst = v.get<int>();
    };
    auto real_field = [&](double *dst) {
      if (!v.is_number())
        throw ConfigError("model." + key + " must be a number");
      *dst = v.get<double>();
    };
    if (key == "mask_subnet") {
      if (!v.is_string()) throw ConfigError("model.mask_subnet must be a string");
      cfg.mask_subnet = ParseMaskSubnet(v.get<std::string>());
    } else if (key == "kernel_width") {
      int_field(&cfg.kernel_width);
    } else if (key == "n_mels") {
      int_field(&cfg.n_mels);
    } else if (key == "conv1_channels") {
      int_field(&cfg.conv1_channels);
    } else if (key == "conv2_channels") {
      int_field(&cfg.conv2_channels);
    } else if (key == "embed_dim") {
      int_field(&cfg.embed_dim);
    } else if (key == "upsample_stride") {
      int_field(&cfg.upsample_stride);
    } else if (key == "attention_heads") {
      int_field(&cfg.attention_heads);
    } else if (key == "gru_dim") {
      int_field(&cfg.gru_dim);
    } else if (key == "phoneme_vocab") {
      int_field(&cfg.phoneme_vocab);
    } else if (key == "max_seconds") {
      real_field(&cfg.max_seconds);
    } else if (key == "feature_mean") {
      real_field(&cfg.feature_mean);
    } else if (key == "feature_std") {
      real_field(&cfg.feature_std);
    } else {
      throw ConfigError("unknown key model." + key);
    }
  }
  ValidateModelConfig(cfg);
  return cfg;
}

int FrontendBins(const ModelConfig &cfg) {
  return HalvedBins(HalvedBins(cfg.n_mels));
}

size_t ParamCount(const ModelConfig &cfg) {
  ValidateModelConfig(cfg);
  const size_t e = cfg.embed_dim, h = cfg.gru_dim;
  const size_t c1 = cfg.conv1_channels, c2 = cfg.conv2_channels;
  size_t n = 0;
  n += c1 * 9 + c1;                                // conv1, 3x3 over 1 channel
  n += c2 * 9 * c1 + c2;                           // conv2
  n += FrontendBins(cfg) * c2 * e + e;             // projection
  n += cfg.upsample_stride * e * e + e;            // transposed conv
  n += cfg.phoneme_vocab * e + e * e + e;          // text table + dense
  n += 3 * (e * e + e);                            // q, k, v
  n += e * 3 * h + h * 3 * h + 6 * h;              // gru, both bias paths
  n += 2 * (h + 1);                                // utterance, phoneme heads
  switch (cfg.mask_subnet) {
    case MaskSubnet::kNone: break;
    case MaskSubnet::kD: n += 2 * e * e + e; break;
    case MaskSubnet::kC: n += 2 * e * cfg.kernel_width + e; break;
  }
  return n;
}

}  // namespace bargebench
