// kws/model.cc

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

#include "bargebench/kws/model.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "bargebench/common/error.h"
#include "bargebench/common/rng.h"

namespace bargebench {

using ad::Tensor;

FeatureMatrix ModelFeatures(const Waveform &w, const ModelConfig &cfg) {
  const auto keep = static_cast<size_t>(std::lround(cfg.max_seconds * w.sample_rate));
  Waveform head = w;
  if (head.samples.size() > keep) head.samples.resize(keep);
  MelOptions mo;
  mo.n_mels = cfg.n_mels;
  FeatureMatrix f = LogMel(head, mo);
  for (double &v : f.frames) v = (v - cfg.feature_mean) / cfg.feature_std;
  return f;
}

namespace {

std::vector<double> Glorot(Rng *rng, size_t n, size_t fan_in, size_t fan_out) {
  const double lim = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::vector<double> v(n);
  for (double &x : v) x = rng->Uniform(-lim, lim);
  return v;
}

Tensor CausalMask(int n) {
  std::vector<double> m(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m[static_cast<size_t>(i) * n + j] = ad::kMaskedLogit;
  return Tensor::Constant({n, n}, std::move(m));
}

void RequireSameShape(const Tensor &a, const Tensor &b, const char *what) {
  if (a.shape() != b.shape())
    throw ShapeError(std::string(what) + ": shapes " + ad::ShapeString(a.shape()) +
                     " and " + ad::ShapeString(b.shape()) + " differ");
}

}  // namespace

KwsModel::KwsModel(const ModelConfig &cfg, uint64_t init_seed) : cfg_(cfg) {
  ValidateModelConfig(cfg_);
  Rng rng(init_seed);
  const int e = cfg_.embed_dim, h = cfg_.gru_dim;
  const int c1 = cfg_.conv1_channels, c2 = cfg_.conv2_channels;
  const int s = cfg_.upsample_stride, bins = FrontendBins(cfg_);
  auto weight = [&](const char *name, ad::Shape shape, size_t fan_in,
                    size_t fan_out) {
    params_.Create(name, shape, Glorot(&rng, ad::NumElements(shape), fan_in, fan_out));
  };
  auto zeros = [&](const char *name, int n) {
    params_.Create(name, {n}, std::vector<double>(n, 0.0));
  };
  weight("encoder.conv1.w", {c1, 3, 3, 1}, 9, 9 * c1);
  zeros("encoder.conv1.b", c1);
  weight("encoder.conv2.w", {c2, 3, 3, c1}, 9 * c1, 9 * c2);
  zeros("encoder.conv2.b", c2);
  weight("encoder.proj.w", {bins * c2, e}, bins * c2, e);
  zeros("encoder.proj.b", e);
  weight("encoder.upsample.w", {s, e, e}, e, s * e);
  zeros("encoder.upsample.b", e);
  weight("text.table", {cfg_.phoneme_vocab, e}, cfg_.phoneme_vocab, e);
  weight("text.dense.w", {e, e}, e, e);
  zeros("text.dense.b", e);
  switch (cfg_.mask_subnet) {
    case MaskSubnet::kNone:
      break;
    case MaskSubnet::kD:
      weight("refiner.d.w", {2 * e, e}, 2 * e, e);
      zeros("refiner.d.b", e);
      break;
    case MaskSubnet::kC: {
      const int k = cfg_.kernel_width;
      weight("refiner.c.w_mixed", {e, k}, 2 * k, 1);
      weight("refiner.c.w_playback", {e, k}, 2 * k, 1);
      zeros("refiner.c.b", e);
      break;
    }
  }
  for (const char *m : {"q", "k", "v"}) {
    weight(("attention." + std::string(m) + ".w").c_str(), {e, e}, e, e);
    zeros(("attention." + std::string(m) + ".b").c_str(), e);
  }
  weight("gru.w_x", {e, 3 * h}, e, 3 * h);
  weight("gru.w_h", {h, 3 * h}, h, 3 * h);
  zeros("gru.b_x", 3 * h);
  zeros("gru.b_h", 3 * h);
  weight("head.utt.w", {h, 1}, h, 1);
  zeros("head.utt.b", 1);
  weight("head.phon.w", {h, 1}, h, 1);
  zeros("head.phon.b", 1);
}

Tensor KwsModel::AudioEncode(const FeatureMatrix &f) const {
  if (f.empty()) throw DegenerateSignalError("empty audio: no feature frames");
  if (static_cast<int>(f.num_bins) != cfg_.n_mels)
    throw ShapeError("audio features have " + std::to_string(f.num_bins) +
                     " bins, model expects " + std::to_string(cfg_.n_mels));
  const int t = static_cast<int>(f.num_frames);
  const ad::Conv2dGeometry half_freq{1, 2, 1, 1};
  Tensor x = Tensor::Constant({t, cfg_.n_mels, 1}, f.frames);
  x = ad::Relu(ad::Conv2d(x, P("encoder.conv1.w"), P("encoder.conv1.b"), half_freq));
  x = ad::Relu(ad::Conv2d(x, P("encoder.conv2.w"), P("encoder.conv2.b"), half_freq));
  x = ad::Reshape(x, {t, x.dim(1) * x.dim(2)});
  x = ad::AddBias(ad::MatMul(x, P("encoder.proj.w")), P("encoder.proj.b"));
  x = ad::TransposedConv1d(x, P("encoder.upsample.w"), cfg_.upsample_stride);
  return ad::AddBias(x, P("encoder.upsample.b"));
}

Tensor KwsModel::TextEncode(const std::vector<int> &ids) const {
  for (int id : ids)
    if (id < 0 || id >= cfg_.phoneme_vocab)
      throw ConfigError("phoneme id " + std::to_string(id) +
                        " outside vocabulary of " +
                        std::to_string(cfg_.phoneme_vocab));
  Tensor x = ad::Gather(P("text.table"), ids);
  return ad::Relu(ad::AddBias(ad::MatMul(x, P("text.dense.w")), P("text.dense.b")));
}

Tensor KwsModel::RefineMaskD(const Tensor &em, const Tensor &ep) const {
  RequireSameShape(em, ep, "RefineMaskD");
  Tensor x = ad::Concat({em, ep}, 1);
  return ad::Sigmoid(ad::AddBias(ad::MatMul(x, P("refiner.d.w")), P("refiner.d.b")));
}

Tensor KwsModel::RefineMaskC(const Tensor &em, const Tensor &ep) const {
  RequireSameShape(em, ep, "RefineMaskC");
  Tensor a = ad::Add(ad::DepthwiseCausalConv1d(em, P("refiner.c.w_mixed")),
                     ad::DepthwiseCausalConv1d(ep, P("refiner.c.w_playback")));
  return ad::Sigmoid(ad::AddBias(a, P("refiner.c.b")));
}

Tensor KwsModel::ApplyMask(const Tensor &em, const Tensor &mask) {
  RequireSameShape(em, mask, "ApplyMask");
  return ad::Mul(em, mask);
}

Tensor KwsModel::Refine(const Tensor &em, const Tensor &ep) const {
  switch (cfg_.mask_subnet) {
    case MaskSubnet::kD: return ApplyMask(em, RefineMaskD(em, ep));
    case MaskSubnet::kC: return ApplyMask(em, RefineMaskC(em, ep));
    case MaskSubnet::kNone: break;
  }
  return em;
}

JointEmbedding KwsModel::PatternExtract(const Tensor &ea, const Tensor &et) const {
  if (ea.rank() != 2 || ea.dim(0) == 0)
    throw ShapeError("PatternExtract: empty audio embedding");
  if (et.rank() != 2 || et.dim(0) == 0)
    throw ShapeError("PatternExtract: empty keyword");
  Tensor x = ad::Concat({ea, et}, 0);
  const int n = x.dim(0);
  auto proj = [&](const char *w, const char *b) {
    return ad::AddBias(ad::MatMul(x, P(w)), P(b));
  };
  Tensor q = proj("attention.q.w", "attention.q.b");
  Tensor k = proj("attention.k.w", "attention.k.b");
  Tensor v = proj("attention.v.w", "attention.v.b");
  Tensor logits = ad::Scale(ad::MatMul(q, ad::Transpose(k)),
                            1.0 / std::sqrt(static_cast<double>(cfg_.embed_dim)));
  Tensor a = ad::Softmax(logits, 1, CausalMask(n));
  return {ad::MatMul(a, v), ea.dim(0)};
}

ModelOutput KwsModel::Discriminate(const JointEmbedding &joint) const {
  const int n = joint.rows.dim(0), t_text = n - joint.boundary;
  if (joint.boundary < 0 || t_text < 1)
    throw ShapeError("Discriminate: no text rows after the audio boundary");
  Tensor h = ad::GruSequence(joint.rows, Tensor::Zeros({1, cfg_.gru_dim}),
                             P("gru.w_x"), P("gru.w_h"), P("gru.b_x"), P("gru.b_h"));
  Tensor last = ad::Slice(h, 0, n - 1, 1);
  Tensor utt = ad::Sigmoid(
      ad::AddBias(ad::MatMul(last, P("head.utt.w")), P("head.utt.b")));
  Tensor text = ad::Slice(h, 0, joint.boundary, t_text);
  Tensor phon = ad::Sigmoid(
      ad::AddBias(ad::MatMul(text, P("head.phon.w")), P("head.phon.b")));
  return {ad::Reshape(utt, {1}), ad::Reshape(phon, {t_text})};
}

ModelOutput KwsModel::Forward(const FeatureMatrix &mixed,
                              const FeatureMatrix &playback,
                              const std::vector<int> &phoneme_ids) const {
  Tensor em = AudioEncode(mixed);
  Tensor ea = em;
  if (cfg_.mask_subnet != MaskSubnet::kNone) ea = Refine(em, AudioEncode(playback));
  return Discriminate(PatternExtract(ea, TextEncode(phoneme_ids)));
}

}  // namespace bargebench
