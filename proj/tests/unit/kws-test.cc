// unit/kws-test.cc

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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "doctest.h"

#include "bargebench/autodiff/grad-check.h"
#include "bargebench/common/error.h"
#include "bargebench/kws/loss.h"
#include "bargebench/kws/model.h"
#include "bargebench/kws/trainer.h"
#include "../support/grad-cases.h"
#include "../support/kws-fixture.h"

namespace bb = bargebench;
namespace ad = bargebench::ad;
namespace fs = std::filesystem;
using ad::Tensor;
using bb::testing::RandomFeatures;
using bb::testing::SmallModelConfig;

namespace {

bb::ModelConfig Default(bb::MaskSubnet m) {
  bb::ModelConfig c;
  c.mask_subnet = m;
  return c;
}

Tensor RandomEmbedding(uint64_t seed, int rows, int cols) {
  return bb::testing::CaseRng(seed).Param({rows, cols});
}

bool SameValues(const Tensor &a, const Tensor &b, int rows_from = 0,
                int rows_to = -1) {
  const int cols = a.dim(1);
  if (rows_to < 0) rows_to = a.dim(0);
  for (int r = rows_from; r < rows_to; ++r)
    for (int c = 0; c < cols; ++c)
      if (a.at(r * cols + c) != b.at(r * cols + c)) return false;
  return true;
}

// A small dataset shared by the training tests.
const fs::path &TinyManifest() {
  static const fs::path manifest = [] {
    fs::path dir = fs::temp_directory_path() / "bargebench-kws-tiny";
    fs::remove_all(dir);
    bb::DatasetConfig dc;
    dc.seed = 31;
    dc.counts = {4, 4, 4, 4};
    bb::BuildDataset(dc, dir, 1);
    return dir / "manifest.jsonl";
  }();
  return manifest;
}

}  // namespace

TEST_CASE("parameter deltas of the two refiners") {
  const size_t base = bb::ParamCount(Default(bb::MaskSubnet::kNone));
  const size_t d = bb::ParamCount(Default(bb::MaskSubnet::kD));
  const size_t c = bb::ParamCount(Default(bb::MaskSubnet::kC));
  CHECK(d - base == 32896);
  CHECK(c - base == 1152);
  CHECK(static_cast<double>(c - base) / c < 0.005);
  const double ratio = static_cast<double>(d - base) / (c - base);
  CHECK(ratio >= 25.0);
  CHECK(ratio <= 35.0);
  // Weights alone stay under a 25th of D up to K = 5; with the bias vector
  // the margin runs out after K = 4.
  const size_t e = 128;
  for (int k = 1; k <= 5; ++k) {
    bb::ModelConfig ck = Default(bb::MaskSubnet::kC);
    ck.kernel_width = k;
    const size_t c_delta = bb::ParamCount(ck) - base;
    CHECK(25 * (c_delta - e) < d - base - e);
    if (k <= 4) CHECK(25 * c_delta < d - base);
  }
}

TEST_CASE("parameter count formula matches the built model") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    bb::ModelConfig c;
    c.mask_subnet = static_cast<bb::MaskSubnet>(trial % 3);
    c.kernel_width = 1 + gen() % 6;
    c.n_mels = 5 + gen() % 40;
    c.conv1_channels = 1 + gen() % 4;
    c.conv2_channels = 1 + gen() % 4;
    c.embed_dim = 2 + gen() % 8;
    c.gru_dim = 2 + gen() % 8;
    c.upsample_stride = 1 + gen() % 3;
    bb::KwsModel m(c, trial);
    CHECK(m.params().NumParameters() == bb::ParamCount(c));
  }
  bb::KwsModel full(Default(bb::MaskSubnet::kNone), 0);
  CHECK(full.params().NumParameters() == 244338);
}

TEST_CASE("one encoder serves mixed and playback audio") {
  bb::KwsModel m(SmallModelConfig(), 1);
  auto f = RandomFeatures(2, 9, 12);
  Tensor a = m.AudioEncode(f), b = m.AudioEncode(f);
  CHECK(a.value() == b.value());
  CHECK(a.dim(0) == 18);
  CHECK(a.dim(1) == 6);
  std::set<std::string> names;
  int encoder_tensors = 0;
  for (const auto &e : m.params().entries()) {
    CHECK(names.insert(e.name).second);
    if (e.name.rfind("encoder.", 0) == 0) ++encoder_tensors;
  }
  CHECK(encoder_tensors == 8);

  // Both embeddings draw gradient into the same storage.
  Tensor w = m.params().Get("encoder.proj.w");
  ad::Backward(ad::Sum(a));
  auto g1 = w.grad();
  w.ZeroGrad();
  ad::Backward(ad::Add(ad::Sum(a), ad::Sum(b)));
  auto g2 = w.grad();
  for (size_t i = 0; i < g1.size(); ++i) CHECK(g2[i] == doctest::Approx(2 * g1[i]));
}

TEST_CASE("encoder upsamples by the stride") {
  for (int stride : {1, 2, 3}) {
    bb::ModelConfig c = SmallModelConfig();
    c.upsample_stride = stride;
    bb::KwsModel m(c, 3);
    CHECK(m.AudioEncode(RandomFeatures(4, 7, 12)).dim(0) == 7 * stride);
  }
  bb::KwsModel m(SmallModelConfig(), 3);
  CHECK_THROWS_AS(m.AudioEncode(bb::FeatureMatrix{}), bb::DegenerateSignalError);
  CHECK_THROWS_AS(m.AudioEncode(RandomFeatures(4, 7, 11)), bb::ShapeError);
}

TEST_CASE("encoder gradient matches finite differences") {
  bb::KwsModel m(SmallModelConfig(), 5);
  auto f = RandomFeatures(6, 6, 12);
  std::vector<Tensor> params;
  for (const auto &e : m.params().entries())
    if (e.name.rfind("encoder.", 0) == 0) params.push_back(e.tensor);
  auto fn = [&](const std::vector<Tensor> &) {
    return bb::testing::Project(m.AudioEncode(f), 7);
  };
  CHECK(ad::GradCheck(fn, params).max_rel_error < 1e-4);
}

TEST_CASE("text encoder") {
  bb::KwsModel m(SmallModelConfig(), 8);
  Tensor empty = m.TextEncode({});
  CHECK(empty.dim(0) == 0);
  CHECK(empty.dim(1) == 6);
  CHECK_THROWS_AS(m.PatternExtract(RandomEmbedding(1, 4, 6), empty), bb::ShapeError);

  Tensor t = m.TextEncode({3, 0, 19, 7});
  for (double v : t.value()) CHECK(v >= 0.0);
  Tensor p = m.TextEncode({19, 7, 3, 0});
  const int perm[] = {2, 3, 0, 1};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 6; ++c) CHECK(p.at(r * 6 + c) == t.at(perm[r] * 6 + c));
  CHECK_THROWS_AS(m.TextEncode({20}), bb::ConfigError);
  CHECK_THROWS_AS(m.TextEncode({-1}), bb::ConfigError);
}

TEST_CASE("subnet D mask is a per-frame map into (0, 1)") {
  bb::KwsModel m(SmallModelConfig(bb::MaskSubnet::kD), 9);
  Tensor em = RandomEmbedding(10, 8, 6), ep = RandomEmbedding(11, 8, 6);
  Tensor mask = m.RefineMaskD(em, ep);
  for (double v : mask.value()) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  Tensor ep2 = RandomEmbedding(11, 8, 6);
  for (int c = 0; c < 6; ++c) ep2.mutable_value()[5 * 6 + c] += 1.0;
  Tensor mask2 = m.RefineMaskD(em, ep2);
  CHECK(SameValues(mask, mask2, 0, 5));
  CHECK(SameValues(mask, mask2, 6, 8));
  CHECK(!SameValues(mask, mask2, 5, 6));
  CHECK(m.params().NumParameters("refiner.") == 2 * 6 * 6 + 6);
  CHECK_THROWS_AS(m.RefineMaskD(em, RandomEmbedding(1, 7, 6)), bb::ShapeError);
}

TEST_CASE("subnet C mask is causal") {
  bb::KwsModel m(SmallModelConfig(bb::MaskSubnet::kC), 12);
  Tensor em = RandomEmbedding(13, 10, 6), ep = RandomEmbedding(14, 10, 6);
  Tensor mask = m.RefineMaskC(em, ep);
  for (int t = 0; t < 10; ++t) {
    Tensor ep2 = RandomEmbedding(14, 10, 6);
    for (int c = 0; c < 6; ++c) ep2.mutable_value()[t * 6 + c] -= 2.0;
    Tensor mask2 = m.RefineMaskC(em, ep2);
    CHECK(SameValues(mask, mask2, 0, t));
    // The kernel spans 4 frames, so the change reaches exactly t..t+3.
    CHECK(!SameValues(mask, mask2, t, std::min(t + 4, 10)));
    if (t + 4 < 10) CHECK(SameValues(mask, mask2, t + 4, 10));
  }
  CHECK(m.params().NumParameters("refiner.") == 2 * 6 * 4 + 6);
  bb::ModelConfig bad = SmallModelConfig();
  bad.kernel_width = 0;
  CHECK_THROWS_AS(bb::KwsModel(bad, 0), bb::ConfigError);
}

TEST_CASE("masking") {
  Tensor em = RandomEmbedding(15, 5, 6);
  auto filled = [](double v) {
    return Tensor::Constant({5, 6}, std::vector<double>(30, v));
  };
  CHECK(bb::KwsModel::ApplyMask(em, filled(1.0)).value() == em.value());
  Tensor zeroed = bb::KwsModel::ApplyMask(em, filled(0.0));
  for (double v : zeroed.value()) CHECK(v == 0.0);
  bb::KwsModel m(SmallModelConfig(bb::MaskSubnet::kC), 16);
  Tensor ea = m.Refine(em, RandomEmbedding(17, 5, 6));
  for (size_t i = 0; i < em.size(); ++i) CHECK(std::abs(ea.at(i)) <= std::abs(em.at(i)));
  CHECK_THROWS_AS(bb::KwsModel::ApplyMask(em, filled(1.0).shape() == em.shape()
                                                  ? Tensor::Zeros({4, 6})
                                                  : em),
                  bb::ShapeError);
  bb::KwsModel none(SmallModelConfig(bb::MaskSubnet::kNone), 16);
  CHECK(none.Refine(em, RandomEmbedding(17, 5, 6)).value() == em.value());
}

TEST_CASE("pattern extractor attends causally") {
  bb::KwsModel m(SmallModelConfig(), 18);
  Tensor ea = RandomEmbedding(19, 7, 6), et = RandomEmbedding(20, 3, 6);
  bb::JointEmbedding j = m.PatternExtract(ea, et);
  CHECK(j.boundary == 7);
  CHECK(j.rows.dim(0) == 10);

  // Row 0 sees only itself: its output is the value projection of row 0.
  Tensor v0 = ad::AddBias(ad::MatMul(ad::Slice(ea, 0, 0, 1),
                                     m.params().Get("attention.v.w")),
                          m.params().Get("attention.v.b"));
  for (int c = 0; c < 6; ++c)
    CHECK(j.rows.at(c) == doctest::Approx(v0.at(c)).epsilon(1e-14));

  Tensor et2 = RandomEmbedding(20, 3, 6);
  for (int c = 0; c < 6; ++c) et2.mutable_value()[2 * 6 + c] += 3.0;
  bb::JointEmbedding j2 = m.PatternExtract(ea, et2);
  CHECK(SameValues(j.rows, j2.rows, 0, 9));
  CHECK(!SameValues(j.rows, j2.rows, 9, 10));
}

TEST_CASE("attention weights sum to one over the visible prefix") {
  // With a constant value projection every output row equals that constant
  // times the row's total attention weight.
  bb::KwsModel m(SmallModelConfig(), 21);
  Tensor vw = m.params().Get("attention.v.w"), vb = m.params().Get("attention.v.b");
  std::fill(vw.mutable_value().begin(), vw.mutable_value().end(), 0.0);
  for (int c = 0; c < 6; ++c) vb.mutable_value()[c] = 1.0 + c;
  bb::JointEmbedding j =
      m.PatternExtract(RandomEmbedding(22, 12, 6), RandomEmbedding(23, 4, 6));
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 6; ++c)
      CHECK(std::abs(j.rows.at(r * 6 + c) / (1.0 + c) - 1.0) < 1e-9);
}

TEST_CASE("discriminator outputs") {
  bb::KwsModel m(SmallModelConfig(), 24);
  for (int ta : {4, 8}) {
    bb::JointEmbedding j{RandomEmbedding(25, ta + 3, 6), ta};
    bb::ModelOutput o = m.Discriminate(j);
    CHECK(o.p_utt.size() == 1);
    CHECK(o.p_phon.size() == 3);
    CHECK(o.p_utt.item() > 0.0);
    CHECK(o.p_utt.item() < 1.0);
  }
  CHECK_THROWS_AS(m.Discriminate({RandomEmbedding(26, 5, 6), 5}), bb::ShapeError);
}

TEST_CASE("outputs stay inside the open unit interval") {
  std::mt19937_64 gen(27);
  for (int trial = 0; trial < 1000; ++trial) {
    bb::ModelConfig c = SmallModelConfig(static_cast<bb::MaskSubnet>(trial % 3));
    c.embed_dim = 2 + gen() % 6;
    c.gru_dim = 2 + gen() % 6;
    c.kernel_width = 1 + gen() % 5;
    bb::KwsModel m(c, gen());
    const size_t frames = 2 + gen() % 6;
    std::vector<int> ids(1 + gen() % 6);
    for (int &id : ids) id = gen() % 20;
    bb::ModelOutput o = m.Forward(RandomFeatures(gen(), frames, 12),
                                  RandomFeatures(gen(), frames, 12), ids);
    CHECK(o.p_utt.item() > 0.0);
    CHECK(o.p_utt.item() < 1.0);
    REQUIRE(o.p_phon.size() == ids.size());
    for (double p : o.p_phon.value()) {
      CHECK(p > 0.0);
      CHECK(p < 1.0);
    }
  }
}

TEST_CASE("loss") {
  auto out = [](double utt, std::vector<double> phon) {
    const int n = static_cast<int>(phon.size());
    return bb::ModelOutput{Tensor::Constant({1}, {utt}),
                           Tensor::Constant({n}, std::move(phon))};
  };
  CHECK(bb::KwsLoss(out(1.0, {1.0, 0.0}), 1, {1, 0}, 1.0).item() < 1e-5);
  CHECK(bb::KwsLoss(out(0.5, {0.9, 0.1}), 0, {0, 1}, 0.0).item() ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(bb::KwsLoss(out(0.5, {0.5}), 0, {0, 1}, 1.0), bb::ShapeError);
  CHECK_THROWS_AS(bb::KwsLoss(out(0.5, {0.5}), 2, {0}, 1.0), bb::ConfigError);
  CHECK_THROWS_AS(bb::KwsLoss(out(0.5, {0.5}), 0, {0}, -1.0), bb::ConfigError);
}

TEST_CASE("the loss signature admits no audio") {
  using Clean = ad::Tensor (*)(const bb::ModelOutput &, const bb::Waveform &);
  using Features = ad::Tensor (*)(const bb::FeatureMatrix &, int);
  using Raw = ad::Tensor (*)(const ad::Tensor &, int);
  static_assert(!bb::internal::LossArgs<Clean>::kAudioFree);
  static_assert(!bb::internal::LossArgs<Features>::kAudioFree);
  static_assert(!bb::internal::LossArgs<Raw>::kAudioFree);
  static_assert(bb::internal::LossArgs<decltype(&bb::KwsLoss)>::kAudioFree);
  CHECK(true);
}

TEST_CASE("full model and loss gradient matches finite differences") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    for (auto subnet : {bb::MaskSubnet::kNone, bb::MaskSubnet::kD, bb::MaskSubnet::kC}) {
      bb::KwsModel m(SmallModelConfig(subnet), seed);
      auto fm = RandomFeatures(seed * 10 + 1, 5, 12);
      auto fp = RandomFeatures(seed * 10 + 2, 5, 12);
      std::vector<Tensor> params;
      for (const auto &e : m.params().entries()) params.push_back(e.tensor);
      auto fn = [&](const std::vector<Tensor> &) {
        return bb::KwsLoss(m.Forward(fm, fp, {4, 9, 1}), 1, {1, 0, 1}, 1.0);
      };
      ad::GradCheckOptions o;
      o.max_coords = 12;
      o.seed = seed;
      o.denominator_floor = 1e-6;
      CAPTURE(seed);
      CAPTURE(bb::MaskSubnetName(subnet));
      auto r = ad::GradCheck(fn, params, o);
      CAPTURE(m.params().entries()[r.worst_input].name);
      CAPTURE(r.analytic);
      CAPTURE(r.numeric);
      CHECK(r.max_rel_error < 1e-4);
    }
  }
}

TEST_CASE("phoneme weight changes the gradient") {
  bb::KwsModel m(SmallModelConfig(), 28);
  auto fm = RandomFeatures(29, 5, 12), fp = RandomFeatures(30, 5, 12);
  Tensor w = m.params().Get("head.phon.w");
  auto grad = [&](double lambda) {
    m.params().ZeroGrad();
    ad::Backward(bb::KwsLoss(m.Forward(fm, fp, {1, 2, 3}), 1, {1, 0, 1}, lambda));
    return w.grad();
  };
  auto g0 = grad(0.0), g1 = grad(1.0);
  for (double v : g0) CHECK(v == 0.0);
  double norm = 0.0;
  for (double v : g1) norm += v * v;
  CHECK(norm > 0.0);
}

TEST_CASE("causality from playback to the joint rows") {
  // Playback frame f reaches encoder rows from 2(f - 2) on (two 3-tap
  // convolutions over time, stride-2 upsampling); the causal refiner and
  // attention keep every earlier joint row fixed.
  bb::KwsModel m(SmallModelConfig(bb::MaskSubnet::kC), 31);
  auto fm = RandomFeatures(32, 12, 12), fp = RandomFeatures(33, 12, 12);
  Tensor et = m.TextEncode({2, 5});
  auto joint = [&](const bb::FeatureMatrix &p) {
    return m.PatternExtract(m.Refine(m.AudioEncode(fm), m.AudioEncode(p)), et).rows;
  };
  Tensor base = joint(fp);
  for (int f : {3, 6, 11}) {
    auto fp2 = fp;
    for (int b = 0; b < 12; ++b) fp2.frames[f * 12 + b] += 1.5;
    Tensor moved = joint(fp2);
    CHECK(SameValues(base, moved, 0, 2 * (f - 2)));
    CHECK(!SameValues(base, moved, 2 * (f - 2), 26));
  }
}

TEST_CASE("audio beyond the input window is ignored") {
  bb::ModelConfig c = SmallModelConfig();
  c.max_seconds = 0.2;
  std::vector<double> a(8000), b;
  std::mt19937_64 gen(34);
  std::normal_distribution<double> d(0.0, 0.1);
  for (double &v : a) v = d(gen);
  b = a;
  for (size_t i = 3200; i < b.size(); ++i) b[i] = 0.0;
  auto fa = bb::ModelFeatures(bb::Waveform(a, 16000), c);
  auto fb = bb::ModelFeatures(bb::Waveform(b, 16000), c);
  CHECK(fa.num_frames == 18);
  CHECK(fa.frames == fb.frames);
}

TEST_CASE("model config json round trip and errors") {
  bb::ModelConfig c = SmallModelConfig(bb::MaskSubnet::kD);
  c.max_seconds = 0.37;
  bb::ModelConfig r = bb::ModelConfigFromJson(bb::ModelConfigToJson(c));
  CHECK(bb::ModelConfigToJson(r) == bb::ModelConfigToJson(c));
  CHECK_THROWS_AS(bb::ModelConfigFromJson({{"embed_dimm", 3}}), bb::ConfigError);
  CHECK_THROWS_AS(bb::ModelConfigFromJson({{"embed_dim", "3"}}), bb::ConfigError);
  CHECK_THROWS_AS(bb::ModelConfigFromJson({{"mask_subnet", "E"}}), bb::ConfigError);
  CHECK_THROWS_AS(bb::ModelConfigFromJson({{"attention_heads", 2}}), bb::ConfigError);
  CHECK_THROWS_AS(bb::TrainConfigFromJson({{"steps", 0}}), bb::ConfigError);
  CHECK_THROWS_AS(bb::TrainConfigFromJson({{"lr", 0.1}}), bb::ConfigError);
  bb::TrainConfig t;
  t.seed = 99;
  t.steps = 17;
  CHECK(bb::TrainConfigToJson(bb::TrainConfigFromJson(bb::TrainConfigToJson(t))) ==
        bb::TrainConfigToJson(t));
}

TEST_CASE("validation split is stratified by kind") {
  auto ex = bb::LoadExamples(TinyManifest(), SmallModelConfig());
  REQUIRE(ex.size() == 16);
  auto s = bb::SplitExamples(ex, 0.25, 4);
  CHECK(s.validation.size() == 4);
  std::set<bb::ScenarioKind> kinds;
  for (size_t i : s.validation) kinds.insert(ex[i].kind);
  CHECK(kinds.size() == 4);
  CHECK(bb::SplitExamples(ex, 0.0, 4).train.size() == 16);
}

TEST_CASE("batches pair positives and negatives within each kind") {
  auto ex = bb::LoadExamples(TinyManifest(), SmallModelConfig());
  std::vector<size_t> pool(ex.size());
  for (size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  bb::BatchSampler a(ex, pool, 5), b(ex, pool, 5);
  for (int step = 0; step < 10; ++step) {
    auto batch = a.Next(8);
    CHECK(batch == b.Next(8));
    std::map<bb::ScenarioKind, std::pair<int, int>> per_kind;
    for (size_t i : batch)
      (ex[i].y_utt ? per_kind[ex[i].kind].first : per_kind[ex[i].kind].second)++;
    CHECK(per_kind.size() == 4);
    for (auto [kind, counts] : per_kind) {
      if (kind == bb::ScenarioKind::kSelfReferencing) {
        CHECK(counts == std::pair{0, 2});
      } else {
        CHECK(counts == std::pair{1, 1});
      }
    }
  }
}

TEST_CASE("training is deterministic and learns the tiny set") {
  auto ex = bb::LoadExamples(TinyManifest(), SmallModelConfig());
  bb::TrainConfig t;
  t.seed = 6;
  t.steps = 120;
  t.batch_size = 8;
  t.learning_rate = 1e-2;
  t.validation_fraction = 0.0;
  fs::path d1 = fs::temp_directory_path() / "bargebench-kws-train1";
  fs::path d2 = fs::temp_directory_path() / "bargebench-kws-train2";
  auto r1 = bb::Train(ex, SmallModelConfig(), t, d1);
  auto r2 = bb::Train(ex, SmallModelConfig(), t, d2);
  CHECK(r1.step_losses == r2.step_losses);
  CHECK(r1.checkpoint_hash == r2.checkpoint_hash);
  CHECK(r1.final_train_loss < 0.1 * r1.initial_train_loss);
  CHECK(fs::exists(d1 / "train_log.jsonl"));

  bb::KwsModel loaded = bb::LoadModel(r1.checkpoint);
  bb::ModelOutput o = loaded.Forward(ex[0].mixed, ex[0].playback, ex[0].phoneme_ids);
  CHECK(o.p_utt.size() == 1);
}

TEST_CASE("best checkpoint follows validation loss") {
  auto ex = bb::LoadExamples(TinyManifest(), SmallModelConfig());
  bb::TrainConfig t;
  t.seed = 7;
  t.steps = 12;
  t.eval_every = 4;
  t.validation_fraction = 0.25;
  fs::path dir = fs::temp_directory_path() / "bargebench-kws-best";
  auto r = bb::Train(ex, SmallModelConfig(), t, dir);
  std::ifstream in(dir / "validation.jsonl");
  std::string line;
  double best = INFINITY;
  int best_step = 0, lines = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    ++lines;
    if (j["validation_loss"].get<double>() < best) {
      best = j["validation_loss"];
      best_step = j["step"];
    }
  }
  CHECK(lines == 3);
  CHECK(r.best_step == best_step);
  CHECK(r.best_validation_loss == best);
  auto meta = ad::ReadCheckpoint(r.checkpoint.string()).meta;
  CHECK(meta["step"] == best_step);
}

TEST_CASE("training errors") {
  CHECK_THROWS_AS(bb::Train({}, SmallModelConfig(), {}, fs::temp_directory_path()),
                  bb::ConfigError);
  fs::path empty = fs::temp_directory_path() / "bargebench-kws-empty";
  bb::DatasetConfig dc;
  bb::BuildDataset(dc, empty, 1);
  CHECK_THROWS_AS(bb::LoadExamples(empty / "manifest.jsonl", SmallModelConfig()),
                  bb::ConfigError);

  auto ex = bb::LoadExamples(TinyManifest(), SmallModelConfig());
  bb::TrainConfig t;
  t.steps = 5;
  t.learning_rate = 1e200;
  t.validation_fraction = 0.0;
  try {
    bb::Train(ex, SmallModelConfig(), t, fs::temp_directory_path() / "bargebench-kws-nan");
    FAIL("no throw");
  } catch (const bb::NumericError &e) {
    CHECK(std::string(e.what()).find("training step") != std::string::npos);
  }
}

TEST_CASE("checkpoint from another config is rejected") {
  auto ex = bb::LoadExamples(TinyManifest(), SmallModelConfig());
  bb::TrainConfig t;
  t.steps = 1;
  t.validation_fraction = 0.0;
  fs::path dir = fs::temp_directory_path() / "bargebench-kws-mismatch";
  auto r = bb::Train(ex, SmallModelConfig(bb::MaskSubnet::kD), t, dir);
  auto ckpt = ad::ReadCheckpoint(r.checkpoint.string());
  bb::KwsModel other(SmallModelConfig(bb::MaskSubnet::kC), 0);
  CHECK_THROWS_AS(ad::ApplyCheckpoint(ckpt, &other.params()), bb::FormatError);
}
