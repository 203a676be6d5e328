// unit/metrics-test.cc

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
#include <random>

#include "doctest.h"

#include "bargebench/autodiff/params.h"
#include "bargebench/common/error.h"
#include "bargebench/kws/trainer.h"
#include "bargebench/metrics/evaluate.h"
#include "bargebench/metrics/metrics.h"
#include "bargebench/metrics/report.h"
#include "../support/kws-fixture.h"
#include "../support/metric-oracles.h"

namespace bb = bargebench;
namespace fs = std::filesystem;
using bb::ScoredSet;
using bb::testing::LongMae;
using bb::testing::PairwiseAuc;
using bb::testing::SweepEer;
using bb::testing::SweepEerBounds;
using bb::testing::SweepRoc;

namespace {

bool BothClasses(const ScoredSet &s) {
  bool p = false, n = false;
  for (int y : s.labels) (y ? p : n) = true;
  return p && n;
}

// Scores on a coarse grid so that ties are common.
ScoredSet RandomSet(std::mt19937_64 &gen, size_t n, int levels) {
  ScoredSet s;
  for (size_t i = 0; i < n; ++i) {
    s.scores.push_back(static_cast<double>(gen() % (levels + 1)) / levels);
    s.labels.push_back(static_cast<int>(gen() % 2));
  }
  return s;
}

void CheckAgainstOracles(const ScoredSet &s) {
  CHECK(std::abs(bb::Mae(s) - LongMae(s)) <= 1e-15);
  if (!BothClasses(s)) {
    CHECK_THROWS_AS(bb::Auc(s), bb::NotApplicableError);
    CHECK_THROWS_AS(bb::Eer(s), bb::NotApplicableError);
    return;
  }
  auto roc = bb::Roc(s);
  auto oracle = SweepRoc(s);
  REQUIRE(roc.size() == oracle.size());
  for (size_t i = 0; i < roc.size(); ++i) {
    CHECK(roc[i].fpr == oracle[i].fpr);
    CHECK(roc[i].tpr == oracle[i].tpr);
    CHECK(roc[i].threshold == oracle[i].threshold);
  }
  CHECK(std::abs(bb::Auc(s) - PairwiseAuc(s)) <= 1e-12);
  const double eer = bb::Eer(s).eer;
  CHECK(std::abs(eer - SweepEer(s)) <= 1e-12);
  auto [lo, hi] = SweepEerBounds(s);
  CHECK(eer >= lo - 1e-12);
  CHECK(eer <= hi + 1e-12);
}

}  // namespace

TEST_CASE("roc shape") {
  ScoredSet sep{{0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}};
  auto roc = bb::Roc(sep);
  CHECK(roc.front().fpr == 0.0);
  CHECK(roc.front().tpr == 0.0);
  CHECK(roc.back().fpr == 1.0);
  CHECK(roc.back().tpr == 1.0);
  bool through = false;
  for (auto &p : roc) through |= p.fpr == 0.0 && p.tpr == 1.0;
  CHECK(through);

  ScoredSet flat{{0.3, 0.3, 0.3}, {1, 0, 1}};
  roc = bb::Roc(flat);
  REQUIRE(roc.size() == 2);
  CHECK(roc[1].fpr == 1.0);
  CHECK(roc[1].tpr == 1.0);
  CHECK(roc[1].threshold == 0.3);
  CHECK(std::isinf(roc[0].threshold));
}

TEST_CASE("small known values") {
  ScoredSet perfect{{0.9, 0.1}, {1, 0}};
  CHECK(bb::Auc(perfect) == 1.0);
  CHECK(bb::Eer(perfect).eer == 0.0);
  CHECK(bb::Eer(perfect).threshold == 0.9);
  ScoredSet reversed{{0.1, 0.9}, {1, 0}};
  CHECK(bb::Auc(reversed) == 0.0);
  CHECK(bb::Eer(reversed).eer == 1.0);
  CHECK(SweepEer(reversed) == 1.0);
  ScoredSet mixed{{0.9, 0.6, 0.4, 0.1}, {1, 0, 0, 1}};
  CHECK(bb::Eer(mixed).eer == 0.5);
  CHECK(SweepEer(mixed) == 0.5);
  CHECK(bb::Auc(mixed) == 0.5);
  ScoredSet idle{{0.1, 0.3, 0.2}, {0, 0, 0}};
  CHECK(bb::Mae(idle) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(bb::Mae(ScoredSet{{0.0, 1.0}, {0, 1}}) == 0.0);
}

TEST_CASE("eer interpolates inside a crossing segment") {
  // Staircase (0,0) (0,1/2) (1/3,1/2) (1,1): the line FPR = FNR meets the
  // horizontal run at FPR = FNR = 1/2 only after the run ends, so it crosses
  // the last diagonal segment.
  ScoredSet s{{0.9, 0.5, 0.1, 0.1, 0.1}, {1, 0, 1, 0, 0}};
  auto e = bb::Eer(s);
  // Segment from (1/3, 1/2) to (1, 1): FNR = 1/2 - t/2, FPR = 1/3 + 2t/3.
  const double t = (0.5 - 1.0 / 3) / (2.0 / 3 + 0.5);
  CHECK(e.eer == doctest::Approx(1.0 / 3 + 2 * t / 3).epsilon(1e-14));
  CHECK(e.threshold == doctest::Approx(0.5 + t * (0.1 - 0.5)).epsilon(1e-14));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(bb::Roc(ScoredSet{{0.1, 0.2}, {0, 0}}), bb::NotApplicableError);
  CHECK_THROWS_AS(bb::Auc(ScoredSet{{0.1}, {1}}), bb::NotApplicableError);
  CHECK_THROWS_AS(bb::Mae(ScoredSet{{0.1, 0.2}, {0}}), bb::ShapeError);
  CHECK_THROWS_AS(bb::Mae(ScoredSet{}), bb::ConfigError);
  CHECK_THROWS_AS(bb::Mae(ScoredSet{{1.5}, {0}}), bb::ConfigError);
  CHECK_THROWS_AS(bb::Mae(ScoredSet{{NAN}, {0}}), bb::ConfigError);
  CHECK_THROWS_AS(bb::Mae(ScoredSet{{0.5}, {2}}), bb::ConfigError);
}

TEST_CASE("exhaustive label patterns up to twelve samples") {
  std::mt19937_64 gen(1);
  for (size_t n = 1; n <= 12; ++n) {
    ScoredSet base = RandomSet(gen, n, 5);
    for (uint32_t pattern = 0; pattern < (1u << n); ++pattern) {
      ScoredSet s = base;
      for (size_t i = 0; i < n; ++i) s.labels[i] = (pattern >> i) & 1;
      CheckAgainstOracles(s);
    }
  }
}

TEST_CASE("random sets match the oracles") {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const int levels = trial % 2 ? 1 << 20 : 1 + static_cast<int>(gen() % 10);
    CheckAgainstOracles(RandomSet(gen, 2 + gen() % 150, levels));
  }
}

TEST_CASE("rank metrics ignore increasing transforms") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    ScoredSet s = RandomSet(gen, 4 + gen() % 60, 1024);
    if (!BothClasses(s)) continue;
    for (auto f : {+[](double x) { return std::sqrt(x); },
                   +[](double x) { return x * x * x; },
                   +[](double x) { return 0.25 + x / 2; }}) {
      ScoredSet t = s;
      for (double &v : t.scores) v = f(v);
      CHECK(bb::Auc(t) == bb::Auc(s));
      CHECK(bb::Eer(t).eer == bb::Eer(s).eer);
    }
    ScoredSet c = s;
    for (double &v : c.scores) v = 1.0 - v;
    CHECK(std::abs(bb::Auc(s) + bb::Auc(c) - 1.0) <= 1e-12);
  }
}

TEST_CASE("self-referencing reports carry mae only") {
  using K = bb::ScenarioKind;
  std::vector<K> kinds = {K::kSelfReferencing, K::kNonPlayback, K::kSelfReferencing,
                          K::kNonPlayback, K::kPlaybackMusic};
  ScoredSet s{{0.2, 0.9, 0.4, 0.3, 0.7}, {0, 1, 0, 0, 1}};
  bb::EvalReport r = bb::MakeEvalReport(kinds, s);
  REQUIRE(r.kinds.size() == 3);
  CHECK(r.kinds[0].kind == K::kNonPlayback);
  CHECK(r.kinds[0].auc == 1.0);
  CHECK(!r.kinds[1].auc);  // PlaybackMusic holds one class
  const bb::KindReport *sr = r.Find(K::kSelfReferencing);
  REQUIRE(sr);
  CHECK(!sr->auc);
  CHECK(!sr->eer);
  CHECK(sr->roc.empty());
  CHECK(sr->mae == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(sr->n == 2);

  const std::string csv = bb::EvalReportCsv(r);
  CHECK(csv.rfind("kind,auc,eer,mae,n\n", 0) == 0);
  CHECK(csv.find("\nSelfReferencing,,,0.300000,2\n") != std::string::npos);

  bb::EvalReport back = bb::EvalReportFromJson(bb::EvalReportToJson(r));
  CHECK(bb::EvalReportToJson(back) == bb::EvalReportToJson(r));
  CHECK_THROWS_AS(bb::EvalReportFromJson({{"format", "x"}}), bb::FormatError);
  auto bad = bb::EvalReportToJson(r);
  bad["kinds"][0]["kind"] = "Outdoor";
  CHECK_THROWS_AS(bb::EvalReportFromJson(bad), bb::FormatError);
}

TEST_CASE("comparison tables") {
  using K = bb::ScenarioKind;
  ScoredSet s{{0.2, 0.9, 0.3}, {0, 1, 0}};
  std::vector<K> kinds = {K::kSelfReferencing, K::kNonPlayback, K::kNonPlayback};
  bb::EvalReport a = bb::MakeEvalReport(kinds, s);
  s.scores[0] = 0.05;
  bb::EvalReport b = bb::MakeEvalReport(kinds, s);

  CHECK(bb::ComparisonCsv({{"base", a}}) == bb::EvalReportCsv(a));
  const std::string two = bb::ComparisonCsv({{"base", a}, {"C", b}});
  CHECK(two.rfind("kind,metric,base,C\n", 0) == 0);
  CHECK(two.find("SelfReferencing,mae,0.200000,0.050000\n") != std::string::npos);
  CHECK(two.find("SelfReferencing,auc,,\n") != std::string::npos);

  bb::EvalReport other = bb::MakeEvalReport({K::kPlaybackMusic, K::kPlaybackMusic},
                                            ScoredSet{{0.1, 0.8}, {0, 1}});
  CHECK_THROWS_AS(bb::ComparisonCsv({{"base", a}, {"x", other}}), bb::ConfigError);
  CHECK_THROWS_AS(bb::ComparisonCsv({{"a", a}, {"a", b}}), bb::ConfigError);

  const std::string svg = bb::MaeBarSvg({{"base", a}, {"C", b}});
  CHECK(svg.find("20.00%") != std::string::npos);
  CHECK(svg.find("5.00%") != std::string::npos);
  CHECK_THROWS_AS(bb::MaeBarSvg({{"x", other}}), bb::ConfigError);
  CHECK(bb::RocSvg(a).find("NonPlayback AUC 1.000") != std::string::npos);
}

TEST_CASE("evaluate with a constant model") {
  fs::path dir = fs::temp_directory_path() / "bargebench-metrics-sr";
  fs::remove_all(dir);
  bb::DatasetConfig dc;
  dc.seed = 40;
  dc.counts = {2, 0, 0, 3};
  bb::BuildDataset(dc, dir / "data", 1);

  bb::ModelConfig mc = bb::testing::SmallModelConfig(bb::MaskSubnet::kNone);
  bb::KwsModel model(mc, 1);
  for (const char *name : {"head.utt.w", "head.utt.b"}) {
    bb::ad::Tensor t = model.params().Get(name);
    auto &v = t.mutable_value();
    std::fill(v.begin(), v.end(), 0.0);
  }
  const fs::path ckpt = dir / "model.ckpt.json";
  bb::ad::SaveCheckpoint(model.params(), {{"model", bb::ModelConfigToJson(mc)}},
                         ckpt.string());
  std::vector<bb::ScoredExample> scores;
  bb::EvalReport r = bb::Evaluate(ckpt, dir / "data" / "manifest.jsonl", {}, &scores);
  REQUIRE(scores.size() == 5);
  for (auto &s : scores) CHECK(s.p_utt == 0.5);
  const bb::KindReport *sr = r.Find(bb::ScenarioKind::kSelfReferencing);
  REQUIRE(sr);
  CHECK(sr->mae == 0.5);
  CHECK(!sr->auc);
  CHECK(r.Find(bb::ScenarioKind::kNonPlayback)->auc == 0.5);
  CHECK(r.meta["aec"].is_null());

  // The echo canceller changes the input, not the bookkeeping.
  bb::EvalOptions o;
  o.nlms = bb::NlmsOptions{};
  o.nlms->taps = 64;
  bb::EvalReport rn = bb::Evaluate(ckpt, dir / "data" / "manifest.jsonl", o);
  CHECK(rn.meta["aec"]["taps"] == 64);
  CHECK(rn.kinds.size() == r.kinds.size());
}

TEST_CASE("evaluate rejects mismatched inputs") {
  fs::path dir = fs::temp_directory_path() / "bargebench-metrics-mismatch";
  fs::remove_all(dir);
  bb::DatasetConfig dc;
  dc.seed = 41;
  dc.counts = {2, 0, 0, 0};
  bb::BuildDataset(dc, dir / "data", 1);
  bb::ModelConfig mc = bb::testing::SmallModelConfig();
  mc.phoneme_vocab = 3;
  bb::KwsModel model(mc, 1);
  CHECK_THROWS_AS(bb::ScoreManifest(model, dir / "data" / "manifest.jsonl"),
                  bb::ConfigError);
  bb::DatasetConfig empty;
  bb::BuildDataset(empty, dir / "empty", 1);
  CHECK_THROWS_AS(bb::ScoreManifest(model, dir / "empty" / "manifest.jsonl"),
                  bb::ConfigError);
  CHECK_THROWS_AS(bb::Evaluate(dir / "missing.json", dir / "data" / "manifest.jsonl"),
                  bb::IoError);
}
