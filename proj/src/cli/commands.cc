// cli/commands.cc


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

#include "bargebench/cli/commands.h"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "bargebench/aec/nlms.h"
#include "bargebench/audio/wav-io.h"
#include "bargebench/cli/toml-json.h"
#include "bargebench/common/error.h"
#include "bargebench/common/file-util.h"
#include "bargebench/common/log.h"
#include "bargebench/kws/trainer.h"
#include "bargebench/metrics/evaluate.h"
#include "bargebench/room/dataset.h"

namespace bargebench {

namespace fs = std::filesystem;

namespace {

std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

std::string Num(const std::optional<double> &v) { return v ? Num(*v) : std::string(); }

void Prepare(const RunConfig &cfg, std::ostream &out) {
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) throw IoError("cannot create " + cfg.out.string() + ": " + ec.message());
  WriteFileAtomic(cfg.out / "resolved.toml", JsonToToml(ResolvedConfigJson(cfg)));
  out << "command=" << CommandName(cfg.command) << "\n";
  for (const std::string &line : EchoLines(cfg)) out << line << "\n";
  out << std::flush;
}

}  // namespace

int ExitCodeFor(const std::exception &e) {
  if (dynamic_cast<const ConfigError *>(&e) || dynamic_cast<const ShapeError *>(&e) ||
      dynamic_cast<const GeometryError *>(&e) ||
      dynamic_cast<const NotApplicableError *>(&e))
    return kExitConfig;
  if (dynamic_cast<const IoError *>(&e) || dynamic_cast<const FormatError *>(&e))
    return kExitIo;
  if (dynamic_cast<const NumericError *>(&e) ||
      dynamic_cast<const DegenerateSignalError *>(&e))
    return kExitNumeric;
  return kExitFailure;
}

void RunSimulate(const RunConfig &cfg, std::ostream &out) {
  Prepare(cfg, out);
  std::vector<ManifestEntry> entries = BuildDataset(cfg.simulate, cfg.out, cfg.threads);
  out << "manifest=" << (cfg.out / "manifest.jsonl").string() << "\n";
  for (ScenarioKind k : kAllScenarioKinds) {
    size_t n = 0;
    for (const ManifestEntry &e : entries) n += e.kind == k;
    out << "count." << KindName(k) << "=" << n << "\n";
  }
}

void RunAec(const RunConfig &cfg, std::ostream &out) {
  Prepare(cfg, out);
  const Waveform mic = ReadWav(cfg.mic), ref = ReadWav(cfg.ref);
  NlmsResult r = NlmsProcess(mic, ref, cfg.nlms);
  const fs::path residual = cfg.out / "residual.wav";
  WriteWav(residual, r.residual);
  const size_t n = mic.samples.size(), tail = n - n / 4 * 3;
  std::span<const double> m(mic.samples), e(r.residual.samples);
  out << "residual=" << residual.string() << "\n";
  out << "erle_db=" << Num(Erle(m, e)) << "\n";
  if (tail > 0)
    out << "erle_tail_db=" << Num(Erle(m.last(tail), e.last(tail))) << "\n";
}

void RunTrain(const RunConfig &cfg, std::ostream &out) {
  Prepare(cfg, out);
  std::vector<TrainExample> examples = LoadExamples(cfg.manifest, cfg.model, cfg.threads);
  TrainResult r = Train(examples, cfg.model, cfg.train, cfg.out);
  out << "checkpoint=" << r.checkpoint.string() << "\n";
  out << "checkpoint_hash=" << fmt::format("{:016x}", r.checkpoint_hash) << "\n";
  out << "parameters=" << ParamCount(cfg.model) << "\n";
  out << "steps=" << r.steps << "\n";
  out << "best_step=" << r.best_step << "\n";
  out << "best_validation_loss=" << Num(r.best_validation_loss) << "\n";
  out << "initial_train_loss=" << Num(r.initial_train_loss) << "\n";
  out << "final_train_loss=" << Num(r.final_train_loss) << "\n";
}

void RunEval(const RunConfig &cfg, std::ostream &out) {
  Prepare(cfg, out);
  EvalOptions opts;
  opts.threads = cfg.threads;
  if (cfg.eval_nlms) opts.nlms = cfg.nlms;
  std::vector<ScoredExample> scores;
  EvalReport report = Evaluate(cfg.checkpoint, cfg.manifest, opts, &scores);
  WriteFileAtomic(cfg.out / "report.json", EvalReportToJson(report).dump(2) + "\n");
  WriteFileAtomic(cfg.out / "report.csv", EvalReportCsv(report));
  WriteFileAtomic(cfg.out / "scores.jsonl", ScoresJsonl(scores));
  out << "report=" << (cfg.out / "report.json").string() << "\n";
  out << "table=" << (cfg.out / "report.csv").string() << "\n";
  if (cfg.roc_svg) {
    WriteFileAtomic(cfg.out / "roc.svg", RocSvg(report));
    out << "roc=" << (cfg.out / "roc.svg").string() << "\n";
  }
  for (const KindReport &k : report.kinds) {
    const std::string kind(KindName(k.kind));
    out << kind << ".n=" << k.n << "\n";
    out << kind << ".auc=" << Num(k.auc) << "\n";
    out << kind << ".eer=" << Num(k.eer) << "\n";
    out << kind << ".mae=" << Num(k.mae) << "\n";
  }
}

void RunReport(const RunConfig &cfg, std::ostream &out) {
  Prepare(cfg, out);
  std::vector<NamedReport> reports;
  for (const auto &[name, path] : cfg.reports) {
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(ReadFile(path));
    } catch (const nlohmann::json::parse_error &e) {
      throw FormatError(path.string() + ": " + e.what());
    }
    reports.push_back({name, EvalReportFromJson(j)});
  }
  WriteFileAtomic(cfg.out / "comparison.csv", ComparisonCsv(reports));
  out << "comparison=" << (cfg.out / "comparison.csv").string() << "\n";
  if (reports[0].report.Find(ScenarioKind::kSelfReferencing)) {
    WriteFileAtomic(cfg.out / "self_referencing_mae.svg", MaeBarSvg(reports));
    out << "chart=" << (cfg.out / "self_referencing_mae.svg").string() << "\n";
  }
}

int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  InitLogging();
  CLI::App app{"Barge-in keyword spotting toolkit: simulate data, cancel echo, "
               "train, evaluate and compare."};
  app.name(args.empty() ? "bargebench" : fs::path(args[0]).filename().string());
  app.require_subcommand(1, 1);
  app.fallthrough();

  CliOverrides cli;
  std::string config, outdir, mic, ref, manifest, checkpoint;
  uint64_t seed = 0;
  int threads = 1, taps = 0, steps = 0;
  double step = 0, eps = 0;
  auto *o_config = app.add_option("--config", config, "TOML run configuration");
  auto *o_seed = app.add_option("--seed", seed, "Seed (overrides the config)");
  auto *o_out = app.add_option("--out", outdir, "Output directory");
  auto *o_threads = app.add_option("--threads", threads, "Worker threads")
                        ->check(CLI::PositiveNumber);

  auto *simulate = app.add_subcommand("simulate", "Synthesize a scenario dataset");
  auto *aec = app.add_subcommand("aec", "NLMS echo cancellation of one mic/ref pair");
  auto *o_mic = aec->add_option("mic", mic, "Microphone WAV");
  auto *o_ref = aec->add_option("ref", ref, "Playback reference WAV");
  CLI::Option *o_taps = nullptr, *o_step = nullptr, *o_eps = nullptr;
  auto *train = app.add_subcommand("train", "Train a keyword model");
  auto *o_tmanifest = train->add_option("--manifest", manifest, "Training manifest");
  auto *o_steps = train->add_option("--steps", steps, "Optimizer steps")
                      ->check(CLI::PositiveNumber);
  auto *eval = app.add_subcommand("eval", "Score a manifest with a checkpoint");
  auto *o_checkpoint = eval->add_option("--checkpoint", checkpoint, "Model checkpoint");
  auto *o_emanifest = eval->add_option("--manifest", manifest, "Evaluation manifest");
  eval->add_flag("--nlms", cli.nlms, "Cancel echo with NLMS before scoring");
  for (CLI::App *sub : {aec, eval}) {
    o_taps = sub->add_option("--taps", taps, "NLMS filter length");
    o_step = sub->add_option("--step", step, "NLMS step size");
    o_eps = sub->add_option("--eps", eps, "NLMS regularizer");
  }
  auto *report = app.add_subcommand("report", "Merge evaluation reports");
  report->add_option("reports", cli.reports, "report.json files, optionally name=path");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  if (!argv.empty()) argv.pop_back();
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (o_config->count()) cli.config = config;
  if (o_seed->count()) cli.seed = seed;
  if (o_out->count()) cli.out = outdir;
  if (o_threads->count()) cli.threads = threads;
  if (o_mic->count()) cli.mic = mic;
  if (o_ref->count()) cli.ref = ref;
  if (o_tmanifest->count() || o_emanifest->count()) cli.manifest = manifest;
  if (o_checkpoint->count()) cli.checkpoint = checkpoint;
  if (o_steps->count()) cli.steps = steps;
  for (CLI::App *sub : {aec, eval}) {
    if (sub->count("--taps")) cli.taps = taps;
    if (sub->count("--step")) cli.step = step;
    if (sub->count("--eps")) cli.eps = eps;
  }
  (void)o_taps;
  (void)o_step;
  (void)o_eps;

  try {
    if (simulate->parsed()) RunSimulate(ResolveRunConfig(Command::kSimulate, cli), out);
    else if (aec->parsed()) RunAec(ResolveRunConfig(Command::kAec, cli), out);
    else if (train->parsed()) RunTrain(ResolveRunConfig(Command::kTrain, cli), out);
    else if (eval->parsed()) RunEval(ResolveRunConfig(Command::kEval, cli), out);
    else RunReport(ResolveRunConfig(Command::kReport, cli), out);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  }
  return kExitOk;
}

}  // namespace bargebench
