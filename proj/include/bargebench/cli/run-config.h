// cli/run-config.h


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

// Resolved configuration of one command-line run: the TOML file, overridden
// by flags, with defaults filled in, paths made absolute and the seed fixed.

#ifndef BARGEBENCH_CLI_RUN_CONFIG_H_
#define BARGEBENCH_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bargebench/aec/nlms.h"
#include "bargebench/kws/model-config.h"
#include "bargebench/kws/trainer.h"
#include "bargebench/room/dataset.h"

namespace bargebench {

enum class Command { kSimulate, kAec, kTrain, kEval, kReport };

std::string_view CommandName(Command c);

/// Values given on the command line.  Unset fields fall back to the config
/// file, then to defaults.  Relative paths here are taken from the working
/// directory; relative paths in the file from the file's directory.
struct CliOverrides {
  std::optional<std::filesystem::path> config;
  std::optional<uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<int> threads;
  // aec
  std::optional<std::filesystem::path> mic, ref;
  std::optional<int> taps;
  std::optional<double> step, eps;
  // train / eval
  std::optional<std::filesystem::path> manifest, checkpoint;
  std::optional<int> steps;
  bool nlms = false;
  // report: "name=path" or "path"
  std::vector<std::string> reports;
};

struct RunConfig {
  Command command = Command::kSimulate;
  uint64_t seed = 0;
  std::filesystem::path out;
  int threads = 1;

  DatasetConfig simulate;
  std::filesystem::path mic, ref;
  NlmsOptions nlms;
  std::filesystem::path manifest;  // train, eval
  ModelConfig model;
  TrainConfig train;
  std::filesystem::path checkpoint;
  bool eval_nlms = false;
  bool roc_svg = true;
  std::vector<std::pair<std::string, std::filesystem::path>> reports;
};

/// Largest seed a TOML integer can carry.
inline constexpr uint64_t kMaxSeed = (uint64_t{1} << 63) - 1;

/// Builds and validates the run.  Throws ConfigError naming the offending
/// key ("train.manifest", "simulate.counts.Music", ...) for unknown keys,
/// wrong types, invalid values and input paths that do not exist.  A missing
/// seed is drawn from std::random_device.
RunConfig ResolveRunConfig(Command command, const CliOverrides &cli);

/// The sections the command reads, fully populated.  Passing it back through
/// --config reproduces the run.
nlohmann::ordered_json ResolvedConfigJson(const RunConfig &cfg);

/// "config.<dotted key>=<value>" for every scalar of ResolvedConfigJson.
std::vector<std::string> EchoLines(const RunConfig &cfg);

}  // namespace bargebench

#endif  // BARGEBENCH_CLI_RUN_CONFIG_H_
