// cli/run-config.cc


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

#include "bargebench/cli/run-config.h"

#include <random>
#include <set>

#include <fmt/format.h>

#include "bargebench/cli/toml-json.h"
#include "bargebench/common/error.h"

namespace bargebench {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, 5> kCommandNames = {
    "simulate", "aec", "train", "eval", "report"};

void AllowKeys(const Json &j, const std::string &where,
               std::initializer_list<std::string_view> keys) {
  for (const auto &[k, v] : j.items()) {
    bool ok = false;
    for (std::string_view allowed : keys) ok |= k == allowed;
    if (!ok)
      throw ConfigError(fmt::format("{}{}: unknown key", where.empty() ? "" : where + ".", k));
  }
}

const Json *Find(const Json &j, const char *key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

Json Section(const Json &doc, const char *name) {
  const Json *s = Find(doc, name);
  if (!s) return Json::object();
  if (!s->is_object()) throw ConfigError(std::string(name) + ": expected a table");
  return *s;
}

int64_t GetInt(const Json &v, const std::string &field) {
  if (!v.is_number_integer())
    throw ConfigError(field + ": expected an integer, got " + v.dump());
  return v.get<int64_t>();
}

double GetDouble(const Json &v, const std::string &field) {
  if (!v.is_number()) throw ConfigError(field + ": expected a number, got " + v.dump());
  return v.get<double>();
}

bool GetBool(const Json &v, const std::string &field) {
  if (!v.is_boolean()) throw ConfigError(field + ": expected true or false, got " + v.dump());
  return v.get<bool>();
}

std::string GetString(const Json &v, const std::string &field) {
  if (!v.is_string()) throw ConfigError(field + ": expected a string, got " + v.dump());
  return v.get<std::string>();
}

int GetCount(const Json &v, const std::string &field, int lo) {
  int64_t n = GetInt(v, field);
  if (n < lo || n > std::numeric_limits<int>::max())
    throw ConfigError(fmt::format("{}: {} out of range", field, n));
  return static_cast<int>(n);
}

uint64_t CheckSeed(uint64_t seed, const std::string &field) {
  if (seed > kMaxSeed)
    throw ConfigError(fmt::format("{}: {} exceeds {}", field, seed, kMaxSeed));
  return seed;
}

// Path from the file, relative to its directory.
fs::path FilePath(const Json &v, const std::string &field, const fs::path &base) {
  fs::path p = GetString(v, field);
  if (p.empty()) throw ConfigError(field + ": empty path");
  return fs::absolute(p.is_absolute() ? p : base / p).lexically_normal();
}

fs::path FlagPath(const fs::path &p) { return fs::absolute(p).lexically_normal(); }

void RequireExists(const fs::path &p, const std::string &field) {
  if (!fs::exists(p)) throw ConfigError(field + ": " + p.string() + " does not exist");
}

// Flag, else file, else nothing.
std::optional<fs::path> PickPath(const std::optional<fs::path> &flag, const Json &section,
                                 const char *key, const std::string &field,
                                 const fs::path &base) {
  if (flag) return FlagPath(*flag);
  if (const Json *v = Find(section, key)) return FilePath(*v, field, base);
  return std::nullopt;
}

fs::path RequirePath(std::optional<fs::path> p, const std::string &field) {
  if (!p) throw ConfigError(field + ": required");
  RequireExists(*p, field);
  return *p;
}

void ReadNlms(const Json &aec, const CliOverrides &cli, NlmsOptions *o) {
  if (const Json *v = Find(aec, "taps")) o->taps = GetCount(*v, "aec.taps", 1);
  if (const Json *v = Find(aec, "step")) o->step = GetDouble(*v, "aec.step");
  if (const Json *v = Find(aec, "eps")) o->eps = GetDouble(*v, "aec.eps");
  if (cli.taps) o->taps = *cli.taps;
  if (cli.step) o->step = *cli.step;
  if (cli.eps) o->eps = *cli.eps;
  try {
    ValidateNlmsOptions(*o);
  } catch (const ConfigError &e) {
    throw ConfigError(std::string("aec: ") + e.what());
  }
}

void ReadSimulate(const Json &doc, const fs::path &base, RunConfig *cfg) {
  const Json s = Section(doc, "simulate");
  AllowKeys(s, "simulate",
            {"counts", "keywords", "music_list", "speech_list", "playback_seconds"});
  DatasetConfig &d = cfg->simulate;
  d.seed = cfg->seed;
  if (const Json *c = Find(s, "counts")) {
    if (!c->is_object()) throw ConfigError("simulate.counts: expected a table");
    for (const auto &[k, v] : c->items()) {
      ScenarioKind kind;
      try {
        kind = ParseKind(k);
      } catch (const ConfigError &) {
        throw ConfigError("simulate.counts." + k + ": unknown scenario kind");
      }
      d.counts[static_cast<size_t>(kind)] = GetCount(v, "simulate.counts." + k, 0);
    }
  }
  if (const Json *k = Find(s, "keywords")) {
    if (!k->is_array()) throw ConfigError("simulate.keywords: expected an array");
    d.keywords.clear();
    for (size_t i = 0; i < k->size(); ++i)
      d.keywords.push_back(GetString((*k)[i], fmt::format("simulate.keywords[{}]", i)));
  }
  for (auto [key, dst] : {std::pair{"music_list", &d.music_list},
                          std::pair{"speech_list", &d.speech_list}}) {
    if (const Json *v = Find(s, key)) {
      const std::string field = std::string("simulate.") + key;
      *dst = FilePath(*v, field, base);
      RequireExists(**dst, field);
    }
  }
  if (const Json *v = Find(s, "playback_seconds"))
    d.playback_seconds = GetDouble(*v, "simulate.playback_seconds");
  try {
    ValidateDatasetConfig(d);
  } catch (const ConfigError &e) {
    throw ConfigError(std::string("simulate: ") + e.what());
  }
}

void ReadModel(const Json &doc, RunConfig *cfg) {
  try {
    cfg->model = ModelConfigFromJson(Section(doc, "model"));
  } catch (const ConfigError &e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

void ReadTrain(const Json &doc, const CliOverrides &cli, const fs::path &base,
               RunConfig *cfg) {
  Json t = Section(doc, "train");
  if (Find(t, "seed"))
    throw ConfigError("train.seed: set the top-level seed instead");
  cfg->manifest = RequirePath(PickPath(cli.manifest, t, "manifest", "train.manifest", base),
                              "train.manifest");
  t.erase("manifest");
  if (cli.steps) t["steps"] = *cli.steps;
  try {
    cfg->train = TrainConfigFromJson(t);
  } catch (const ConfigError &e) {
    throw ConfigError(std::string("train: ") + e.what());
  }
  cfg->train.seed = cfg->seed;
}

void ReadEval(const Json &doc, const CliOverrides &cli, const fs::path &base,
              RunConfig *cfg) {
  const Json e = Section(doc, "eval");
  AllowKeys(e, "eval", {"checkpoint", "manifest", "nlms", "roc_svg"});
  cfg->checkpoint = RequirePath(
      PickPath(cli.checkpoint, e, "checkpoint", "eval.checkpoint", base), "eval.checkpoint");
  cfg->manifest = RequirePath(PickPath(cli.manifest, e, "manifest", "eval.manifest", base),
                              "eval.manifest");
  if (const Json *v = Find(e, "nlms")) cfg->eval_nlms = GetBool(*v, "eval.nlms");
  if (cli.nlms) cfg->eval_nlms = true;
  if (const Json *v = Find(e, "roc_svg")) cfg->roc_svg = GetBool(*v, "eval.roc_svg");
  const Json aec = Section(doc, "aec");
  AllowKeys(aec, "aec", {"mic", "ref", "taps", "step", "eps"});
  ReadNlms(aec, cli, &cfg->nlms);
}

void ReadAec(const Json &doc, const CliOverrides &cli, const fs::path &base,
             RunConfig *cfg) {
  const Json a = Section(doc, "aec");
  AllowKeys(a, "aec", {"mic", "ref", "taps", "step", "eps"});
  cfg->mic = RequirePath(PickPath(cli.mic, a, "mic", "aec.mic", base), "aec.mic");
  cfg->ref = RequirePath(PickPath(cli.ref, a, "ref", "aec.ref", base), "aec.ref");
  ReadNlms(a, cli, &cfg->nlms);
}

std::pair<std::string, fs::path> SplitReportArg(const std::string &arg,
                                                const std::string &field,
                                                const fs::path &base, bool from_file) {
  std::string name, path = arg;
  // "name=path", unless the '=' belongs to the path itself.
  if (auto eq = arg.find('='); eq != std::string::npos && eq > 0 &&
                               arg.find('/') > eq) {
    name = arg.substr(0, eq);
    path = arg.substr(eq + 1);
  }
  fs::path p = from_file ? FilePath(Json(path), field, base) : FlagPath(path);
  if (name.empty()) {
    name = p.parent_path().filename().string();
    if (name.empty()) name = p.stem().string();
  }
  RequireExists(p, field);
  return {name, p};
}

void ReadReport(const Json &doc, const CliOverrides &cli, const fs::path &base,
                RunConfig *cfg) {
  const Json r = Section(doc, "report");
  AllowKeys(r, "report", {"inputs"});
  if (!cli.reports.empty()) {
    for (size_t i = 0; i < cli.reports.size(); ++i)
      cfg->reports.push_back(SplitReportArg(cli.reports[i],
                                            fmt::format("report.inputs[{}]", i), base, false));
  } else if (const Json *in = Find(r, "inputs")) {
    if (!in->is_array()) throw ConfigError("report.inputs: expected an array");
    for (size_t i = 0; i < in->size(); ++i) {
      const std::string field = fmt::format("report.inputs[{}]", i);
      cfg->reports.push_back(SplitReportArg(GetString((*in)[i], field), field, base, true));
    }
  }
  if (cfg->reports.empty()) throw ConfigError("report.inputs: required");
}

void FlattenEcho(const Json &j, const std::string &prefix,
                 std::vector<std::string> *lines) {
  for (const auto &[k, v] : j.items()) {
    const std::string key = prefix + "." + k;
    if (v.is_object()) {
      FlattenEcho(v, key, lines);
    } else if (v.is_string()) {
      lines->push_back(key + "=" + v.get<std::string>());
    } else if (v.is_array()) {
      std::string s;
      for (const Json &e : v)
        s += (s.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : e.dump());
      lines->push_back(key + "=" + s);
    } else if (v.is_number_float()) {
      lines->push_back(key + "=" + fmt::format("{}", v.get<double>()));
    } else {
      lines->push_back(key + "=" + v.dump());
    }
  }
}

}  // namespace

std::string_view CommandName(Command c) { return kCommandNames[static_cast<size_t>(c)]; }

RunConfig ResolveRunConfig(Command command, const CliOverrides &cli) {
  Json doc = Json::object();
  fs::path base = fs::current_path();
  if (cli.config) {
    RequireExists(*cli.config, "--config");
    doc = ReadTomlFile(*cli.config);
    base = FlagPath(*cli.config).parent_path();
  }
  AllowKeys(doc, "", {"seed", "out", "threads", "simulate", "aec", "model", "train",
                      "eval", "report"});
  RunConfig cfg;
  cfg.command = command;

  if (cli.seed) {
    cfg.seed = CheckSeed(*cli.seed, "seed");
  } else if (const Json *v = Find(doc, "seed")) {
    const int64_t s = GetInt(*v, "seed");
    if (s < 0) throw ConfigError("seed: must be non-negative");
    cfg.seed = static_cast<uint64_t>(s);
  } else {
    std::random_device rd;
    cfg.seed = ((uint64_t{rd()} << 32) | rd()) & kMaxSeed;
  }

  if (auto out = PickPath(cli.out, doc, "out", "out", base)) cfg.out = *out;
  else throw ConfigError("out: required (--out or top-level 'out')");

  if (cli.threads) cfg.threads = *cli.threads;
  else if (const Json *v = Find(doc, "threads")) cfg.threads = GetCount(*v, "threads", 1);
  if (cfg.threads < 1) throw ConfigError("threads: must be at least 1");

  switch (command) {
    case Command::kSimulate: ReadSimulate(doc, base, &cfg); break;
    case Command::kAec: ReadAec(doc, cli, base, &cfg); break;
    case Command::kTrain:
      ReadModel(doc, &cfg);
      ReadTrain(doc, cli, base, &cfg);
      break;
    case Command::kEval: ReadEval(doc, cli, base, &cfg); break;
    case Command::kReport: ReadReport(doc, cli, base, &cfg); break;
  }
  return cfg;
}

Json ResolvedConfigJson(const RunConfig &cfg) {
  Json j;
  j["seed"] = cfg.seed;
  j["out"] = cfg.out.string();
  j["threads"] = cfg.threads;
  auto nlms = [&] {
    return Json{{"taps", cfg.nlms.taps}, {"step", cfg.nlms.step}, {"eps", cfg.nlms.eps}};
  };
  switch (cfg.command) {
    case Command::kSimulate: {
      const DatasetConfig &d = cfg.simulate;
      Json counts;
      for (ScenarioKind k : kAllScenarioKinds)
        counts[std::string(KindName(k))] = d.counts[static_cast<size_t>(k)];
      Json s = {{"counts", counts}, {"keywords", d.keywords}};
      if (d.music_list) s["music_list"] = d.music_list->string();
      if (d.speech_list) s["speech_list"] = d.speech_list->string();
      s["playback_seconds"] = d.playback_seconds;
      j["simulate"] = s;
      break;
    }
    case Command::kAec: {
      Json a = {{"mic", cfg.mic.string()}, {"ref", cfg.ref.string()}};
      a.update(nlms());
      j["aec"] = a;
      break;
    }
    case Command::kTrain: {
      j["model"] = ModelConfigToJson(cfg.model);
      Json t = {{"manifest", cfg.manifest.string()}};
      Json tc = TrainConfigToJson(cfg.train);
      tc.erase("seed");
      t.update(tc);
      j["train"] = t;
      break;
    }
    case Command::kEval:
      j["eval"] = {{"checkpoint", cfg.checkpoint.string()},
                   {"manifest", cfg.manifest.string()},
                   {"nlms", cfg.eval_nlms},
                   {"roc_svg", cfg.roc_svg}};
      if (cfg.eval_nlms) j["aec"] = nlms();
      break;
    case Command::kReport: {
      Json in = Json::array();
      for (const auto &[name, path] : cfg.reports) in.push_back(name + "=" + path.string());
      j["report"] = {{"inputs", in}};
      break;
    }
  }
  return j;
}

std::vector<std::string> EchoLines(const RunConfig &cfg) {
  std::vector<std::string> lines;
  FlattenEcho(ResolvedConfigJson(cfg), "config", &lines);
  return lines;
}

}  // namespace bargebench
