// autodiff/params.cc

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

#include "bargebench/autodiff/params.h"

#include <cmath>

#include "bargebench/common/error.h"
#include "bargebench/common/file-util.h"

namespace bargebench::ad {

using nlohmann::ordered_json;

Tensor ParamStore::Create(const std::string &name, Shape shape,
                          std::vector<double> values) {
  if (name.empty()) throw ConfigError("parameter name is empty");
  if (Contains(name)) throw ConfigError("duplicate parameter '" + name + "'");
  Tensor t = Tensor::Parameter(std::move(shape), std::move(values));
  entries_.push_back({name, t});
  return t;
}

bool ParamStore::Contains(const std::string &name) const {
  for (const auto &e : entries_)
    if (e.name == name) return true;
  return false;
}

const Tensor &ParamStore::Get(const std::string &name) const {
  for (const auto &e : entries_)
    if (e.name == name) return e.tensor;
  throw ConfigError("no parameter named '" + name + "'");
}

size_t ParamStore::NumParameters() const { return NumParameters(""); }

size_t ParamStore::NumParameters(const std::string &prefix) const {
  size_t n = 0;
  for (const auto &e : entries_)
    if (e.name.compare(0, prefix.size(), prefix) == 0) n += e.tensor.size();
  return n;
}

void ParamStore::ZeroGrad() {
  for (auto &e : entries_) e.tensor.ZeroGrad();
}

void SaveCheckpoint(const ParamStore &store, const ordered_json &meta,
                    const std::string &path) {
  ordered_json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["meta"] = meta;
  ordered_json params = ordered_json::array();
  for (const auto &e : store.entries()) {
    for (double v : e.tensor.value())
      if (!std::isfinite(v))
        throw NumericError("parameter '" + e.name + "' is not finite");
    ordered_json p;
    p["name"] = e.name;
    p["shape"] = e.tensor.shape();
    p["values"] = e.tensor.value();
    params.push_back(std::move(p));
  }
  j["params"] = std::move(params);
  WriteFileAtomic(path, j.dump() + "\n");
}

Checkpoint ReadCheckpoint(const std::string &path) {
  const std::string text = ReadFile(path);
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error &e) {
    throw FormatError(path + ": not JSON (" + e.what() + ")");
  }
  try {
    if (!j.is_object() || j.value("format", "") != kCheckpointFormat)
      throw FormatError(path + ": not a checkpoint");
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion)
      throw FormatError(path + ": checkpoint version " +
                        std::to_string(version) + ", expected " +
                        std::to_string(kCheckpointVersion));
    Checkpoint ckpt;
    ckpt.meta = j.at("meta");
    for (const auto &p : j.at("params")) {
      CheckpointArray a;
      a.name = p.at("name").get<std::string>();
      a.shape = p.at("shape").get<Shape>();
      a.values = p.at("values").get<std::vector<double>>();
      if (NumElements(a.shape) != a.values.size())
        throw FormatError(path + ": parameter '" + a.name + "' has " +
                          std::to_string(a.values.size()) +
                          " values for shape " + ShapeString(a.shape));
      ckpt.arrays.push_back(std::move(a));
    }
    return ckpt;
  } catch (const ordered_json::exception &e) {
    throw FormatError(path + ": malformed checkpoint (" + e.what() + ")");
  } catch (const ShapeError &e) {
    throw FormatError(path + ": " + e.what());
  }
}

void ApplyCheckpoint(const Checkpoint &ckpt, ParamStore *store) {
  const auto &entries = store->entries();
  if (ckpt.arrays.size() != entries.size())
    throw FormatError("checkpoint holds " + std::to_string(ckpt.arrays.size()) +
                      " parameters, model has " +
                      std::to_string(entries.size()));
  for (size_t i = 0; i < entries.size(); ++i) {
    const CheckpointArray &a = ckpt.arrays[i];
    const NamedParam &e = entries[i];
    if (a.name != e.name)
      throw FormatError("checkpoint parameter " + std::to_string(i) + " is '" +
                        a.name + "', model expects '" + e.name + "'");
    if (a.shape != e.tensor.shape())
      throw FormatError("parameter '" + e.name + "' has shape " +
                        ShapeString(a.shape) + " in the checkpoint, " +
                        ShapeString(e.tensor.shape()) + " in the model");
  }
  for (size_t i = 0; i < entries.size(); ++i) {
    Tensor t = entries[i].tensor;
    t.mutable_value() = ckpt.arrays[i].values;
  }
}

uint64_t HashFile(const std::string &path) { return Fnv1a64(ReadFile(path)); }

}  // namespace bargebench::ad
