// autodiff/params.h

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

// Named parameter sets and their JSON checkpoints.

#ifndef BARGEBENCH_AUTODIFF_PARAMS_H_
#define BARGEBENCH_AUTODIFF_PARAMS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "bargebench/autodiff/tensor.h"

namespace bargebench::ad {

inline constexpr const char *kCheckpointFormat = "bargebench-checkpoint";
inline constexpr int kCheckpointVersion = 1;

struct NamedParam {
  std::string name;
  Tensor tensor;
};

/// Insertion-ordered set of trainable tensors.  Order fixes the checkpoint
/// layout and the optimizer's traversal.
class ParamStore {
 public:
  /// Throws ConfigError on a duplicate name, ShapeError on a size mismatch.
  Tensor Create(const std::string &name, Shape shape, std::vector<double> values);
  bool Contains(const std::string &name) const;
  /// Throws ConfigError naming the missing parameter.
  const Tensor &Get(const std::string &name) const;
  const std::vector<NamedParam> &entries() const { return entries_; }
  size_t NumParameters() const;
  /// Element count over names starting with prefix.
  size_t NumParameters(const std::string &prefix) const;
  void ZeroGrad();

 private:
  std::vector<NamedParam> entries_;
};

struct CheckpointArray {
  std::string name;
  Shape shape;
  std::vector<double> values;
};

struct Checkpoint {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  std::vector<CheckpointArray> arrays;
};

/// Writes {format, version, meta, params: [{name, shape, values}]} through a
/// temporary file and a rename, so readers never see a partial checkpoint.
/// Values are printed with round-trip precision.
void SaveCheckpoint(const ParamStore &store, const nlohmann::ordered_json &meta,
                    const std::string &path);

/// Throws IoError if unreadable, FormatError on a schema or version mismatch.
Checkpoint ReadCheckpoint(const std::string &path);

/// Copies values into the store.  Names, order and shapes must match exactly;
/// anything else is a FormatError naming the offending parameter.
void ApplyCheckpoint(const Checkpoint &ckpt, ParamStore *store);

/// FNV-1a 64 over the file bytes.
uint64_t HashFile(const std::string &path);

}  // namespace bargebench::ad

#endif  // BARGEBENCH_AUTODIFF_PARAMS_H_
