// autodiff/adam.h

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

#ifndef BARGEBENCH_AUTODIFF_ADAM_H_
#define BARGEBENCH_AUTODIFF_ADAM_H_

#include <cstdint>
#include <vector>

#include "bargebench/autodiff/params.h"

namespace bargebench::ad {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Throws ConfigError unless lr > 0, betas in [0, 1) and epsilon > 0.
void ValidateAdamOptions(const AdamOptions &opts);

/// Adam with bias correction over every tensor of a ParamStore.  The store
/// must outlive the optimizer and must not gain parameters afterwards.
class Adam {
 public:
  Adam(ParamStore *store, const AdamOptions &opts);

  /// One update from the accumulated gradients, which are zeroed afterwards.
  /// If any gradient holds a non-finite value nothing is updated and a
  /// NumericError names the parameter and the coordinate.
  void Step();

  int64_t step_count() const { return step_; }
  const AdamOptions &options() const { return opts_; }
  const std::vector<std::vector<double>> &first_moments() const { return m_; }
  const std::vector<std::vector<double>> &second_moments() const { return v_; }

 private:
  ParamStore *store_;
  AdamOptions opts_;
  int64_t step_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

}  // namespace bargebench::ad

#endif  // BARGEBENCH_AUTODIFF_ADAM_H_
