// autodiff/grad-check.h

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

#ifndef BARGEBENCH_AUTODIFF_GRAD_CHECK_H_
#define BARGEBENCH_AUTODIFF_GRAD_CHECK_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bargebench/autodiff/tensor.h"

namespace bargebench::ad {

using TensorFunction = std::function<Tensor(const std::vector<Tensor> &)>;

struct GradCheckOptions {
  double step = 1e-5;
  /// Coordinates probed per input; 0 means all of them.  Sampled coordinates
  /// are drawn without replacement from `seed`.
  size_t max_coords = 0;
  uint64_t seed = 0;
  /// Lower bound on the error denominator.  Central differences of a loss
  /// near 1 carry roughly 1e-11 of rounding, so gradients much below 1e-6
  /// cannot be resolved to 1e-4 relative accuracy.
  double denominator_floor = 1e-8;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  size_t worst_input = 0;
  size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

/// Compares backward() of f against central differences.  `inputs` must be
/// Parameter tensors; they are perturbed in place and restored.  The error of
/// one coordinate is |a - n| / max(|a|, |n|, denominator_floor).  Throws ShapeError if f
/// does not return a single element.
GradCheckResult GradCheck(const TensorFunction &f,
                          const std::vector<Tensor> &inputs,
                          const GradCheckOptions &opts = {});

}  // namespace bargebench::ad

#endif  // BARGEBENCH_AUTODIFF_GRAD_CHECK_H_
