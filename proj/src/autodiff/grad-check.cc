// autodiff/grad-check.cc

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

#include "bargebench/autodiff/grad-check.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bargebench/common/error.h"

namespace bargebench::ad {

namespace {

double Evaluate(const TensorFunction &f, const std::vector<Tensor> &inputs) {
  Tensor out = f(inputs);
  if (!out.defined() || out.size() != 1)
    throw ShapeError("grad check needs a scalar function, got shape " +
                     (out.defined() ? ShapeString(out.shape()) : "<none>"));
  return out.item();
}

}  // namespace

GradCheckResult GradCheck(const TensorFunction &f,
                          const std::vector<Tensor> &inputs,
                          const GradCheckOptions &opts) {
  if (!(opts.step > 0.0)) throw ConfigError("grad check step must be positive");
  for (const Tensor &t : inputs)
    if (!t.defined() || !t.requires_grad())
      throw ConfigError("grad check inputs must be parameters");

  for (Tensor t : inputs) t.ZeroGrad();
  Tensor out = f(inputs);
  if (!out.defined() || out.size() != 1)
    throw ShapeError("grad check needs a scalar function, got shape " +
                     (out.defined() ? ShapeString(out.shape()) : "<none>"));
  Backward(out);
  std::vector<std::vector<double>> analytic;
  for (const Tensor &t : inputs) analytic.push_back(t.grad());
  for (Tensor t : inputs) t.ZeroGrad();

  std::mt19937_64 rng(opts.seed);
  GradCheckResult res;
  for (size_t k = 0; k < inputs.size(); ++k) {
    Tensor x = inputs[k];
    std::vector<size_t> coords(x.size());
    std::iota(coords.begin(), coords.end(), size_t{0});
    if (opts.max_coords > 0 && opts.max_coords < coords.size()) {
      std::shuffle(coords.begin(), coords.end(), rng);
      coords.resize(opts.max_coords);
      std::sort(coords.begin(), coords.end());
    }
    for (size_t i : coords) {
      const double orig = x.at(i);
      x.mutable_value()[i] = orig + opts.step;
      const double up = Evaluate(f, inputs);
      x.mutable_value()[i] = orig - opts.step;
      const double down = Evaluate(f, inputs);
      x.mutable_value()[i] = orig;
      const double num = (up - down) / (2.0 * opts.step);
      const double a = analytic[k][i];
      const double denom = std::max({std::abs(a), std::abs(num), opts.denominator_floor});
      const double rel = std::abs(a - num) / denom;
      if (rel >= res.max_rel_error) {
        res.max_rel_error = rel;
        res.worst_input = k;
        res.worst_index = i;
        res.analytic = a;
        res.numeric = num;
      }
    }
  }
  return res;
}

}  // namespace bargebench::ad
