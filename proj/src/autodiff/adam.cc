// autodiff/adam.cc

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

#include "bargebench/autodiff/adam.h"

#include <cmath>
#include <string>

#include "bargebench/common/error.h"

namespace bargebench::ad {

void ValidateAdamOptions(const AdamOptions &opts) {
  if (!(opts.learning_rate > 0.0) || !std::isfinite(opts.learning_rate))
    throw ConfigError("adam learning rate must be positive, got " +
                      std::to_string(opts.learning_rate));
  if (!(opts.beta1 >= 0.0 && opts.beta1 < 1.0))
    throw ConfigError("adam beta1 must lie in [0, 1)");
  if (!(opts.beta2 >= 0.0 && opts.beta2 < 1.0))
    throw ConfigError("adam beta2 must lie in [0, 1)");
  if (!(opts.epsilon > 0.0)) throw ConfigError("adam epsilon must be positive");
}

Adam::Adam(ParamStore *store, const AdamOptions &opts)
    : store_(store), opts_(opts) {
  ValidateAdamOptions(opts_);
  for (const auto &e : store_->entries()) {
    m_.emplace_back(e.tensor.size(), 0.0);
    v_.emplace_back(e.tensor.size(), 0.0);
  }
}

void Adam::Step() {
  const auto &entries = store_->entries();
  if (entries.size() != m_.size())
    throw ConfigError("parameter set changed after the optimizer was built");
  // Validate everything before touching any parameter.
  for (const auto &e : entries) {
    const Node &n = *e.tensor.node();
    for (size_t i = 0; i < n.grad.size(); ++i)
      if (!std::isfinite(n.grad[i]))
        throw NumericError("non-finite gradient " + std::to_string(n.grad[i]) +
                           " in parameter '" + e.name + "' at index " +
                           std::to_string(i) + "; update aborted");
  }
  ++step_;
  const double t = static_cast<double>(step_);
  const double c1 = 1.0 - std::pow(opts_.beta1, t);
  const double c2 = 1.0 - std::pow(opts_.beta2, t);
  for (size_t k = 0; k < entries.size(); ++k) {
    Tensor p = entries[k].tensor;
    const std::vector<double> &g = p.node()->grad;
    if (g.empty()) {
      // Zero gradient: the moments still decay.
      for (size_t i = 0; i < m_[k].size(); ++i) {
        m_[k][i] *= opts_.beta1;
        v_[k][i] *= opts_.beta2;
      }
    } else {
      for (size_t i = 0; i < g.size(); ++i) {
        m_[k][i] = opts_.beta1 * m_[k][i] + (1.0 - opts_.beta1) * g[i];
        v_[k][i] = opts_.beta2 * v_[k][i] + (1.0 - opts_.beta2) * g[i] * g[i];
      }
    }
    std::vector<double> &w = p.mutable_value();
    for (size_t i = 0; i < w.size(); ++i) {
      const double m_hat = m_[k][i] / c1;
      const double v_hat = v_[k][i] / c2;
      w[i] -= opts_.learning_rate * m_hat / (std::sqrt(v_hat) + opts_.epsilon);
    }
    p.ZeroGrad();
  }
}

}  // namespace bargebench::ad
