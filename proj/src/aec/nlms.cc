// aec/nlms.cc

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

#include "bargebench/aec/nlms.h"

#include <cmath>
#include <limits>
#include <string>

#include "bargebench/common/error.h"

namespace bargebench {

void ValidateNlmsOptions(const NlmsOptions &opts) {
  if (opts.taps < 1)
    throw ConfigError("nlms taps must be >= 1, got " + std::to_string(opts.taps));
  if (!(opts.step > 0.0 && opts.step <= 2.0))
    throw ConfigError("nlms step must lie in (0, 2], got " +
                      std::to_string(opts.step));
  if (!(opts.eps > 0.0))
    throw ConfigError("nlms eps must be positive, got " +
                      std::to_string(opts.eps));
}

NlmsFilter::NlmsFilter(const NlmsOptions &opts) : opts_(opts) {
  ValidateNlmsOptions(opts);
  weights_.assign(opts.taps, 0.0);
  history_.assign(2 * static_cast<size_t>(opts.taps), 0.0);
}

double NlmsFilter::Process(double mic, double reference) {
  if (!std::isfinite(mic) || !std::isfinite(reference))
    throw NumericError("non-finite sample fed to NLMS");
  const size_t n = weights_.size();
  pos_ = pos_ == 0 ? n - 1 : pos_ - 1;
  history_[pos_] = history_[pos_ + n] = reference;
  const double *x = history_.data() + pos_;
  double y = 0.0, energy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    y += weights_[i] * x[i];
    energy += x[i] * x[i];
  }
  const double e = mic - y;
  const double g = opts_.step * e / (opts_.eps + energy);
  for (size_t i = 0; i < n; ++i) weights_[i] += g * x[i];
  if (!std::isfinite(g)) throw NumericError("NLMS weights diverged");
  return e;
}

NlmsResult NlmsProcess(const Waveform &mic, const Waveform &reference,
                       const NlmsOptions &opts) {
  if (mic.size() != reference.size())
    throw ConfigError("mic and reference lengths differ (" +
                      std::to_string(mic.size()) + " vs " +
                      std::to_string(reference.size()) + ")");
  if (mic.sample_rate != reference.sample_rate)
    throw ConfigError("mic and reference sample rates differ");
  NlmsFilter filter(opts);
  NlmsResult out;
  out.residual.sample_rate = mic.sample_rate;
  out.residual.samples.resize(mic.size());
  for (size_t i = 0; i < mic.size(); ++i)
    out.residual.samples[i] = filter.Process(mic.samples[i], reference.samples[i]);
  out.weights = filter.weights();
  return out;
}

double Erle(std::span<const double> mic, std::span<const double> residual) {
  if (mic.size() != residual.size())
    throw ConfigError("mic and residual lengths differ");
  const double pm = MeanPower(mic);
  if (pm == 0.0) throw DegenerateSignalError("ERLE of a silent mic signal");
  const double pr = MeanPower(residual);
  if (pr == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(pm / pr);
}

}  // namespace bargebench
