// aec/nlms.h

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

// Time-domain normalized LMS echo canceller.

#ifndef BARGEBENCH_AEC_NLMS_H_
#define BARGEBENCH_AEC_NLMS_H_

#include <span>
#include <vector>

#include "bargebench/audio/waveform.h"

namespace bargebench {

struct NlmsOptions {
  int taps = 1024;  // 64 ms at 16 kHz
  double step = 0.5;
  double eps = 1e-6;
};

/// Throws ConfigError unless taps >= 1, 0 < step <= 2 and eps > 0.
void ValidateNlmsOptions(const NlmsOptions &opts);

/// Streaming filter.  x_n holds the last L reference samples, newest first,
/// zero before the start of the signal.
class NlmsFilter {
 public:
  explicit NlmsFilter(const NlmsOptions &opts);

  /// Feeds one (mic, reference) pair, adapts, and returns the residual
  /// e = mic - w'x.  Throws NumericError on non-finite input or weights.
  double Process(double mic, double reference);

  const std::vector<double> &weights() const { return weights_; }
  const NlmsOptions &options() const { return opts_; }

 private:
  NlmsOptions opts_;
  std::vector<double> weights_;
  std::vector<double> history_;  // 2L, each sample stored twice
  size_t pos_ = 0;
};

struct NlmsResult {
  Waveform residual;
  std::vector<double> weights;
};

/// Runs a fresh filter over the whole signal.  Throws ConfigError for
/// mismatched lengths or rates.
NlmsResult NlmsProcess(const Waveform &mic, const Waveform &reference,
                       const NlmsOptions &opts = {});

/// 10 log10(P_mic / P_residual) with mean-square powers over the given spans.
/// Throws DegenerateSignalError for a silent mic, ConfigError for unequal
/// lengths.  A silent residual gives +infinity.
double Erle(std::span<const double> mic, std::span<const double> residual);

}  // namespace bargebench

#endif  // BARGEBENCH_AEC_NLMS_H_
