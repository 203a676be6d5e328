// audio/log-mel.h

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

#ifndef BARGEBENCH_AUDIO_LOG_MEL_H_
#define BARGEBENCH_AUDIO_LOG_MEL_H_

#include <cstddef>
#include <vector>

#include "bargebench/audio/waveform.h"

namespace bargebench {

/// Floor added to mel power before the log.
inline constexpr double kFeatureEpsilon = 1e-10;

struct MelOptions {
  int n_mels = 40;
  double win_s = 0.025;
  double hop_s = 0.010;
  double low_hz = 0.0;
  double high_hz = 8000.0;
};

/// Time-major T_f x F matrix.
struct FeatureMatrix {
  std::vector<double> frames;  // row-major, num_frames * num_bins
  size_t num_frames = 0;
  size_t num_bins = 0;
  double frame_hop = 0.0;
  double frame_len = 0.0;

  double at(size_t t, size_t f) const { return frames[t * num_bins + f]; }
  bool empty() const { return num_frames == 0; }
};

/// 1 + floor((n - win) / hop) for n >= win, else 0.
size_t NumFrames(size_t num_samples, size_t win, size_t hop);

/// HTK mel scale.
double HzToMel(double hz);
double MelToHz(double mel);

/// Triangular filters on the rfft bins of an fft_size transform, n_mels rows
/// of fft_size/2+1 weights each.
std::vector<std::vector<double>> MelFilterbank(const MelOptions &opts,
                                               int sample_rate,
                                               size_t fft_size);

/// Hann-windowed power spectrum -> mel energies -> log(energy + 1e-10).
/// Requires a 16 kHz waveform and win >= hop > 0.  A waveform shorter than
/// one window yields an empty matrix.
FeatureMatrix LogMel(const Waveform &w, const MelOptions &opts = {});

}  // namespace bargebench

#endif  // BARGEBENCH_AUDIO_LOG_MEL_H_
