// audio/waveform.h

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

#ifndef BARGEBENCH_AUDIO_WAVEFORM_H_
#define BARGEBENCH_AUDIO_WAVEFORM_H_

#include <cstddef>
#include <span>
#include <vector>

namespace bargebench {

/// The single operating rate of every DSP path.  Other rates are rejected,
/// never resampled.
inline constexpr int kSampleRate = 16000;

/// Mono audio.  Amplitudes are nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  Waveform() = default;
  Waveform(std::vector<double> s, int rate)
      : samples(std::move(s)), sample_rate(rate) {}

  size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Throws ConfigError if the rate is not positive or a sample is not finite.
void ValidateWaveform(const Waveform &w);

/// Throws ConfigError unless w.sample_rate == kSampleRate.
void RequireOperatingRate(const Waveform &w, const char *what);

/// Mean squared amplitude over all samples (0 for an empty signal).
double MeanPower(std::span<const double> x);

/// Mean squared amplitude over the span between the first and last nonzero
/// sample.  Returns 0 for an all-zero signal.
double SupportPower(std::span<const double> x);

/// Full linear convolution, length a.size() + b.size() - 1 (empty if either
/// input is empty).  FFT-based above a small size.
std::vector<double> Convolve(std::span<const double> a,
                             std::span<const double> b);

/// Prepends `shift` zeros.
std::vector<double> DelaySamples(std::span<const double> x, size_t shift);

/// Zero-pads (or leaves) x to length n.
void PadTo(std::vector<double> *x, size_t n);

}  // namespace bargebench

#endif  // BARGEBENCH_AUDIO_WAVEFORM_H_
