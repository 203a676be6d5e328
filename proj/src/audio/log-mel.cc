// audio/log-mel.cc

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

#include "bargebench/audio/log-mel.h"

#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "bargebench/common/error.h"
#include "fftw-lock.h"

namespace bargebench {

size_t NumFrames(size_t num_samples, size_t win, size_t hop) {
  if (win == 0 || hop == 0 || num_samples < win) return 0;
  return 1 + (num_samples - win) / hop;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

std::vector<std::vector<double>> MelFilterbank(const MelOptions &opts,
                                               int sample_rate,
                                               size_t fft_size) {
  const size_t n_bins = fft_size / 2 + 1;
  const double mel_lo = HzToMel(opts.low_hz), mel_hi = HzToMel(opts.high_hz);
  std::vector<double> edges(opts.n_mels + 2);
  for (int i = 0; i < opts.n_mels + 2; ++i)
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (opts.n_mels + 1));

  std::vector<std::vector<double>> bank(opts.n_mels,
                                        std::vector<double>(n_bins, 0.0));
  for (int m = 0; m < opts.n_mels; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    for (size_t k = 0; k < n_bins; ++k) {
      double f = static_cast<double>(k) * sample_rate / fft_size;
      if (f > left && f <= center)
        bank[m][k] = (f - left) / (center - left);
      else if (f > center && f < right)
        bank[m][k] = (right - f) / (right - center);
    }
  }
  return bank;
}

FeatureMatrix LogMel(const Waveform &w, const MelOptions &opts) {
  RequireOperatingRate(w, "log_mel");
  const size_t win = static_cast<size_t>(std::lround(opts.win_s * w.sample_rate));
  const size_t hop = static_cast<size_t>(std::lround(opts.hop_s * w.sample_rate));
  if (hop == 0 || win < hop)
    throw ConfigError("log_mel: need win >= hop > 0");
  if (opts.n_mels <= 0) throw ConfigError("log_mel: n_mels must be positive");

  FeatureMatrix out;
  out.frame_hop = opts.hop_s;
  out.frame_len = opts.win_s;
  out.num_bins = static_cast<size_t>(opts.n_mels);
  out.num_frames = NumFrames(w.size(), win, hop);
  if (out.num_frames == 0) return out;

  size_t fft_size = 1;
  while (fft_size < win) fft_size <<= 1;
  const size_t n_bins = fft_size / 2 + 1;
  const auto bank = MelFilterbank(opts, w.sample_rate, fft_size);

  std::vector<double> window(win);
  for (size_t i = 0; i < win; ++i)
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / win);

  double *frame = fftw_alloc_real(fft_size);
  fftw_complex *spec = fftw_alloc_complex(n_bins);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(fft_size), frame, spec,
                                FFTW_ESTIMATE);
  }

  out.frames.assign(out.num_frames * out.num_bins, 0.0);
  std::vector<double> power(n_bins);
  for (size_t t = 0; t < out.num_frames; ++t) {
    const double *src = w.samples.data() + t * hop;
    for (size_t i = 0; i < fft_size; ++i)
      frame[i] = i < win ? src[i] * window[i] : 0.0;
    fftw_execute(plan);
    for (size_t k = 0; k < n_bins; ++k)
      power[k] = spec[k][0] * spec[k][0] + spec[k][1] * spec[k][1];
    for (size_t m = 0; m < out.num_bins; ++m) {
      double e = 0.0;
      for (size_t k = 0; k < n_bins; ++k) e += bank[m][k] * power[k];
      out.frames[t * out.num_bins + m] = std::log(e + kFeatureEpsilon);
    }
  }

  {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(spec);
  fftw_free(frame);
  return out;
}

}  // namespace bargebench
