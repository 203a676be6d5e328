// audio/waveform.cc

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

#include "bargebench/audio/waveform.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "bargebench/common/error.h"
#include "fftw-lock.h"

namespace bargebench {

void ValidateWaveform(const Waveform &w) {
  if (w.sample_rate <= 0)
    throw ConfigError("waveform sample_rate=" + std::to_string(w.sample_rate) +
                      " must be positive");
  for (size_t i = 0; i < w.samples.size(); ++i) {
    if (!std::isfinite(w.samples[i]))
      throw ConfigError("waveform sample " + std::to_string(i) +
                        " is not finite");
  }
}

void RequireOperatingRate(const Waveform &w, const char *what) {
  if (w.sample_rate != kSampleRate)
    throw ConfigError(std::string(what) + ": sample_rate=" +
                      std::to_string(w.sample_rate) + ", only " +
                      std::to_string(kSampleRate) + " is supported");
}

double MeanPower(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

double SupportPower(std::span<const double> x) {
  auto nonzero = [](double v) { return v != 0.0; };
  auto first = std::find_if(x.begin(), x.end(), nonzero);
  if (first == x.end()) return 0.0;
  auto last = std::find_if(x.rbegin(), x.rend(), nonzero).base();
  return MeanPower(std::span<const double>(&*first, last - first));
}

namespace {

std::vector<double> DirectConvolve(std::span<const double> a,
                                   std::span<const double> b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

size_t NextFastSize(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

std::mutex &FftwPlannerMutex() {
  static std::mutex m;
  return m;
}

std::vector<double> Convolve(std::span<const double> a,
                             std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const size_t out_len = a.size() + b.size() - 1;
  if (std::min(a.size(), b.size()) <= 64) return DirectConvolve(a, b);

  const size_t n = NextFastSize(out_len);
  const size_t nc = n / 2 + 1;
  double *buf = fftw_alloc_real(n);
  fftw_complex *fa = fftw_alloc_complex(nc);
  fftw_complex *fb = fftw_alloc_complex(nc);
  fftw_plan fwd, inv;
  {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf, fa, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), fa, buf, FFTW_ESTIMATE);
  }

  std::fill(buf, buf + n, 0.0);
  std::copy(a.begin(), a.end(), buf);
  fftw_execute_dft_r2c(fwd, buf, fa);
  std::fill(buf, buf + n, 0.0);
  std::copy(b.begin(), b.end(), buf);
  fftw_execute_dft_r2c(fwd, buf, fb);
  for (size_t k = 0; k < nc; ++k) {
    std::complex<double> za(fa[k][0], fa[k][1]), zb(fb[k][0], fb[k][1]);
    std::complex<double> z = za * zb;
    fa[k][0] = z.real();
    fa[k][1] = z.imag();
  }
  fftw_execute_dft_c2r(inv, fa, buf);

  std::vector<double> out(out_len);
  const double scale = 1.0 / static_cast<double>(n);
  for (size_t i = 0; i < out_len; ++i) out[i] = buf[i] * scale;

  {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  fftw_free(fa);
  fftw_free(fb);
  fftw_free(buf);
  return out;
}

std::vector<double> DelaySamples(std::span<const double> x, size_t shift) {
  std::vector<double> out(shift + x.size(), 0.0);
  std::copy(x.begin(), x.end(), out.begin() + shift);
  return out;
}

void PadTo(std::vector<double> *x, size_t n) {
  if (x->size() < n) x->resize(n, 0.0);
}

}  // namespace bargebench
