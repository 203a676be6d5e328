// tests/support/echo-fixture.h

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

// Synthetic single-talk echo: white-noise reference through a fixed random
// 8-tap FIR, no near-end signal.

#ifndef BARGEBENCH_TESTS_SUPPORT_ECHO_FIXTURE_H_
#define BARGEBENCH_TESTS_SUPPORT_ECHO_FIXTURE_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace bargebench::testing {

struct EchoFixture {
  std::vector<double> reference, mic, path;
};

inline EchoFixture MakeEchoFixture(uint64_t seed, size_t n, size_t taps = 8) {
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return (gen() >> 11) * 0x1.0p-53; };
  auto normal = [&] {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * uniform());
  };
  EchoFixture f;
  for (size_t k = 0; k < taps; ++k)
    f.path.push_back(normal() * std::pow(0.7, static_cast<double>(k)));
  f.reference.resize(n);
  for (double &v : f.reference) v = 0.1 * normal();
  f.mic.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < taps && k <= i; ++k)
      f.mic[i] += f.path[k] * f.reference[i - k];
  return f;
}

/// ||w - w_true||^2 / ||w_true||^2 in dB, w_true zero-extended to w's length.
inline double MisalignmentDb(const std::vector<double> &w,
                             const std::vector<double> &truth) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    double t = i < truth.size() ? truth[i] : 0.0;
    num += (w[i] - t) * (w[i] - t);
    den += t * t;
  }
  return 10.0 * std::log10(num / den);
}

}  // namespace bargebench::testing

#endif  // BARGEBENCH_TESTS_SUPPORT_ECHO_FIXTURE_H_
