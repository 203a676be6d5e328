// tests/support/acoustics-oracle.h

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

// Test-only measurement oracles, independent of the simulator code paths.

#ifndef BARGEBENCH_TESTS_SUPPORT_ACOUSTICS_ORACLE_H_
#define BARGEBENCH_TESTS_SUPPORT_ACOUSTICS_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace bargebench::testing {

/// Schroeder backward integration followed by a least-squares line fit of the
/// energy decay curve between -5 and -25 dB (T20), extrapolated to 60 dB.
/// Returns a negative value if the curve never reaches -25 dB.
inline double SchroederRt60(const std::vector<double> &h, double fs) {
  std::vector<double> edc(h.size() + 1, 0.0);
  for (size_t i = h.size(); i-- > 0;) edc[i] = edc[i + 1] + h[i] * h[i];
  if (edc[0] <= 0.0) return -1.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  size_t n = 0;
  bool reached = false;
  for (size_t i = 0; i < h.size(); ++i) {
    double db = 10.0 * std::log10(edc[i] / edc[0]);
    if (db > -5.0) continue;
    if (db < -25.0) {
      reached = true;
      break;
    }
    double t = static_cast<double>(i) / fs;
    sx += t;
    sy += db;
    sxx += t * t;
    sxy += t * db;
    ++n;
  }
  if (!reached || n < 2) return -1.0;
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -60.0 / slope;
}

/// Index of the first tap whose magnitude reaches half of the peak magnitude.
inline size_t LeadingTapIndex(const std::vector<double> &h) {
  double peak = 0.0;
  for (double v : h) peak = std::max(peak, std::abs(v));
  for (size_t i = 0; i < h.size(); ++i)
    if (std::abs(h[i]) >= 0.5 * peak) return i;
  return h.size();
}

/// Mean square between the first and last nonzero sample.
inline double OracleSupportPower(const std::vector<double> &x) {
  size_t first = x.size(), last = 0;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) {
      if (first == x.size()) first = i;
      last = i;
    }
  if (first == x.size()) return 0.0;
  double acc = 0.0;
  for (size_t i = first; i <= last; ++i) acc += x[i] * x[i];
  return acc / static_cast<double>(last - first + 1);
}

/// Fits mixed ~ a u + b e by least squares and returns the SIR of the two
/// fitted components in dB, each measured over its own support.
inline double MeasuredSirDb(const std::vector<double> &mixed,
                            const std::vector<double> &u,
                            const std::vector<double> &e) {
  auto at = [](const std::vector<double> &v, size_t i) {
    return i < v.size() ? v[i] : 0.0;
  };
  const size_t n = std::max({mixed.size(), u.size(), e.size()});
  double uu = 0, ee = 0, ue = 0, mu = 0, me = 0;
  for (size_t i = 0; i < n; ++i) {
    double a = at(u, i), b = at(e, i), m = at(mixed, i);
    uu += a * a;
    ee += b * b;
    ue += a * b;
    mu += m * a;
    me += m * b;
  }
  const double det = uu * ee - ue * ue;
  const double ca = (mu * ee - me * ue) / det;
  const double cb = (me * uu - mu * ue) / det;
  return 10.0 * std::log10(ca * ca * OracleSupportPower(u) /
                           (cb * cb * OracleSupportPower(e)));
}

}  // namespace bargebench::testing

#endif  // BARGEBENCH_TESTS_SUPPORT_ACOUSTICS_ORACLE_H_
