// room/room-acoustics.cc

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

#include "bargebench/room/room-acoustics.h"

#include <algorithm>
#include <array>
#include <numbers>
#include <string>

#include "bargebench/common/error.h"

namespace bargebench {

double RoomSpec::MinDimension() const {
  return std::min({length, width, height});
}

RoomSpec MakeRoom(double floor_area, double aspect, double height,
                  double rt60) {
  RoomSpec room;
  room.floor_area = floor_area;
  room.height = height;
  room.length = std::sqrt(floor_area * aspect);
  room.width = floor_area / room.length;
  room.rt60 = rt60;
  return room;
}

void RequireInside(const RoomSpec &room, const Vec3 &p, double margin,
                   const char *what) {
  auto ok = [margin](double v, double extent) {
    return v >= margin && v <= extent - margin;
  };
  if (!ok(p.x, room.length) || !ok(p.y, room.width) || !ok(p.z, room.height))
    throw GeometryError(std::string(what) + " position (" +
                        std::to_string(p.x) + ", " + std::to_string(p.y) +
                        ", " + std::to_string(p.z) + ") is outside the room");
}

double SabineAbsorption(const RoomSpec &room) {
  if (!(room.rt60 > 0.0)) throw GeometryError("rt60 must be positive");
  double alpha = 0.161 * room.Volume() / (room.rt60 * room.SurfaceArea());
  if (!(alpha < 1.0))
    throw GeometryError("infeasible room: Sabine absorption " +
                        std::to_string(alpha) + " >= 1");
  return std::clamp(alpha, 1e-12, 0.9999);
}

int ReflectionOrder(const RoomSpec &room) {
  double n = std::ceil(room.rt60 * room.speed_of_sound / room.MinDimension());
  return static_cast<int>(std::min<double>(n, kMaxReflectionOrder));
}

namespace {

// -60 / slope of a least-squares line through the -5..-25 dB part of a
// backward-integrated energy curve sampled every dt seconds.
double DecayFromEdc(const std::vector<double> &edc, double dt) {
  const double ref = edc.front();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (size_t i = 0; i < edc.size(); ++i) {
    if (!(edc[i] > 0.0)) break;
    double db = 10.0 * std::log10(edc[i] / ref);
    if (db > -5.0) continue;
    if (db < -25.0) break;
    double t = dt * static_cast<double>(i);
    sx += t;
    sy += db;
    sxx += t * t;
    sxy += t * db;
    ++n;
  }
  if (n < 2) return 0.0;
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -60.0 / slope;
}

// Window and sign tables for the 64 kernel offsets k = -31..32.
struct SincTables {
  std::array<double, 2 * kSincHalfWidth> cos_k, sin_k, sign_k;
  SincTables() {
    for (int i = 0; i < 2 * kSincHalfWidth; ++i) {
      const int k = i - (kSincHalfWidth - 1);
      cos_k[i] = std::cos(std::numbers::pi * k / kSincHalfWidth);
      sin_k[i] = std::sin(std::numbers::pi * k / kSincHalfWidth);
      // sin(pi (k - f)) = -(-1)^k sin(pi f)
      sign_k[i] = (k & 1) ? 1.0 : -1.0;
    }
  }
};

// Adds amplitude * Hann-windowed sinc centred at `delay` samples.
void AddFractionalTap(double delay, double amplitude, std::vector<double> *h) {
  static const SincTables tables;
  const auto base = static_cast<long>(std::floor(delay));
  const double frac = delay - static_cast<double>(base);
  if (frac == 0.0) {
    if (base >= 0) (*h)[static_cast<size_t>(base)] += amplitude;
    return;
  }
  // 1 - frac is exact for frac >= 0.5; keeps sin accurate near integers.
  const double sin_frac =
      std::sin(std::numbers::pi * (frac <= 0.5 ? frac : 1.0 - frac));
  const double num = amplitude * sin_frac / std::numbers::pi;
  const double cf = std::cos(std::numbers::pi * frac / kSincHalfWidth);
  const double sf = std::sin(std::numbers::pi * frac / kSincHalfWidth);
  constexpr int kTaps = 2 * kSincHalfWidth;
  std::array<double, kTaps> tap;
  for (int i = 0; i < kTaps; ++i) {
    const double x = (i - (kSincHalfWidth - 1)) - frac;
    // cos(pi (k - f) / 32) by the angle-difference identity.
    const double window =
        0.5 * (1.0 + tables.cos_k[i] * cf + tables.sin_k[i] * sf);
    tap[i] = tables.sign_k[i] * num / x * window;
  }
  const long first = base - (kSincHalfWidth - 1);
  const int skip = first < 0 ? static_cast<int>(-first) : 0;
  double *out = h->data() + first;
  for (int i = skip; i < kTaps; ++i) out[i] += tap[i];
}

// Direction histogram of the reflection rate g(u) = |u_x|/Lx + |u_y|/Ly +
// |u_z|/Lz (reflections per metre of path), averaged over the sphere.
struct RateHistogram {
  std::vector<double> weight, rate;
};

RateHistogram BuildRateHistogram(const RoomSpec &room) {
  // Midpoint rule over one octant in (theta, phi), sin(theta) weights.
  constexpr int kGrid = 90;
  constexpr int kBins = 256;
  const double hi = 1.0 / room.length + 1.0 / room.width + 1.0 / room.height;
  std::vector<double> weight(kBins, 0.0), rate(kBins, 0.0);
  const double d = std::numbers::pi / 2.0 / kGrid;
  for (int a = 0; a < kGrid; ++a) {
    const double th = (a + 0.5) * d;
    for (int b = 0; b < kGrid; ++b) {
      const double ph = (b + 0.5) * d;
      const double g = std::sin(th) * std::cos(ph) / room.length +
                       std::sin(th) * std::sin(ph) / room.width +
                       std::cos(th) / room.height;
      const int k = std::min(kBins - 1, static_cast<int>(g / hi * kBins));
      weight[k] += std::sin(th);
      rate[k] += std::sin(th) * g;
    }
  }
  RateHistogram out;
  for (int k = 0; k < kBins; ++k) {
    if (weight[k] == 0.0) continue;
    out.weight.push_back(weight[k]);
    out.rate.push_back(rate[k] / weight[k]);
  }
  return out;
}

double LatticeDecay(const RoomSpec &room, const RateHistogram &hist,
                    double alpha, int order) {
  const double log_beta2 = std::log1p(-alpha);
  const double dt = 0.002;
  const double c = room.speed_of_sound;
  const double t_max = order / (c * hist.rate.front());
  const int nt = std::max(2, static_cast<int>(std::min(t_max, 4.0) / dt) + 1);
  const size_t nb = hist.rate.size();
  // Per-bin energy at the current step and its per-step decay factor.
  std::vector<double> e(nb), q(nb), cutoff(nb);
  for (size_t k = 0; k < nb; ++k) {
    e[k] = hist.weight[k] * std::exp(log_beta2 * c * 0.5 * dt * hist.rate[k]);
    q[k] = std::exp(log_beta2 * c * dt * hist.rate[k]);
    cutoff[k] = order / (c * hist.rate[k]);
  }
  std::vector<double> energy(nt, 0.0);
  for (int i = 0; i < nt; ++i) {
    const double t = (i + 0.5) * dt;
    double sum = 0.0;
    for (size_t k = 0; k < nb; ++k) {
      if (t <= cutoff[k]) sum += e[k];
      e[k] *= q[k];
    }
    energy[i] = sum;
  }
  std::vector<double> edc(nt, 0.0);
  double acc = 0.0;
  for (int i = nt; i-- > 0;) edc[i] = (acc += energy[i]);
  return DecayFromEdc(edc, dt);
}

}  // namespace

double LatticeDecayTime(const RoomSpec &room, double alpha, int order) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("absorption must lie in (0, 1)");
  return LatticeDecay(room, BuildRateHistogram(room), alpha, order);
}

double CalibratedAbsorption(const RoomSpec &room, int order) {
  SabineAbsorption(room);  // feasibility check only
  const RateHistogram hist = BuildRateHistogram(room);
  double lo = 1e-4, hi = 0.9999;
  if (LatticeDecay(room, hist, hi, order) > room.rt60) return hi;
  if (LatticeDecay(room, hist, lo, order) < room.rt60) return lo;
  for (int it = 0; it < 32; ++it) {
    double mid = 0.5 * (lo + hi);
    if (LatticeDecay(room, hist, mid, order) > room.rt60)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void AllenBerkleyHighPass(std::vector<double> *h, int sample_rate) {
  const double w = 2.0 * std::numbers::pi * 100.0 / sample_rate;
  const double r1 = std::exp(-w);
  const double b1 = 2.0 * r1 * std::cos(w);
  const double b2 = -r1 * r1;
  const double a1 = -(1.0 + r1);
  double y0 = 0.0, y1 = 0.0, y2 = 0.0;
  for (double &v : *h) {
    y2 = y1;
    y1 = y0;
    y0 = b1 * y1 + b2 * y2 + v;
    v = y0 + a1 * y1 + r1 * y2;
  }
}

Rir GenerateRir(const RoomSpec &room, const Vec3 &src, const Vec3 &mic,
                const RirOptions &opts) {
  RequireInside(room, src, 0.0, "source");
  RequireInside(room, mic, 0.0, "microphone");
  if (opts.order < 0) throw ConfigError("reflection order must be >= 0");
  if (opts.extra_delay_samples < 0.0 || opts.extra_delay_samples >= 1.0)
    throw ConfigError("extra_delay_samples must lie in [0, 1)");
  const double direct = Distance(src, mic);
  if (direct < 0.01)
    throw GeometryError("source and microphone closer than 1 cm (d=" +
                        std::to_string(direct) + " m)");
  const double alpha = opts.absorption ? *opts.absorption
                                       : SabineAbsorption(room);
  if (alpha < 0.0 || alpha > 1.0)
    throw ConfigError("absorption must lie in [0, 1]");

  const double fs = kSampleRate;
  const double c = room.speed_of_sound;
  const int order = opts.order;
  const double beta = std::sqrt(1.0 - alpha);  // per-reflection amplitude
  std::vector<double> beta_pow(order + 1);
  for (int r = 0; r <= order; ++r) beta_pow[r] = r == 0 ? 1.0 : std::pow(beta, r);

  // Per-axis image offsets: coordinate (1 - 2q) s + 2 m L with |2m - q|
  // reflections.
  struct AxisImage {
    double delta;  // image coordinate minus mic coordinate
    int reflections;
  };
  auto axis_images = [order](double s, double m_pos, double extent) {
    std::vector<AxisImage> out;
    const int m_max = order / 2 + 1;
    for (int m = -m_max; m <= m_max; ++m) {
      for (int q = 0; q <= 1; ++q) {
        int refl = std::abs(2 * m - q);
        if (refl > order) continue;
        double coord = (1 - 2 * q) * s + 2.0 * m * extent;
        out.push_back({coord - m_pos, refl});
      }
    }
    return out;
  };
  const auto xs = axis_images(src.x, mic.x, room.length);
  const auto ys = axis_images(src.y, mic.y, room.width);
  const auto zs = axis_images(src.z, mic.z, room.height);

  // Size the response from the farthest contributing image.
  double max_dist = 0.0;
  for (const auto &ix : xs)
    for (const auto &iy : ys) {
      if (ix.reflections + iy.reflections > order) continue;
      for (const auto &iz : zs) {
        if (ix.reflections + iy.reflections + iz.reflections > order) continue;
        max_dist = std::max(max_dist, ix.delta * ix.delta + iy.delta * iy.delta +
                                          iz.delta * iz.delta);
      }
    }
  max_dist = std::sqrt(max_dist);

  Rir rir;
  rir.sample_rate = kSampleRate;
  rir.taps.assign(static_cast<size_t>(std::floor(max_dist / c * fs +
                                                 opts.extra_delay_samples)) +
                      kSincHalfWidth + 1,
                  0.0);
  rir.direct_index = static_cast<size_t>(
      std::lround(direct / c * fs + opts.extra_delay_samples));

  const double inv_4pi = 1.0 / (4.0 * std::numbers::pi);
  for (const auto &ix : xs) {
    for (const auto &iy : ys) {
      const int rxy = ix.reflections + iy.reflections;
      if (rxy > order) continue;
      const double dxy2 = ix.delta * ix.delta + iy.delta * iy.delta;
      for (const auto &iz : zs) {
        const int r = rxy + iz.reflections;
        if (r > order) continue;
        const double gain = beta_pow[r];
        if (gain == 0.0) continue;
        const double d = std::sqrt(dxy2 + iz.delta * iz.delta);
        AddFractionalTap(d / c * fs + opts.extra_delay_samples,
                         gain * inv_4pi / d, &rir.taps);
      }
    }
  }
  if (opts.high_pass) AllenBerkleyHighPass(&rir.taps, rir.sample_rate);
  return rir;
}

}  // namespace bargebench
