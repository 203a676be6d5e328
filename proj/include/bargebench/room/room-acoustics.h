// room/room-acoustics.h

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

#ifndef BARGEBENCH_ROOM_ROOM_ACOUSTICS_H_
#define BARGEBENCH_ROOM_ROOM_ACOUSTICS_H_

#include <cmath>
#include <optional>
#include <vector>

#include "bargebench/audio/waveform.h"

namespace bargebench {

inline constexpr double kSpeedOfSound = 343.0;
/// Half-width of the windowed-sinc fractional delay kernel (64 taps).
inline constexpr int kSincHalfWidth = 32;
inline constexpr int kMaxReflectionOrder = 60;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline double Distance(const Vec3 &a, const Vec3 &b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

/// Rectangular shoebox.  length * width == floor_area.
struct RoomSpec {
  double floor_area = 0.0;  // m^2
  double height = 0.0;      // m
  double length = 0.0;      // m, x extent
  double width = 0.0;       // m, y extent
  double rt60 = 0.0;        // s
  double speed_of_sound = kSpeedOfSound;

  double Volume() const { return length * width * height; }
  double SurfaceArea() const {
    return 2.0 * (length * width + length * height + width * height);
  }
  double MinDimension() const;
};

/// Builds a room from its floor area and length/width aspect ratio.
RoomSpec MakeRoom(double floor_area, double aspect, double height, double rt60);

/// Throws GeometryError unless p lies inside the room with `margin` metres
/// clearance from every wall.
void RequireInside(const RoomSpec &room, const Vec3 &p, double margin,
                   const char *what);

/// Uniform wall absorption from Sabine's formula,
/// alpha = 0.161 V / (rt60 S).  Throws GeometryError if the result is not
/// below 1 (room too small or rt60 too short); otherwise clamps to
/// (0, 0.9999].
double SabineAbsorption(const RoomSpec &room);

/// ceil(rt60 * c / min dimension), capped at kMaxReflectionOrder.
int ReflectionOrder(const RoomSpec &room);

/// Decay time of the image lattice itself.  An image reached along direction
/// u after path length ct has undergone ct (|u_x|/Lx + |u_y|/Ly + |u_z|/Lz)
/// reflections; spherical spreading cancels against image density, so the
/// late energy is the direction average of (1 - alpha)^reflections, cut off
/// at `order`.  The returned value is the -5 to -25 dB backward-integrated
/// slope of that envelope, extrapolated to 60 dB.
double LatticeDecayTime(const RoomSpec &room, double alpha, int order);

/// Absorption whose lattice decay time equals room.rt60 (bisection on
/// LatticeDecayTime).  Sabine's value ignores the strong direction dependence
/// of the reflection rate in flat or elongated rooms and the order cutoff,
/// which together move the measured decay by up to 25%.  Throws the same
/// GeometryError as SabineAbsorption for infeasible rooms.
double CalibratedAbsorption(const RoomSpec &room, int order);

struct Rir {
  std::vector<double> taps;
  int sample_rate = kSampleRate;
  /// round(d / c * fs + extra delay) of the direct path.
  size_t direct_index = 0;
};

struct RirOptions {
  int order = 0;
  /// Wall absorption; Sabine's value when absent.
  std::optional<double> absorption;
  /// Extra fractional delay in samples added to every image, in [0, 1).
  double extra_delay_samples = 0.0;
  /// Allen-Berkley 100 Hz high-pass on the finished response.  Without it the
  /// all-positive image pulses pile up into a low-frequency tail that decays
  /// far slower than the image energies themselves.
  bool high_pass = true;
};

/// The Allen-Berkley 100 Hz two-pole high-pass, applied in place.
void AllenBerkleyHighPass(std::vector<double> *h, int sample_rate);

/// Image-source response of a shoebox between src and mic.  Every image with
/// at most `order` wall reflections contributes (1 - alpha)^(r/2) / (4 pi d)
/// at fractional delay d / c * fs via a Hann-windowed sinc spanning 64 taps.
/// Taps that would land before index 0 are dropped.  The high-pass (on by
/// default) is applied last.  Throws GeometryError if
/// a position is outside the room or the source is within 1 cm of the mic.
Rir GenerateRir(const RoomSpec &room, const Vec3 &src, const Vec3 &mic,
                const RirOptions &opts);

}  // namespace bargebench

#endif  // BARGEBENCH_ROOM_ROOM_ACOUSTICS_H_
