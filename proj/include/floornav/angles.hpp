// Copyright 2026 The floornav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLOORNAV_ANGLES_HPP
#define FLOORNAV_ANGLES_HPP

#include <cmath>
#include <numbers>

namespace floornav {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg2rad(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) noexcept { return rad * 180.0 / kPi; }

/// Wraps to (-pi, pi].
inline double wrap_pi(double a) noexcept {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

/// Wraps to (-180, 180].
inline double wrap_180(double deg) noexcept {
  deg = std::remainder(deg, 360.0);
  if (deg <= -180.0) deg += 360.0;
  return deg;
}

/// Wraps to [0, 360).
inline double wrap_360(double deg) noexcept {
  deg = std::fmod(deg, 360.0);
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg -= 360.0;
  return deg;
}

/// Absolute angular distance in degrees, in [0, 180].
inline double angle_diff_deg(double a, double b) noexcept { return std::abs(wrap_180(a - b)); }

}  // namespace floornav

#endif  // FLOORNAV_ANGLES_HPP
