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

#ifndef FLOORNAV_WORLD_HPP
#define FLOORNAV_WORLD_HPP

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "floornav/angles.hpp"
#include "floornav/geometry.hpp"

namespace floornav {

/// A vertical rectangle standing on the 2D segment `base`, spanning heights [z_lo, z_hi].
struct WallFace {
  Segment2D base;
  double z_lo = 0.0;
  double z_hi = 2.5;
  std::string name;
};

struct Region {
  std::string name;
  Rect area;
};

/// 2.5D world: extruded wall faces over a floor at z = 0.
struct WorldModel {
  std::vector<WallFace> walls;
  std::vector<Region> regions;

  void validate() const {
    for (std::size_t i = 0; i < walls.size(); ++i) {
      const auto& w = walls[i];
      if (!(w.z_lo < w.z_hi)) {
        throw std::invalid_argument("wall " + std::to_string(i) + ": z_lo must be below z_hi");
      }
      if (w.base.length() <= 0.0) {
        throw std::invalid_argument("wall " + std::to_string(i) + ": degenerate base segment");
      }
    }
  }

  const Region* find_region(const std::string& name) const {
    for (const auto& r : regions) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }
};

/// Distance along the unit ray `origin + t * dir` to the first wall face or the floor.
inline std::optional<double> cast_ray(const WorldModel& world, const Vec3& origin, const Vec3& dir,
                                      double max_range) {
  double best = std::numeric_limits<double>::infinity();
  if (dir.z < 0.0 && origin.z > 0.0) best = -origin.z / dir.z;

  const double horizontal = std::hypot(dir.x, dir.y);
  if (horizontal > 0.0) {
    const Vec2 o{origin.x, origin.y};
    const Vec2 d{dir.x / horizontal, dir.y / horizontal};
    for (const auto& wall : world.walls) {
      const auto s = ray_segment_intersection(o, d, wall.base);
      if (!s) continue;
      const double t = *s / horizontal;
      if (t >= best) continue;
      const double z = origin.z + t * dir.z;
      if (z >= wall.z_lo && z <= wall.z_hi) best = t;
    }
  }
  if (!(best <= max_range)) return std::nullopt;
  return best;
}

/// One ray of the pitching laser scanner. Angles in degrees, sensor convention: the sensor
/// frame is rotated by `frame_yaw` (rad) about z, and scan angle 90 deg points along its +y.
inline std::optional<double> cast_lrf_ray(const WorldModel& world, const Vec3& origin,
                                          double frame_yaw, double pitch_deg, double scan_deg,
                                          double max_range) {
  const double a = deg2rad(pitch_deg);
  const double b = deg2rad(scan_deg) + frame_yaw;
  const Vec3 dir{std::cos(a) * std::cos(b), std::cos(a) * std::sin(b), std::sin(a)};
  return cast_ray(world, origin, dir, max_range);
}

/// Ring of ultrasonic range sensors mounted on the robot body.
struct SonarRing {
  std::array<double, 8> bearings_deg{0.0, 45.0, 90.0, 135.0, 180.0, 225.0, 270.0, 315.0};
  double cone_half_angle_deg = 12.5;
  double min_range = 0.3;
  double max_range = 4.0;
  /// Sensors sit on the body perimeter; ranges are measured from there.
  double mount_radius = 0.4;
  double mount_height = 0.3;
};

struct SonarReading {
  enum class Status { kValid, kNoEcho, kTooClose };

  double bearing_deg = 0.0;  // relative to the robot heading
  double range = 0.0;        // from the sensor face; meaningful only when valid
  Status status = Status::kNoEcho;

  bool valid() const noexcept { return status == Status::kValid; }
};

/// Minimum distance from the sensor face to any wall face inside its cone.
inline SonarReading cast_sonar(const WorldModel& world, const Pose& pose, const SonarRing& ring,
                               std::size_t sensor) {
  SonarReading out;
  out.bearing_deg = ring.bearings_deg.at(sensor);
  const double axis = pose.theta + deg2rad(out.bearing_deg);
  const double half = deg2rad(ring.cone_half_angle_deg);
  const Vec2 origin = pose.position() + unit_from_angle(axis) * ring.mount_radius;
  const Vec2 right_edge = unit_from_angle(axis - half);
  const Vec2 left_edge = unit_from_angle(axis + half);

  double best = std::numeric_limits<double>::infinity();
  for (const auto& wall : world.walls) {
    if (ring.mount_height < wall.z_lo || ring.mount_height > wall.z_hi) continue;
    // Clip the base segment to the cone wedge {cross(right, p) >= 0, cross(left, p) <= 0}.
    const Vec2 pa = wall.base.a - origin;
    const Vec2 pb = wall.base.b - origin;
    double t0 = 0.0;
    double t1 = 1.0;
    bool empty = false;
    const auto clip = [&](double fa, double fb) {
      if (fa < 0.0 && fb < 0.0) {
        empty = true;
      } else if (fa < 0.0) {
        t0 = std::max(t0, fa / (fa - fb));
      } else if (fb < 0.0) {
        t1 = std::min(t1, fa / (fa - fb));
      }
    };
    clip(cross(right_edge, pa), cross(right_edge, pb));
    clip(-cross(left_edge, pa), -cross(left_edge, pb));
    if (empty || t0 > t1) continue;
    const Vec2 d = wall.base.b - wall.base.a;
    const Segment2D inside{wall.base.a + d * t0, wall.base.a + d * t1};
    best = std::min(best, point_segment_distance(origin, inside));
  }

  if (best > ring.max_range) {
    out.status = SonarReading::Status::kNoEcho;
  } else if (best < ring.min_range) {
    out.status = SonarReading::Status::kTooClose;
  } else {
    out.status = SonarReading::Status::kValid;
    out.range = best;
  }
  return out;
}

inline std::vector<SonarReading> scan_sonar_ring(const WorldModel& world, const Pose& pose,
                                                 const SonarRing& ring) {
  std::vector<SonarReading> out;
  out.reserve(ring.bearings_deg.size());
  for (std::size_t i = 0; i < ring.bearings_deg.size(); ++i) {
    out.push_back(cast_sonar(world, pose, ring, i));
  }
  return out;
}

}  // namespace floornav

#endif  // FLOORNAV_WORLD_HPP
