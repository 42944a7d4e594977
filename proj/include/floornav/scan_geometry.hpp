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

#ifndef FLOORNAV_SCAN_GEOMETRY_HPP
#define FLOORNAV_SCAN_GEOMETRY_HPP

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "floornav/angles.hpp"
#include "floornav/geometry.hpp"
#include "floornav/text_io.hpp"
#include "floornav/world.hpp"

namespace floornav {

/// Sweep of a 2D laser scanner tilted about a horizontal axis. Angles in degrees.
struct SweepConfig {
  double pitch_min = -5.0;
  double pitch_max = 20.0;
  double pitch_step = 0.266;
  double scan_min = 40.0;
  double scan_max = 140.0;
  double scan_step = 1.0;
  double mount_height = 0.4;
  double max_range = 30.0;

  void validate() const {
    if (!(pitch_min < pitch_max)) throw std::invalid_argument("sweep: pitch_min must be < pitch_max");
    if (!(scan_min < scan_max)) throw std::invalid_argument("sweep: scan_min must be < scan_max");
    if (!(pitch_step > 0.0) || !(scan_step > 0.0)) {
      throw std::invalid_argument("sweep: angular steps must be positive");
    }
    if (!(mount_height > 0.0) || !(max_range > 0.0)) {
      throw std::invalid_argument("sweep: mount_height and max_range must be positive");
    }
  }

  // Inclusive lattice; the small slack absorbs quotients such as 100/1 landing at 99.999...
  int frame_count() const { return static_cast<int>(std::floor((pitch_max - pitch_min) / pitch_step + 1e-9)) + 1; }
  int rays_per_frame() const { return static_cast<int>(std::floor((scan_max - scan_min) / scan_step + 1e-9)) + 1; }
  double pitch_at(int j) const { return pitch_min + j * pitch_step; }
  double scan_at(int k) const { return scan_min + k * scan_step; }
};

struct CloudPoint {
  int frame = 0;  // j
  int ray = 0;    // k
  double pitch_deg = 0.0;
  double scan_deg = 0.0;
  double range = 0.0;
  Vec3 sensor;  // Cartesian position in the sensor frame
};

struct Cloud3D {
  SweepConfig config;
  Pose pose;  // robot pose at capture time
  std::vector<CloudPoint> points;
};

struct PolarPoint {
  double pitch_deg = 0.0;
  double scan_deg = 0.0;
  double range = 0.0;
};

/// (alpha, beta, R) -> (R cos a cos b, R cos a sin b, R sin a).
inline Vec3 polar_to_cartesian(double pitch_deg, double scan_deg, double range) {
  if (!std::isfinite(pitch_deg) || !std::isfinite(scan_deg) || !std::isfinite(range)) {
    throw std::invalid_argument("polar_to_cartesian: non-finite input");
  }
  if (!(range > 0.0)) throw std::invalid_argument("polar_to_cartesian: range must be positive");
  const double a = deg2rad(pitch_deg);
  const double b = deg2rad(scan_deg);
  return {range * std::cos(a) * std::cos(b), range * std::cos(a) * std::sin(b), range * std::sin(a)};
}

inline PolarPoint cartesian_to_polar(const Vec3& p) {
  const double horizontal = std::hypot(p.x, p.y);
  return {rad2deg(std::atan2(p.z, horizontal)), wrap_360(rad2deg(std::atan2(p.y, p.x))),
          std::hypot(horizontal, p.z)};
}

inline Vec3 sensor_to_world(const Vec3& p, const Pose& pose, double mount_height) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return {pose.x + c * p.x - s * p.y, pose.y + s * p.x + c * p.y, p.z + mount_height};
}

/// The scanner looks along the robot heading at scan angle 90 deg, so its frame is the
/// robot pose turned a quarter turn clockwise.
inline Pose scanner_frame(const Pose& robot) { return {robot.x, robot.y, robot.theta - kPi / 2.0}; }

inline Vec3 world_point(const Cloud3D& cloud, const CloudPoint& p) {
  return sensor_to_world(p.sensor, scanner_frame(cloud.pose), cloud.config.mount_height);
}

/// Pitch up through every frame and record the first return of every ray in range.
inline Cloud3D sweep(const WorldModel& world, const Pose& robot, const SweepConfig& cfg) {
  cfg.validate();
  Cloud3D cloud;
  cloud.config = cfg;
  cloud.pose = robot;
  const Pose frame = scanner_frame(robot);
  const Vec3 origin{robot.x, robot.y, cfg.mount_height};
  const int frames = cfg.frame_count();
  const int rays = cfg.rays_per_frame();
  cloud.points.reserve(static_cast<std::size_t>(frames) * rays);
  for (int j = 0; j < frames; ++j) {
    const double alpha = cfg.pitch_at(j);
    for (int k = 0; k < rays; ++k) {
      const double beta = cfg.scan_at(k);
      const auto r = cast_lrf_ray(world, origin, frame.theta, alpha, beta, cfg.max_range);
      if (!r || !(*r > 0.0)) continue;
      cloud.points.push_back({j, k, alpha, beta, *r, polar_to_cartesian(alpha, beta, *r)});
    }
  }
  return cloud;
}

inline void write_cloud(std::ostream& out, const Cloud3D& cloud) {
  const auto& c = cloud.config;
  using text::sig;
  out << "cloud3d v1 pitch_min=" << sig(c.pitch_min) << " pitch_max=" << sig(c.pitch_max)
      << " pitch_step=" << sig(c.pitch_step) << " scan_min=" << sig(c.scan_min)
      << " scan_max=" << sig(c.scan_max) << " scan_step=" << sig(c.scan_step)
      << " mount_height=" << sig(c.mount_height) << " max_range=" << sig(c.max_range)
      << " pose_x=" << sig(cloud.pose.x) << " pose_y=" << sig(cloud.pose.y)
      << " pose_theta_deg=" << sig(rad2deg(cloud.pose.theta)) << '\n';
  out << "# j k alpha_deg beta_deg range_m x y z\n";
  for (const auto& p : cloud.points) {
    out << p.frame << ' ' << p.ray << ' ' << sig(p.pitch_deg) << ' ' << sig(p.scan_deg) << ' '
        << sig(p.range) << ' ' << sig(p.sensor.x) << ' ' << sig(p.sensor.y) << ' '
        << sig(p.sensor.z) << '\n';
  }
}

inline Cloud3D read_cloud(std::istream& in) {
  Cloud3D cloud;
  bool header = false;
  text::for_each_record(in, [&](const std::vector<std::string>& tok, int line) {
    if (!header) {
      if (tok.size() < 2 || tok[0] != "cloud3d" || tok[1] != "v1") {
        throw ParseError("missing 'cloud3d v1' header", line);
      }
      std::map<std::string, double> kv;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        const auto eq = tok[i].find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value, got '" + tok[i] + "'", line);
        kv[tok[i].substr(0, eq)] = text::parse_double(tok[i].substr(eq + 1), line);
      }
      const auto get = [&](const char* key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw ParseError(std::string("header lacks ") + key, line);
        return it->second;
      };
      auto& c = cloud.config;
      c.pitch_min = get("pitch_min");
      c.pitch_max = get("pitch_max");
      c.pitch_step = get("pitch_step");
      c.scan_min = get("scan_min");
      c.scan_max = get("scan_max");
      c.scan_step = get("scan_step");
      c.mount_height = get("mount_height");
      c.max_range = get("max_range");
      cloud.pose = {get("pose_x"), get("pose_y"), deg2rad(get("pose_theta_deg"))};
      try {
        c.validate();
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), line);
      }
      header = true;
      return;
    }
    if (tok.size() != 8) throw ParseError("expected 8 fields per point", line);
    CloudPoint p;
    p.frame = static_cast<int>(text::parse_int(tok[0], line));
    p.ray = static_cast<int>(text::parse_int(tok[1], line));
    p.pitch_deg = text::parse_double(tok[2], line);
    p.scan_deg = text::parse_double(tok[3], line);
    p.range = text::parse_double(tok[4], line);
    p.sensor = {text::parse_double(tok[5], line), text::parse_double(tok[6], line),
                text::parse_double(tok[7], line)};
    if (!(p.range > 0.0)) throw ParseError("range must be positive", line);
    cloud.points.push_back(p);
  });
  if (!header) throw ParseError("empty cloud file: missing header");
  return cloud;
}

}  // namespace floornav

#endif  // FLOORNAV_SCAN_GEOMETRY_HPP
