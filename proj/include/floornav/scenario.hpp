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

#ifndef FLOORNAV_SCENARIO_HPP
#define FLOORNAV_SCENARIO_HPP

#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "floornav/boundary_map.hpp"
#include "floornav/planner.hpp"
#include "floornav/scan_geometry.hpp"
#include "floornav/text_io.hpp"
#include "floornav/tracking_control.hpp"
#include "floornav/vfh.hpp"
#include "floornav/world.hpp"

namespace floornav {

/// When the sonar avoider takes the wheel from the trajectory tracker and when it gives it back.
struct ArbitrationConfig {
  /// An echo closer than this whose reflection lies in the corridor ahead triggers avoidance.
  double takeover_range = 1.5;
  double corridor_half_width = 0.6;
  /// How far along the reference path the corridor reaches (m).
  double corridor_length = 2.5;
  /// Avoidance steers toward the reference point this far (m) past the robot's projection.
  double target_lookahead = 3.0;
  double release_offset = 0.3;
  double release_d30 = 1.5;
  /// While the blocked stretch is ahead, the avoider target is shifted this far (m) sideways,
  /// away from the echoes, on a side fixed at takeover. Zero keeps the target on the path.
  double detour_offset = 1.2;
  /// Look-ahead (m) for the shifted target; short, so the robot leaves the path before the echo.
  double detour_lookahead = 0.8;
};

struct InsertionEvent {
  double t = 0.0;
  WallFace wall;
};

struct RegionExpectation {
  std::string region;
  bool visited = true;
};

struct Scenario {
  enum class Mode { kFull, kAvoidOnly };

  std::string name = "unnamed";
  WorldModel world;
  Rect bounds{-5.0, -5.0, 5.0, 5.0};
  RobotParams robot;
  Pose start;
  Vec2 goal;
  SweepConfig sweep;
  std::optional<double> z_limit;  // defaults to the robot height
  BoundaryMapOptions boundary;
  double cellsize = 0.4;
  int dilation = 2;
  TrajectoryOptions trajectory;
  bool shortcut = true;
  Gains gains;
  ActuationLimits limits;
  SonarRing sonar;
  AvoiderConfig avoider;
  ArbitrationConfig arbitration;
  Mode mode = Mode::kFull;
  std::vector<InsertionEvent> events;
  std::vector<RegionExpectation> expectations;
  std::uint64_t seed = 1;
  double noise_sigma = 0.0;  // Gaussian range noise (m); 0 disables
  double control_dt = 0.05;
  double duration = 120.0;
  double goal_tolerance = 0.2;

  double effective_z_limit() const { return z_limit.value_or(robot.body_height); }

  void validate() const {
    world.validate();
    robot.validate();
    sweep.validate();
    gains.validate();
    if (!(bounds.x_min < bounds.x_max) || !(bounds.y_min < bounds.y_max)) {
      throw std::invalid_argument("scenario: empty bounds");
    }
    if (!bounds.contains(start.position())) throw std::invalid_argument("scenario: start outside bounds");
    if (!bounds.contains(goal)) throw std::invalid_argument("scenario: goal outside bounds");
    if (!(effective_z_limit() > 0.0)) throw std::invalid_argument("scenario: z_limit must be positive");
    if (!(cellsize > 0.0) || dilation < 0) throw std::invalid_argument("scenario: bad grid settings");
    if (!(control_dt > 0.0) || !(duration > 0.0)) throw std::invalid_argument("scenario: bad timing");
    for (const auto& e : expectations) {
      if (!world.find_region(e.region)) throw std::invalid_argument("scenario: unknown region '" + e.region + "'");
    }
  }

  /// Sonar mount and chart geometry follow the robot body.
  void sync_derived() {
    sonar.mount_radius = robot.body_radius();
    avoider.chart.mount_radius = robot.body_radius();
    avoider.chart.min_range = sonar.min_range;
    avoider.chart.max_range = sonar.max_range;
  }
};

namespace detail {

class Options {
 public:
  Options(const std::vector<std::string>& tok, std::size_t from, int line) : line_(line) {
    for (std::size_t i = from; i < tok.size(); ++i) {
      const auto eq = tok[i].find('=');
      if (eq == std::string::npos) throw ParseError("expected key=value, got '" + tok[i] + "'", line);
      kv_[tok[i].substr(0, eq)] = tok[i].substr(eq + 1);
    }
  }
  void get(const char* key, double& out) {
    if (auto it = kv_.find(key); it != kv_.end()) {
      out = text::parse_double(it->second, line_);
      kv_.erase(it);
    }
  }
  void get_deg_as_rad(const char* key, double& out) {
    double deg = rad2deg(out);
    get(key, deg);
    out = deg2rad(deg);
  }
  void get(const char* key, int& out) {
    if (auto it = kv_.find(key); it != kv_.end()) {
      out = static_cast<int>(text::parse_int(it->second, line_));
      kv_.erase(it);
    }
  }
  void get(const char* key, bool& out) {
    if (auto it = kv_.find(key); it != kv_.end()) {
      out = text::parse_int(it->second, line_) != 0;
      kv_.erase(it);
    }
  }
  void finish() const {
    if (!kv_.empty()) throw ParseError("unknown option '" + kv_.begin()->first + "'", line_);
  }

 private:
  int line_;
  std::map<std::string, std::string> kv_;
};

inline void expect_count(const std::vector<std::string>& tok, std::size_t lo, std::size_t hi, int line) {
  if (tok.size() < lo || tok.size() > hi) throw ParseError("wrong number of fields for '" + tok[0] + "'", line);
}

/// `x1 y1 x2 y2 [z_lo z_hi] [name]` starting at tok[at].
inline WallFace parse_wall(const std::vector<std::string>& tok, std::size_t at, int line) {
  if (tok.size() < at + 4) throw ParseError("wall needs x1 y1 x2 y2", line);
  WallFace w;
  w.base = {{text::parse_double(tok[at], line), text::parse_double(tok[at + 1], line)},
            {text::parse_double(tok[at + 2], line), text::parse_double(tok[at + 3], line)}};
  std::size_t next = at + 4;
  if (tok.size() >= at + 6) {
    w.z_lo = text::parse_double(tok[at + 4], line);
    w.z_hi = text::parse_double(tok[at + 5], line);
    next = at + 6;
  }
  if (tok.size() == next + 1) {
    w.name = tok[next];
  } else if (tok.size() > next + 1) {
    throw ParseError("too many fields for wall", line);
  }
  return w;
}

/// `cx cy width depth [z_lo z_hi] [name]` -> four faces.
inline std::vector<WallFace> parse_box(const std::vector<std::string>& tok, std::size_t at, int line) {
  if (tok.size() < at + 4) throw ParseError("box needs cx cy width depth", line);
  const double cx = text::parse_double(tok[at], line);
  const double cy = text::parse_double(tok[at + 1], line);
  const double hw = text::parse_double(tok[at + 2], line) / 2.0;
  const double hd = text::parse_double(tok[at + 3], line) / 2.0;
  double z_lo = 0.0;
  double z_hi = 2.5;
  std::string name;
  std::size_t next = at + 4;
  if (tok.size() >= at + 6) {
    z_lo = text::parse_double(tok[at + 4], line);
    z_hi = text::parse_double(tok[at + 5], line);
    next = at + 6;
  }
  if (tok.size() == next + 1) name = tok[next];
  if (tok.size() > next + 1) throw ParseError("too many fields for box", line);
  const Vec2 c[4] = {{cx - hw, cy - hd}, {cx + hw, cy - hd}, {cx + hw, cy + hd}, {cx - hw, cy + hd}};
  std::vector<WallFace> faces;
  for (int i = 0; i < 4; ++i) faces.push_back({{c[i], c[(i + 1) % 4]}, z_lo, z_hi, name});
  return faces;
}

}  // namespace detail

/// Line-oriented scenario text; first record `floornav-scenario v1`, '#' starts a comment.
inline Scenario parse_scenario(std::istream& in) {
  Scenario sc;
  bool header = false;
  text::for_each_record(in, [&](const std::vector<std::string>& tok, int line) {
    const std::string& key = tok[0];
    if (!header) {
      if (key != "floornav-scenario" || tok.size() != 2 || tok[1] != "v1") {
        throw ParseError("missing 'floornav-scenario v1' header", line);
      }
      header = true;
      return;
    }
    const auto num = [&](std::size_t i) { return text::parse_double(tok.at(i), line); };
    if (key == "name") {
      detail::expect_count(tok, 2, 2, line);
      sc.name = tok[1];
    } else if (key == "bounds") {
      detail::expect_count(tok, 5, 5, line);
      sc.bounds = {num(1), num(2), num(3), num(4)};
    } else if (key == "start") {
      detail::expect_count(tok, 4, 4, line);
      sc.start = {num(1), num(2), deg2rad(num(3))};
    } else if (key == "goal") {
      detail::expect_count(tok, 3, 3, line);
      sc.goal = {num(1), num(2)};
    } else if (key == "robot") {
      detail::Options o(tok, 1, line);
      o.get("wheel_radius", sc.robot.wheel_radius);
      o.get("half_axle", sc.robot.half_axle);
      o.get("diameter", sc.robot.body_diameter);
      o.get("height", sc.robot.body_height);
      o.finish();
    } else if (key == "sweep") {
      detail::Options o(tok, 1, line);
      o.get("pitch_min", sc.sweep.pitch_min);
      o.get("pitch_max", sc.sweep.pitch_max);
      o.get("pitch_step", sc.sweep.pitch_step);
      o.get("scan_min", sc.sweep.scan_min);
      o.get("scan_max", sc.sweep.scan_max);
      o.get("scan_step", sc.sweep.scan_step);
      o.get("mount_height", sc.sweep.mount_height);
      o.get("max_range", sc.sweep.max_range);
      o.finish();
    } else if (key == "z_limit") {
      detail::expect_count(tok, 2, 2, line);
      sc.z_limit = num(1);
    } else if (key == "boundary") {
      detail::Options o(tok, 1, line);
      o.get("floor_epsilon", sc.boundary.compress.floor_epsilon);
      o.get("filter_before_min", sc.boundary.compress.filter_before_min);
      o.get("min_break_distance", sc.boundary.segment.min_break_distance);
      o.get("fit_epsilon", sc.boundary.segment.fit_epsilon);
      o.finish();
    } else if (key == "grid") {
      detail::Options o(tok, 1, line);
      o.get("cellsize", sc.cellsize);
      o.get("dilation", sc.dilation);
      o.finish();
    } else if (key == "trajectory") {
      detail::Options o(tok, 1, line);
      o.get("v_cruise", sc.trajectory.v_cruise);
      o.get("dt", sc.trajectory.dt);
      o.get_deg_as_rad("omega_max_deg", sc.trajectory.omega_max);
      o.get("turn_radius", sc.trajectory.turn_radius);
      o.get("shortcut", sc.shortcut);
      o.finish();
    } else if (key == "gains") {
      detail::Options o(tok, 1, line);
      o.get("k1", sc.gains.k1);
      o.get("k3", sc.gains.k3);
      o.finish();
    } else if (key == "limits") {
      detail::Options o(tok, 1, line);
      o.get("v_max", sc.limits.v_max);
      o.get_deg_as_rad("omega_max_deg", sc.limits.omega_max);
      o.get("enabled", sc.limits.enabled);
      o.finish();
    } else if (key == "sonar") {
      detail::Options o(tok, 1, line);
      o.get("cone_half_angle_deg", sc.sonar.cone_half_angle_deg);
      o.get("min_range", sc.sonar.min_range);
      o.get("max_range", sc.sonar.max_range);
      o.get("mount_height", sc.sonar.mount_height);
      o.finish();
    } else if (key == "avoider") {
      detail::Options o(tok, 1, line);
      o.get("chart_cellsize", sc.avoider.chart.cellsize);
      o.get("sector_width_deg", sc.avoider.histogram.sector_width_deg);
      o.get("smoothing", sc.avoider.histogram.smoothing);
      o.get("threshold", sc.avoider.selection.threshold);
      o.get("clearance_deg", sc.avoider.selection.robot_clearance_deg);
      o.get("narrow_slot_deg", sc.avoider.selection.narrow_slot_deg);
      o.get("window_deg", sc.avoider.selection.window_deg);
      o.get("window_on_target", sc.avoider.selection.window_on_target);
      o.finish();
    } else if (key == "arbitration") {
      detail::Options o(tok, 1, line);
      o.get("takeover_range", sc.arbitration.takeover_range);
      o.get("corridor_half_width", sc.arbitration.corridor_half_width);
      o.get("corridor_length", sc.arbitration.corridor_length);
      o.get("target_lookahead", sc.arbitration.target_lookahead);
      o.get("release_offset", sc.arbitration.release_offset);
      o.get("release_d30", sc.arbitration.release_d30);
      o.get("detour_offset", sc.arbitration.detour_offset);
      o.get("detour_lookahead", sc.arbitration.detour_lookahead);
      o.finish();
    } else if (key == "mode") {
      detail::expect_count(tok, 2, 2, line);
      if (tok[1] == "full") {
        sc.mode = Scenario::Mode::kFull;
      } else if (tok[1] == "avoid") {
        sc.mode = Scenario::Mode::kAvoidOnly;
      } else {
        throw ParseError("mode must be 'full' or 'avoid'", line);
      }
    } else if (key == "control_dt") {
      detail::expect_count(tok, 2, 2, line);
      sc.control_dt = num(1);
    } else if (key == "duration") {
      detail::expect_count(tok, 2, 2, line);
      sc.duration = num(1);
    } else if (key == "goal_tolerance") {
      detail::expect_count(tok, 2, 2, line);
      sc.goal_tolerance = num(1);
    } else if (key == "seed") {
      detail::expect_count(tok, 2, 2, line);
      sc.seed = static_cast<std::uint64_t>(text::parse_int(tok[1], line));
    } else if (key == "noise") {
      detail::expect_count(tok, 2, 2, line);
      sc.noise_sigma = num(1);
    } else if (key == "wall") {
      sc.world.walls.push_back(detail::parse_wall(tok, 1, line));
    } else if (key == "box") {
      for (auto& f : detail::parse_box(tok, 1, line)) sc.world.walls.push_back(std::move(f));
    } else if (key == "region") {
      detail::expect_count(tok, 6, 6, line);
      sc.world.regions.push_back({tok[1], {num(2), num(3), num(4), num(5)}});
    } else if (key == "event") {
      if (tok.size() < 3) throw ParseError("event needs a time and a wall or box", line);
      const double t = num(1);
      if (tok[2] == "wall") {
        sc.events.push_back({t, detail::parse_wall(tok, 3, line)});
      } else if (tok[2] == "box") {
        for (auto& f : detail::parse_box(tok, 3, line)) sc.events.push_back({t, std::move(f)});
      } else {
        throw ParseError("event kind must be 'wall' or 'box'", line);
      }
    } else if (key == "expect") {
      detail::expect_count(tok, 3, 3, line);
      if (tok[2] != "visited" && tok[2] != "avoided") throw ParseError("expect needs visited|avoided", line);
      sc.expectations.push_back({tok[1], tok[2] == "visited"});
    } else {
      throw ParseError("unknown record '" + key + "'", line);
    }
  });
  if (!header) throw ParseError("empty scenario file");
  sc.sync_derived();
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario '" + path + "'");
  return parse_scenario(in);
}

}  // namespace floornav

#endif  // FLOORNAV_SCENARIO_HPP
