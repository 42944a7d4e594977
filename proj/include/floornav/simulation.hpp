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

#ifndef FLOORNAV_SIMULATION_HPP
#define FLOORNAV_SIMULATION_HPP

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "floornav/boundary_map.hpp"
#include "floornav/gridmap.hpp"
#include "floornav/planner.hpp"
#include "floornav/scan_geometry.hpp"
#include "floornav/scenario.hpp"
#include "floornav/text_io.hpp"
#include "floornav/tracking_control.hpp"
#include "floornav/vfh.hpp"
#include "floornav/world.hpp"

namespace floornav {

/// Everything produced between the sweep and the reference trajectory.
struct PlanArtifacts {
  Cloud3D cloud;
  SegmentMap2D map;
  OccupancyGrid grid;
  std::optional<GridPath> path;
  std::vector<Vec2> polyline;
  ReferenceTrajectory trajectory;
  std::string failure;  // empty when a trajectory exists

  bool ok() const noexcept { return failure.empty(); }
};

/// Adds zero-mean Gaussian noise to every range and recomputes the sensor coordinates.
inline void perturb_cloud(Cloud3D& cloud, double sigma, std::mt19937_64& rng) {
  if (!(sigma > 0.0)) return;
  std::normal_distribution<double> noise(0.0, sigma);
  for (auto& p : cloud.points) {
    p.range = std::max(1e-6, p.range + noise(rng));
    p.sensor = polar_to_cartesian(p.pitch_deg, p.scan_deg, p.range);
  }
}

inline Cloud3D perceive(const Scenario& sc, std::mt19937_64& rng) {
  auto cloud = sweep(sc.world, sc.start, sc.sweep);
  perturb_cloud(cloud, sc.noise_sigma, rng);
  return cloud;
}

/// Snaps the cell-centre polyline ends onto the exact start and goal where sight allows.
inline std::vector<Vec2> anchor_endpoints(const OccupancyGrid& grid, std::vector<Vec2> poly, Vec2 start, Vec2 goal) {
  if (poly.size() == 1) {
    return {start, goal};
  }
  if (line_of_sight(grid, start, poly[1])) poly.front() = start;
  if (line_of_sight(grid, poly[poly.size() - 2], goal)) poly.back() = goal;
  return poly;
}

/// Sweep, boundary map, grid, A* and trajectory, all from the start pose.
inline PlanArtifacts plan_scenario(const Scenario& sc, std::mt19937_64& rng) {
  PlanArtifacts out;
  out.cloud = perceive(sc, rng);
  out.map = clip_to_bounds(build_boundary_map(out.cloud, sc.effective_z_limit(), sc.boundary), sc.bounds);
  out.grid = dilate(rasterize(out.map, sc.cellsize, sc.bounds), sc.dilation);
  try {
    out.path = astar(out.grid, out.grid.world_to_grid(sc.start.position()), out.grid.world_to_grid(sc.goal));
    auto poly = sc.shortcut ? shortcut(out.grid, *out.path) : out.path->points;
    out.polyline = anchor_endpoints(out.grid, std::move(poly), sc.start.position(), sc.goal);
    out.trajectory = polyline_to_trajectory(out.polyline, sc.trajectory);
  } catch (const InvalidEndpointError& e) {
    out.failure = e.what();
  } catch (const NoPathError& e) {
    out.failure = e.what();
  }
  return out;
}

inline PlanArtifacts plan_scenario(const Scenario& sc) {
  std::mt19937_64 rng(sc.seed);
  return plan_scenario(sc, rng);
}

enum class Verdict { kGoalReached, kPlanFailure, kCollision, kTimeout };

inline const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::kGoalReached:
      return "goal_reached";
    case Verdict::kPlanFailure:
      return "plan_failure";
    case Verdict::kCollision:
      return "collision";
    case Verdict::kTimeout:
      return "timeout";
  }
  return "?";
}

enum class DriveMode { kTrack, kAvoid };

struct Tick {
  double t = 0.0;
  Pose pose;
  /// Reference state and error; NaN while no reference is being tracked.
  Pose ref{std::nan(""), std::nan(""), std::nan("")};
  TrackingError error{std::nan(""), std::nan(""), std::nan("")};
  double v = 0.0;
  double omega = 0.0;
  double lyapunov = std::nan("");
  DriveMode mode = DriveMode::kTrack;
  double clearance = 0.0;  // body surface to the nearest obstacle face
  double sonar_min = std::numeric_limits<double>::infinity();
};

struct RegionCheck {
  std::string region;
  bool expected_visit = true;
  bool visited = false;
  bool passed() const noexcept { return visited == expected_visit; }
};

struct RunSummary {
  Verdict verdict = Verdict::kTimeout;
  std::string detail;
  double path_cost = std::nan("");
  double min_clearance = std::numeric_limits<double>::infinity();
  double completion_time = std::nan("");
  int takeovers = 0;
  std::vector<RegionCheck> regions;

  bool expectations_met() const {
    return std::all_of(regions.begin(), regions.end(), [](const RegionCheck& r) { return r.passed(); });
  }
};

struct RunResult {
  PlanArtifacts plan;
  std::vector<Tick> ticks;
  std::vector<AvoiderRecord> avoider;  // one per tick driven by the avoider
  RunSummary summary;
};

/// Walls the body can touch: those with some part below the body top.
inline bool blocks_body(const WallFace& w, const RobotParams& robot) noexcept {
  return w.z_lo < robot.body_height && w.z_hi > 0.0;
}

/// Distance from the body surface to the nearest blocking face along the motion a -> b.
inline double swept_clearance(const WorldModel& world, const RobotParams& robot, Vec2 a, Vec2 b) {
  double best = std::numeric_limits<double>::infinity();
  const Segment2D motion{a, b};
  for (const auto& w : world.walls) {
    if (blocks_body(w, robot)) best = std::min(best, segment_segment_distance(motion, w.base));
  }
  return best - robot.body_radius();
}

inline bool disk_touches(const Rect& r, Vec2 c, double radius) noexcept {
  const double dx = std::max({r.x_min - c.x, 0.0, c.x - r.x_max});
  const double dy = std::max({r.y_min - c.y, 0.0, c.y - r.y_max});
  return dx * dx + dy * dy <= radius * radius;
}

/// True when the swept body disk entered the named region at any tick.
inline bool assert_region_traversal(const RunResult& run, const WorldModel& world, const std::string& region,
                                    double body_radius) {
  const Region* r = world.find_region(region);
  if (!r) throw std::invalid_argument("unknown region '" + region + "'");
  return std::any_of(run.ticks.begin(), run.ticks.end(),
                     [&](const Tick& t) { return disk_touches(r->area, t.pose.position(), body_radius); });
}

/// True when the reference trajectory's centre line (grown by `radius`) enters the region.
inline bool trajectory_visits(const ReferenceTrajectory& traj, const Rect& area, double radius = 0.0) {
  return std::any_of(traj.samples.begin(), traj.samples.end(),
                     [&](const RefState& s) { return disk_touches(area, {s.x, s.y}, radius); });
}

namespace detail {

/// Nearest reference sample, searched forward from `from` over at most `reach` metres.
inline std::size_t nearest_sample(const ReferenceTrajectory& traj, Vec2 p, std::size_t from, double reach) {
  std::size_t best = from;
  double best_d = std::numeric_limits<double>::infinity();
  double walked = 0.0;
  for (std::size_t i = from; i < traj.samples.size(); ++i) {
    if (i > from) {
      walked += std::hypot(traj.samples[i].x - traj.samples[i - 1].x, traj.samples[i].y - traj.samples[i - 1].y);
      if (walked > reach) break;
    }
    const double d = std::hypot(traj.samples[i].x - p.x, traj.samples[i].y - p.y);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

/// Sample index `ahead` metres further along the path (clamped to the end).
inline std::size_t sample_ahead(const ReferenceTrajectory& traj, std::size_t from, double ahead) {
  double walked = 0.0;
  std::size_t i = from;
  while (i + 1 < traj.samples.size() && walked < ahead) {
    walked += std::hypot(traj.samples[i + 1].x - traj.samples[i].x, traj.samples[i + 1].y - traj.samples[i].y);
    ++i;
  }
  return i;
}

inline Vec2 echo_point(const Pose& pose, const SonarRing& ring, const SonarReading& r) {
  const Vec2 axis = unit_from_angle(pose.theta + deg2rad(r.bearing_deg));
  return pose.position() + axis * (ring.mount_radius + r.range);
}

/// Index of the farthest path sample lying within the corridor of a forward echo closer than
/// the takeover range, searching the corridor ahead of `from`; nullopt when the path is clear.
inline std::optional<std::size_t> path_blocked(const ReferenceTrajectory& traj, std::size_t from, const Pose& pose,
                                               const SonarRing& ring, const std::vector<SonarReading>& readings,
                                               const ArbitrationConfig& arb) {
  const std::size_t to = sample_ahead(traj, from, arb.corridor_length);
  std::optional<std::size_t> last;
  for (const auto& r : readings) {
    if (!r.valid() || r.range >= arb.takeover_range || std::abs(wrap_180(r.bearing_deg)) > 90.0) continue;
    const Vec2 hit = echo_point(pose, ring, r);
    for (std::size_t i = from; i <= to; ++i) {
      if (std::hypot(traj.samples[i].x - hit.x, traj.samples[i].y - hit.y) < arb.corridor_half_width) {
        last = std::max(last.value_or(i), i);
      }
    }
  }
  return last;
}

/// Unit normal to the left of the path direction at sample `i`.
inline Vec2 path_left(const ReferenceTrajectory& traj, std::size_t i) {
  return unit_from_angle(traj.samples[i].theta + kPi / 2.0);
}

/// Detour side for a fresh takeover: +1 left of the path, -1 right. Goes away from the mean
/// lateral offset of the intruding echoes; a centred obstacle sends it toward the side with the
/// longer beam reading, left on a tie.
inline int detour_side(const ReferenceTrajectory& traj, std::size_t from, const Pose& pose, const SonarRing& ring,
                       const std::vector<SonarReading>& readings, const ArbitrationConfig& arb) {
  double lateral = 0.0;
  int n = 0;
  for (const auto& r : readings) {
    if (!r.valid() || r.range >= arb.takeover_range || std::abs(wrap_180(r.bearing_deg)) > 90.0) continue;
    const Vec2 hit = echo_point(pose, ring, r);
    const std::size_t k = nearest_sample(traj, hit, from, arb.corridor_length);
    const auto& q = traj.samples[k];
    if (std::hypot(q.x - hit.x, q.y - hit.y) >= arb.corridor_half_width) continue;
    lateral += dot(hit - q.pose().position(), path_left(traj, k));
    ++n;
  }
  if (n > 0 && std::abs(lateral / n) > 0.05) return lateral > 0.0 ? -1 : 1;
  const auto side_range = [&](double bearing) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : readings) {
      if (angle_diff_deg(wrap_180(r.bearing_deg), bearing) < 1.0 && r.valid()) best = std::min(best, r.range);
    }
    return best;
  };
  return side_range(-90.0) > side_range(90.0) ? -1 : 1;
}

}  // namespace detail

/// Runs the scenario to a verdict. Deterministic for a given scenario and seed.
inline RunResult run_scenario(const Scenario& sc) {
  sc.validate();
  std::mt19937_64 rng(sc.seed);
  RunResult run;
  auto& sum = run.summary;
  const bool avoid_only = sc.mode == Scenario::Mode::kAvoidOnly;

  if (!avoid_only) {
    run.plan = plan_scenario(sc, rng);
    if (!run.plan.ok()) {
      sum.verdict = Verdict::kPlanFailure;
      sum.detail = run.plan.failure;
      return run;
    }
    sum.path_cost = run.plan.path->cost;
  }

  WorldModel live = sc.world;
  std::vector<bool> fired(sc.events.size(), false);
  ImprovedVfh avoider(sc.avoider);
  std::normal_distribution<double> noise(0.0, sc.noise_sigma > 0.0 ? sc.noise_sigma : 1.0);
  const auto& traj = run.plan.trajectory;
  const ReferenceFn ref_fn = [&traj](double tau) { return traj.at(tau); };

  LoopState s{0.0, sc.start};
  DriveMode mode = avoid_only ? DriveMode::kAvoid : DriveMode::kTrack;
  double ref_offset = 0.0;  // reference time = t - ref_offset
  std::size_t progress = 0;
  std::size_t blocked_until = 0;
  int side = 0;
  const double reach = 3.0;  // progress search window along the path (m)

  const auto finish = [&](Verdict v, std::string detail) {
    sum.verdict = v;
    sum.detail = std::move(detail);
    if (v == Verdict::kGoalReached) sum.completion_time = s.t;
  };

  if (distance(sc.start.position(), sc.goal) <= sc.goal_tolerance) {
    finish(Verdict::kGoalReached, "start within tolerance of goal");
  }

  const double eps = 1e-9;
  while (sum.detail.empty()) {
    for (std::size_t i = 0; i < sc.events.size(); ++i) {
      if (!fired[i] && sc.events[i].t <= s.t + eps) {
        live.walls.push_back(sc.events[i].wall);
        fired[i] = true;
      }
    }

    auto readings = scan_sonar_ring(live, s.pose, sc.sonar);
    if (sc.noise_sigma > 0.0) {
      for (auto& r : readings) {
        if (r.valid()) r.range = std::max(0.0, r.range + noise(rng));
      }
    }

    Tick tick;
    tick.t = s.t;
    tick.pose = s.pose;
    tick.clearance = swept_clearance(live, sc.robot, s.pose.position(), s.pose.position());
    for (const auto& r : readings) {
      if (r.valid()) tick.sonar_min = std::min(tick.sonar_min, r.range);
    }

    Vec2 target = sc.goal;
    AvoiderOutput avoid;
    if (avoid_only) {
      avoid = avoider.step(s.t, readings, s.pose, target);
    } else {
      progress = detail::nearest_sample(traj, s.pose.position(), progress, reach);
      target = traj.samples[detail::sample_ahead(traj, progress, sc.arbitration.target_lookahead)].pose().position();
      const auto blocked = detail::path_blocked(traj, progress, s.pose, sc.sonar, readings, sc.arbitration);
      if (blocked) {
        // avoidance lasts at least until the robot is level with the far side of the echo
        blocked_until = std::max(blocked_until, *blocked);
        if (mode == DriveMode::kTrack) {
          mode = DriveMode::kAvoid;
          avoider.reset();
          side = detail::detour_side(traj, progress, s.pose, sc.sonar, readings, sc.arbitration);
          ++sum.takeovers;
        }
      }
      if (mode == DriveMode::kAvoid) {
        // short look-ahead for the whole detour; shifted sideways until level with the far side
        const std::size_t k = detail::sample_ahead(traj, progress, sc.arbitration.detour_lookahead);
        target = traj.samples[k].pose().position();
        if (progress < blocked_until) target = target + detail::path_left(traj, k) * (side * sc.arbitration.detour_offset);
      }
      avoid = avoider.step(s.t, readings, s.pose, target);
      if (mode == DriveMode::kAvoid && !blocked && progress >= blocked_until) {
        const auto& near = traj.samples[progress];
        const bool on_path = std::hypot(near.x - s.pose.x, near.y - s.pose.y) <= sc.arbitration.release_offset;
        if (on_path && avoid.record.d30 > sc.arbitration.release_d30) {
          mode = DriveMode::kTrack;
          ref_offset = s.t - near.t;
        }
      }
    }

    LoopState next;
    if (mode == DriveMode::kTrack) {
      const double tau = s.t - ref_offset;
      const RefState r = traj.at(tau);
      tick.ref = r.pose();
      tick.error = tracking_error(tick.ref, s.pose);
      tick.lyapunov = lyapunov(tick.error);
      const Command u = tracking_command({tau, s.pose}, ref_fn, sc.gains, sc.limits);
      tick.v = u.v;
      tick.omega = u.omega;
      next = closed_loop_step({tau, s.pose}, ref_fn, sc.control_dt, sc.gains, sc.limits);
      next.t = s.t + sc.control_dt;
    } else {
      const Command u = saturate({avoid.v, avoid.omega}, sc.limits);
      tick.v = u.v;
      tick.omega = u.omega;
      next = {s.t + sc.control_dt, unicycle_step(s.pose, u, sc.control_dt)};
      run.avoider.push_back(avoid.record);
    }
    tick.mode = mode;
    sum.min_clearance = std::min(sum.min_clearance, tick.clearance);
    run.ticks.push_back(tick);

    const double swept = swept_clearance(live, sc.robot, s.pose.position(), next.pose.position());
    s = next;
    if (swept < 0.0) {
      finish(Verdict::kCollision, "body touched an obstacle at t=" + text::sig(s.t, 6));
      break;
    }
    const bool ref_done = avoid_only || mode == DriveMode::kAvoid || s.t - ref_offset >= traj.duration() - eps;
    if (ref_done && distance(s.pose.position(), sc.goal) <= sc.goal_tolerance) {
      finish(Verdict::kGoalReached, "goal reached");
      break;
    }
    if (s.t >= sc.duration - eps) {
      finish(Verdict::kTimeout, "time limit reached");
      break;
    }
  }

  for (const auto& e : sc.expectations) {
    RegionCheck rc;
    rc.region = e.region;
    rc.expected_visit = e.visited;
    rc.visited = assert_region_traversal(run, sc.world, e.region, sc.robot.body_radius());
    sum.regions.push_back(rc);
  }
  return run;
}

inline const char* to_string(DriveMode m) noexcept { return m == DriveMode::kTrack ? "track" : "avoid"; }

/// Per-tick CSV followed by a '#'-prefixed summary block.
inline void write_run_log(std::ostream& out, const Scenario& sc, const RunResult& run) {
  using text::sig;
  out << "# runlog v1 scenario=" << sc.name << " seed=" << sc.seed << '\n';
  out << "t,x,y,theta,x_r,y_r,theta_r,e1,e2,e3,v,omega,V_p,mode,clearance,sonar_min\n";
  for (const auto& k : run.ticks) {
    out << sig(k.t) << ',' << sig(k.pose.x) << ',' << sig(k.pose.y) << ',' << sig(k.pose.theta) << ','
        << sig(k.ref.x) << ',' << sig(k.ref.y) << ',' << sig(k.ref.theta) << ',' << sig(k.error.e1) << ','
        << sig(k.error.e2) << ',' << sig(k.error.e3) << ',' << sig(k.v) << ',' << sig(k.omega) << ','
        << sig(k.lyapunov) << ',' << to_string(k.mode) << ',' << sig(k.clearance) << ',' << sig(k.sonar_min)
        << '\n';
  }
  const auto& s = run.summary;
  out << "# summary verdict=" << to_string(s.verdict) << '\n';
  out << "# summary detail=" << s.detail << '\n';
  out << "# summary path_cost=" << sig(s.path_cost) << '\n';
  out << "# summary min_clearance=" << sig(s.min_clearance) << '\n';
  out << "# summary completion_time=" << sig(s.completion_time) << '\n';
  out << "# summary takeovers=" << s.takeovers << '\n';
  for (const auto& r : s.regions) {
    out << "# summary region " << r.region << " expected=" << (r.expected_visit ? "visited" : "avoided")
        << " actual=" << (r.visited ? "visited" : "avoided") << (r.passed() ? " ok" : " MISMATCH") << '\n';
  }
}

inline Verdict parse_verdict(const std::string& s, int line) {
  for (auto v : {Verdict::kGoalReached, Verdict::kPlanFailure, Verdict::kCollision, Verdict::kTimeout}) {
    if (s == to_string(v)) return v;
  }
  throw ParseError("unknown verdict '" + s + "'", line);
}

/// Reads back the ticks and summary scalars written by write_run_log.
inline RunResult read_run_log(std::istream& in) {
  RunResult run;
  std::string raw;
  int n = 0;
  bool header = false;
  bool columns = false;
  while (std::getline(in, raw)) {
    ++n;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;
    if (!header) {
      if (raw.rfind("# runlog v1", 0) != 0) throw ParseError("missing '# runlog v1' header", n);
      header = true;
      continue;
    }
    if (raw.rfind("# summary ", 0) == 0) {
      const std::string body = raw.substr(10);
      const auto eq = body.find('=');
      if (body.rfind("region ", 0) == 0 || eq == std::string::npos) continue;
      const std::string key = body.substr(0, eq);
      const std::string val = body.substr(eq + 1);
      auto& s = run.summary;
      if (key == "verdict") {
        s.verdict = parse_verdict(val, n);
      } else if (key == "detail") {
        s.detail = val;
      } else if (key == "path_cost") {
        s.path_cost = text::parse_double(val, n);
      } else if (key == "min_clearance") {
        s.min_clearance = text::parse_double(val, n);
      } else if (key == "completion_time") {
        s.completion_time = text::parse_double(val, n);
      } else if (key == "takeovers") {
        s.takeovers = static_cast<int>(text::parse_int(val, n));
      }
      continue;
    }
    if (raw[0] == '#') continue;
    if (!columns) {
      if (raw.rfind("t,x,y,theta,x_r,y_r,theta_r,e1,e2,e3,v,omega,V_p", 0) != 0) {
        throw ParseError("unexpected run log columns", n);
      }
      columns = true;
      continue;
    }
    const auto tok = text::split(raw, ",");
    if (tok.size() != 16) throw ParseError("expected 16 fields per tick", n);
    const auto d = [&](std::size_t i) { return text::parse_double(tok[i], n); };
    Tick k;
    k.t = d(0);
    k.pose = {d(1), d(2), d(3)};
    k.ref = {d(4), d(5), d(6)};
    k.error = {d(7), d(8), d(9)};
    k.v = d(10);
    k.omega = d(11);
    k.lyapunov = d(12);
    if (tok[13] == "track") {
      k.mode = DriveMode::kTrack;
    } else if (tok[13] == "avoid") {
      k.mode = DriveMode::kAvoid;
    } else {
      throw ParseError("unknown mode '" + tok[13] + "'", n);
    }
    k.clearance = d(14);
    k.sonar_min = d(15);
    run.ticks.push_back(k);
  }
  if (!header) throw ParseError("empty run log");
  return run;
}

}  // namespace floornav

#endif  // FLOORNAV_SIMULATION_HPP
