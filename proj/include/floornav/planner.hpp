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

#ifndef FLOORNAV_PLANNER_HPP
#define FLOORNAV_PLANNER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "floornav/angles.hpp"
#include "floornav/geometry.hpp"
#include "floornav/gridmap.hpp"
#include "floornav/text_io.hpp"

namespace floornav {

class InvalidEndpointError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NoPathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StationaryGoalError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Path length in cells as `straight + diagonal * sqrt(2)`. Kept as integers so that costs
/// compare exactly; sqrt(2) is irrational, so equal costs mean equal step counts.
struct OctileCost {
  int straight = 0;
  int diagonal = 0;

  constexpr OctileCost operator+(OctileCost o) const noexcept {
    return {straight + o.straight, diagonal + o.diagonal};
  }
  constexpr bool operator==(const OctileCost&) const = default;
  double cells() const noexcept { return straight + diagonal * std::numbers::sqrt2; }
};

/// Sign of (a - b), exact.
constexpr int compare(OctileCost a, OctileCost b) noexcept {
  const long ds = static_cast<long>(a.straight) - b.straight;
  const long dd = static_cast<long>(a.diagonal) - b.diagonal;
  if (ds >= 0 && dd >= 0) return (ds == 0 && dd == 0) ? 0 : 1;
  if (ds <= 0 && dd <= 0) return -1;
  // opposite signs: compare ds^2 against 2 dd^2
  const long lhs = ds * ds;
  const long rhs = 2 * dd * dd;
  if (ds > 0) return lhs > rhs ? 1 : -1;
  return rhs > lhs ? 1 : -1;
}

constexpr OctileCost octile_distance(GridIndex a, GridIndex b) noexcept {
  const int dx = a.i > b.i ? a.i - b.i : b.i - a.i;
  const int dy = a.j > b.j ? a.j - b.j : b.j - a.j;
  const int lo = dx < dy ? dx : dy;
  const int hi = dx < dy ? dy : dx;
  return {hi - lo, lo};
}

struct GridPath {
  std::vector<GridIndex> cells;
  std::vector<Vec2> points;  // cell centers in world frame
  OctileCost steps;
  double cost = 0.0;  // meters
};

namespace detail {

struct Step {
  int di;
  int dj;
  bool diagonal;
};

inline constexpr std::array<Step, 8> kSteps{{{1, 0, false},
                                             {0, 1, false},
                                             {-1, 0, false},
                                             {0, -1, false},
                                             {1, 1, true},
                                             {-1, 1, true},
                                             {-1, -1, true},
                                             {1, -1, true}}};

}  // namespace detail

/// Whether a move from `c` by `s` is legal: target Free and, for diagonals, both orthogonal
/// neighbours Free so the robot never clips a blocked corner.
inline bool can_step(const OccupancyGrid& grid, GridIndex c, int di, int dj) {
  if (!grid.free({c.i + di, c.j + dj})) return false;
  if (di != 0 && dj != 0) return grid.free({c.i + di, c.j}) && grid.free({c.i, c.j + dj});
  return true;
}

/// A* over the 8-connected grid with the octile heuristic. Among equal f the deeper node
/// (larger g) is expanded first, then the lower row-major index.
inline GridPath astar(const OccupancyGrid& grid, GridIndex start, GridIndex goal) {
  if (!grid.free(start)) throw InvalidEndpointError("astar: start cell is not free");
  if (!grid.free(goal)) throw InvalidEndpointError("astar: goal cell is not free");

  const std::size_t n = grid.cells().size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<OctileCost> g(n);
  std::vector<bool> seen(n, false);
  std::vector<bool> closed(n, false);
  std::vector<std::size_t> parent(n, kNone);

  struct Entry {
    OctileCost f;
    OctileCost g;
    std::size_t index;
    GridIndex cell;
  };
  const auto worse = [](const Entry& a, const Entry& b) {
    if (const int c = compare(a.f, b.f); c != 0) return c > 0;
    if (const int c = compare(a.g, b.g); c != 0) return c < 0;
    return a.index > b.index;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);

  const std::size_t s = grid.index(start);
  seen[s] = true;
  open.push({octile_distance(start, goal), {}, s, start});
  const std::size_t target = grid.index(goal);

  while (!open.empty()) {
    const Entry cur = open.top();
    open.pop();
    if (closed[cur.index] || !(cur.g == g[cur.index])) continue;
    closed[cur.index] = true;
    if (cur.index == target) break;
    for (const auto& st : detail::kSteps) {
      if (!can_step(grid, cur.cell, st.di, st.dj)) continue;
      const GridIndex nb{cur.cell.i + st.di, cur.cell.j + st.dj};
      const std::size_t ni = grid.index(nb);
      if (closed[ni]) continue;
      const OctileCost ng = cur.g + (st.diagonal ? OctileCost{0, 1} : OctileCost{1, 0});
      if (seen[ni] && compare(ng, g[ni]) >= 0) continue;
      seen[ni] = true;
      g[ni] = ng;
      parent[ni] = cur.index;
      open.push({ng + octile_distance(nb, goal), ng, ni, nb});
    }
  }
  if (!closed[target]) throw NoPathError("astar: goal is unreachable from start");

  GridPath path;
  for (std::size_t at = target; at != kNone; at = parent[at]) {
    path.cells.push_back({static_cast<int>(at % static_cast<std::size_t>(grid.width())),
                          static_cast<int>(at / static_cast<std::size_t>(grid.width()))});
  }
  std::reverse(path.cells.begin(), path.cells.end());
  for (const auto& c : path.cells) path.points.push_back(grid.grid_to_world(c));
  path.steps = g[target];
  path.cost = path.steps.cells() * grid.cellsize();
  return path;
}

/// True when every cell the straight segment touches is Free.
inline bool line_of_sight(const OccupancyGrid& grid, Vec2 a, Vec2 b) {
  bool clear = true;
  for_each_cell_touching(grid, {a, b}, [&](GridIndex c) { clear = clear && grid.at(c) == Cell::kFree; });
  return clear && grid.bounds().contains(a) && grid.bounds().contains(b);
}

/// Greedy string pulling: from each anchor jump to the farthest path point still in sight.
inline std::vector<Vec2> shortcut(const OccupancyGrid& grid, const GridPath& path) {
  std::vector<Vec2> out;
  if (path.points.empty()) return out;
  std::size_t anchor = 0;
  out.push_back(path.points.front());
  while (anchor + 1 < path.points.size()) {
    std::size_t next = anchor + 1;
    for (std::size_t k = path.points.size() - 1; k > anchor + 1; --k) {
      if (line_of_sight(grid, path.points[anchor], path.points[k])) {
        next = k;
        break;
      }
    }
    out.push_back(path.points[next]);
    anchor = next;
  }
  return out;
}

inline void write_path_csv(std::ostream& out, const GridPath& path) {
  out << "# gridpath v1 cost_m=" << text::sig(path.cost) << " straight=" << path.steps.straight
      << " diagonal=" << path.steps.diagonal << '\n';
  out << "i,j,x,y\n";
  for (std::size_t n = 0; n < path.cells.size(); ++n) {
    out << path.cells[n].i << ',' << path.cells[n].j << ',' << text::fixed(path.points[n].x) << ','
        << text::fixed(path.points[n].y) << '\n';
  }
}

inline GridPath read_path_csv(std::istream& in) {
  GridPath path;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.rfind("# gridpath v1", 0) == 0) {
      for (const auto& tok : text::split(line.substr(13))) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const auto key = tok.substr(0, eq);
        const auto val = tok.substr(eq + 1);
        if (key == "cost_m") path.cost = text::parse_double(val, n);
        if (key == "straight") path.steps.straight = static_cast<int>(text::parse_int(val, n));
        if (key == "diagonal") path.steps.diagonal = static_cast<int>(text::parse_int(val, n));
      }
      continue;
    }
    if (line.empty() || line[0] == '#' || line.rfind("i,j", 0) == 0) continue;
    const auto tok = text::split(line, ",\r");
    if (tok.size() != 4) throw ParseError("expected 'i,j,x,y'", n);
    path.cells.push_back({static_cast<int>(text::parse_int(tok[0], n)), static_cast<int>(text::parse_int(tok[1], n))});
    path.points.push_back({text::parse_double(tok[2], n), text::parse_double(tok[3], n)});
  }
  return path;
}

// ---------------------------------------------------------------------------------------------
// Reference trajectories

/// Reference pose and feed-forward velocities at time t. Heading in radians.
struct RefState {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double v = 0.0;
  double omega = 0.0;

  Pose pose() const noexcept { return {x, y, theta}; }
};

/// Constant-curvature piece (curvature 0 for a straight line) driven at constant speed.
struct TrajectoryPiece {
  Vec2 start;
  double heading = 0.0;
  double length = 0.0;
  double curvature = 0.0;
  double speed = 0.0;
  double t0 = 0.0;

  double duration() const noexcept { return length / speed; }

  RefState at_distance(double s) const noexcept {
    RefState r;
    r.theta = heading + curvature * s;
    if (curvature == 0.0) {
      r.x = start.x + s * std::cos(heading);
      r.y = start.y + s * std::sin(heading);
    } else {
      r.x = start.x + (std::sin(r.theta) - std::sin(heading)) / curvature;
      r.y = start.y - (std::cos(r.theta) - std::cos(heading)) / curvature;
    }
    r.theta = wrap_pi(r.theta);
    r.v = speed;
    r.omega = speed * curvature;
    return r;
  }
};

struct ReferenceTrajectory {
  std::vector<RefState> samples;
  /// Exact geometry behind the samples; empty for trajectories read back from CSV.
  std::vector<TrajectoryPiece> pieces;

  double duration() const noexcept {
    if (!pieces.empty()) return pieces.back().t0 + pieces.back().duration();
    return samples.empty() ? 0.0 : samples.back().t;
  }

  /// Exact state when the piecewise geometry is known, linear interpolation otherwise.
  /// Clamped to the last state past the end.
  RefState at(double t) const {
    if (!pieces.empty()) {
      const double tt = std::clamp(t, 0.0, duration());
      auto it = std::upper_bound(pieces.begin(), pieces.end(), tt,
                                 [](double v, const TrajectoryPiece& p) { return v < p.t0; });
      const auto& p = *(it == pieces.begin() ? it : std::prev(it));
      RefState r = p.at_distance(std::min(p.length, (tt - p.t0) * p.speed));
      r.t = t;
      return r;
    }
    if (samples.empty()) throw std::logic_error("empty reference trajectory");
    if (t <= samples.front().t) return samples.front();
    if (t >= samples.back().t) return samples.back();
    const auto it = std::upper_bound(samples.begin(), samples.end(), t,
                                     [](double v, const RefState& s) { return v < s.t; });
    const RefState& b = *it;
    const RefState& a = *std::prev(it);
    const double u = (t - a.t) / (b.t - a.t);
    RefState r = a;
    r.t = t;
    r.x = a.x + u * (b.x - a.x);
    r.y = a.y + u * (b.y - a.y);
    r.theta = wrap_pi(a.theta + u * wrap_pi(b.theta - a.theta));
    return r;
  }
};

struct TrajectoryOptions {
  double v_cruise = 0.3;
  double dt = 0.05;
  double omega_max = deg2rad(25.0);
  /// Corner fillet radius; shrunk only where the adjacent legs are too short to hold it.
  double turn_radius = 0.4;
};

/// Drops repeated and collinear interior points.
inline std::vector<Vec2> simplify_polyline(const std::vector<Vec2>& pts) {
  std::vector<Vec2> out;
  for (const auto& p : pts) {
    if (!out.empty() && distance(out.back(), p) < 1e-12) continue;
    while (out.size() >= 2) {
      const Vec2 u = out.back() - out[out.size() - 2];
      const Vec2 w = p - out.back();
      if (std::abs(cross(u, w)) <= 1e-12 * norm(u) * norm(w) && dot(u, w) > 0.0) {
        out.pop_back();
      } else {
        break;
      }
    }
    out.push_back(p);
  }
  return out;
}

/// Straight legs joined by circular fillets, sampled every `opt.dt` seconds. Speed is
/// `v_cruise` on legs and capped so that |omega| <= omega_max on fillets.
inline ReferenceTrajectory polyline_to_trajectory(const std::vector<Vec2>& polyline,
                                                  const TrajectoryOptions& opt = {}) {
  if (!(opt.v_cruise > 0.0) || !(opt.dt > 0.0) || !(opt.omega_max > 0.0) || !(opt.turn_radius > 0.0)) {
    throw std::invalid_argument("trajectory: speeds, dt and turn radius must be positive");
  }
  const auto pts = simplify_polyline(polyline);
  if (pts.size() < 2) throw StationaryGoalError("trajectory: path has a single point");

  const std::size_t legs = pts.size() - 1;
  std::vector<double> len(legs);
  std::vector<double> heading(legs);
  for (std::size_t i = 0; i < legs; ++i) {
    len[i] = distance(pts[i], pts[i + 1]);
    heading[i] = std::atan2(pts[i + 1].y - pts[i].y, pts[i + 1].x - pts[i].x);
  }
  // corner c sits between leg c-1 and leg c
  std::vector<double> turn(pts.size(), 0.0);
  std::vector<double> radius(pts.size(), 0.0);
  std::vector<double> tangent(pts.size(), 0.0);
  for (std::size_t c = 1; c + 1 < pts.size(); ++c) {
    turn[c] = wrap_pi(heading[c] - heading[c - 1]);
    if (std::abs(turn[c]) > deg2rad(179.0)) {
      throw std::invalid_argument("trajectory: path reverses on itself");
    }
    const double half_tan = std::tan(std::abs(turn[c]) / 2.0);
    const double room_in = c == 1 ? len[c - 1] : len[c - 1] / 2.0;
    const double room_out = c + 1 == legs ? len[c] : len[c] / 2.0;
    const double t_max = std::min(room_in, room_out);
    radius[c] = std::min(opt.turn_radius, t_max / half_tan);
    tangent[c] = radius[c] * half_tan;
  }

  ReferenceTrajectory traj;
  double t = 0.0;
  const auto add = [&](Vec2 start, double head, double length, double curvature) {
    if (length <= 1e-12) return;
    TrajectoryPiece p;
    p.start = start;
    p.heading = head;
    p.length = length;
    p.curvature = curvature;
    p.speed = curvature == 0.0 ? opt.v_cruise : std::min(opt.v_cruise, opt.omega_max / std::abs(curvature));
    p.t0 = t;
    t += p.duration();
    traj.pieces.push_back(p);
  };
  for (std::size_t i = 0; i < legs; ++i) {
    const Vec2 dir = unit_from_angle(heading[i]);
    const Vec2 from = pts[i] + dir * tangent[i];
    add(from, heading[i], len[i] - tangent[i] - tangent[i + 1], 0.0);
    const std::size_t c = i + 1;
    if (c + 1 < pts.size() && tangent[c] > 0.0) {
      const double k = (turn[c] > 0.0 ? 1.0 : -1.0) / radius[c];
      add(pts[c] - dir * tangent[c], heading[i], radius[c] * std::abs(turn[c]), k);
    }
  }

  const double total = t;
  const auto count = static_cast<std::size_t>(std::floor(total / opt.dt + 1e-9));
  for (std::size_t n = 0; n <= count; ++n) traj.samples.push_back(traj.at(n * opt.dt));
  if (total - traj.samples.back().t > 1e-9) traj.samples.push_back(traj.at(total));
  return traj;
}

inline ReferenceTrajectory path_to_trajectory(const GridPath& path, const TrajectoryOptions& opt = {}) {
  return polyline_to_trajectory(path.points, opt);
}

inline void write_trajectory_csv(std::ostream& out, const ReferenceTrajectory& traj) {
  out << "t,x,y,theta,v,omega\n";
  for (const auto& s : traj.samples) {
    out << text::sig(s.t) << ',' << text::sig(s.x) << ',' << text::sig(s.y) << ',' << text::sig(s.theta)
        << ',' << text::sig(s.v) << ',' << text::sig(s.omega) << '\n';
  }
}

inline ReferenceTrajectory read_trajectory_csv(std::istream& in) {
  ReferenceTrajectory traj;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#' || line.rfind("t,", 0) == 0) continue;
    const auto tok = text::split(line, ",\r");
    if (tok.size() != 6) throw ParseError("expected 't,x,y,theta,v,omega'", n);
    RefState s;
    s.t = text::parse_double(tok[0], n);
    s.x = text::parse_double(tok[1], n);
    s.y = text::parse_double(tok[2], n);
    s.theta = text::parse_double(tok[3], n);
    s.v = text::parse_double(tok[4], n);
    s.omega = text::parse_double(tok[5], n);
    if (!traj.samples.empty() && !(s.t > traj.samples.back().t)) {
      throw ParseError("trajectory times must increase strictly", n);
    }
    traj.samples.push_back(s);
  }
  return traj;
}

}  // namespace floornav

#endif  // FLOORNAV_PLANNER_HPP
