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

#ifndef FLOORNAV_SVG_HPP
#define FLOORNAV_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "floornav/boundary_map.hpp"
#include "floornav/gridmap.hpp"
#include "floornav/planner.hpp"
#include "floornav/simulation.hpp"
#include "floornav/vfh.hpp"

namespace floornav::svg {

struct Style {
  double px_per_m = 40.0;
  double margin_px = 20.0;
  double stroke_px = 2.0;
  std::string wall_color = "#222222";
  std::string path_color = "#1f77b4";
  std::string actual_color = "#d62728";
  std::string avoid_color = "#ff7f0e";
};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  return s == "-0.00" ? "0.00" : s;
}

/// Minimal SVG canvas over a world rectangle; world y points up, SVG y points down.
class Canvas {
 public:
  /// `y_px_per_unit` defaults to the style's isotropic scale.
  Canvas(const Rect& world, const Style& style, double y_px_per_unit = 0.0)
      : world_(world), style_(style), sx_(style.px_per_m), sy_(y_px_per_unit > 0.0 ? y_px_per_unit : sx_) {
    width_ = (world.x_max - world.x_min) * sx_ + 2 * style.margin_px;
    height_ = (world.y_max - world.y_min) * sy_ + 2 * style.margin_px;
  }

  double px(double x) const { return style_.margin_px + (x - world_.x_min) * sx_; }
  double py(double y) const { return style_.margin_px + (world_.y_max - y) * sy_; }

  void line(Vec2 a, Vec2 b, const std::string& color, double width) {
    body_ << "<line x1=\"" << num(px(a.x)) << "\" y1=\"" << num(py(a.y)) << "\" x2=\"" << num(px(b.x))
          << "\" y2=\"" << num(py(b.y)) << "\" stroke=\"" << color << "\" stroke-width=\"" << num(width) << "\"/>\n";
  }
  void rect(Vec2 lo, Vec2 hi, const std::string& fill) {
    body_ << "<rect x=\"" << num(px(lo.x)) << "\" y=\"" << num(py(hi.y)) << "\" width=\""
          << num((hi.x - lo.x) * sx_) << "\" height=\"" << num((hi.y - lo.y) * sy_)
          << "\" fill=\"" << fill << "\"/>\n";
  }
  void circle(Vec2 c, double r_px, const std::string& fill) {
    body_ << "<circle cx=\"" << num(px(c.x)) << "\" cy=\"" << num(py(c.y)) << "\" r=\"" << num(r_px)
          << "\" fill=\"" << fill << "\"/>\n";
  }
  void polyline(const std::vector<Vec2>& pts, const std::string& color, double width, bool dashed = false) {
    if (pts.size() < 2) return;
    body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(width) << '"'
          << (dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      body_ << (i ? " " : "") << num(px(pts[i].x)) << ',' << num(py(pts[i].y));
    }
    body_ << "\"/>\n";
  }
  void label(Vec2 at, const std::string& text, const std::string& color = "#000000") {
    body_ << "<text x=\"" << num(px(at.x)) << "\" y=\"" << num(py(at.y)) << "\" font-family=\"monospace\" "
          << "font-size=\"12\" fill=\"" << color << "\">" << escape(text) << "</text>\n";
  }

  std::string str() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\"" << num(height_)
        << "\" viewBox=\"0 0 " << num(width_) << ' ' << num(height_) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

  const Style& style() const noexcept { return style_; }

 private:
  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '<') {
        out += "&lt;";
      } else if (c == '>') {
        out += "&gt;";
      } else if (c == '&') {
        out += "&amp;";
      } else {
        out += c;
      }
    }
    return out;
  }

  Rect world_;
  Style style_;
  double sx_;
  double sy_;
  double width_ = 0.0;
  double height_ = 0.0;
  std::ostringstream body_;
};

/// Bounding box of a point set, grown by `pad`; a unit box around the origin when empty.
inline Rect extent(const std::vector<Vec2>& pts, double pad) {
  if (pts.empty()) return {-1.0, -1.0, 1.0, 1.0};
  Rect r{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
  for (const auto& p : pts) {
    r.x_min = std::min(r.x_min, p.x);
    r.y_min = std::min(r.y_min, p.y);
    r.x_max = std::max(r.x_max, p.x);
    r.y_max = std::max(r.y_max, p.y);
  }
  return {r.x_min - pad, r.y_min - pad, r.x_max + pad, r.y_max + pad};
}

inline void draw_segments(Canvas& c, const SegmentMap2D& map) {
  for (const auto& s : map.segments) c.line(s.a, s.b, c.style().wall_color, c.style().stroke_px);
}

inline std::string plot_map2d(const SegmentMap2D& map, const Style& style = {}) {
  std::vector<Vec2> pts{map.source_pose.position()};
  for (const auto& s : map.segments) {
    pts.push_back(s.a);
    pts.push_back(s.b);
  }
  Canvas c(extent(pts, 0.5), style);
  draw_segments(c, map);
  c.circle(map.source_pose.position(), 4.0, style.actual_color);
  return c.str();
}

inline void draw_grid(Canvas& c, const OccupancyGrid& grid) {
  for (int j = 0; j < grid.height(); ++j) {
    for (int i = 0; i < grid.width(); ++i) {
      const Cell v = grid.at({i, j});
      if (v == Cell::kFree) continue;
      const Vec2 lo{grid.x_min() + i * grid.cellsize(), grid.y_min() + j * grid.cellsize()};
      c.rect(lo, lo + Vec2{grid.cellsize(), grid.cellsize()}, v == Cell::kOccupied ? "#444444" : "#bbbbbb");
    }
  }
}

inline std::string plot_grid(const OccupancyGrid& grid, const Style& style = {}) {
  Canvas c(grid.bounds(), style);
  draw_grid(c, grid);
  return c.str();
}

inline std::string plot_path(const OccupancyGrid& grid, const GridPath& path, const Style& style = {}) {
  Canvas c(grid.bounds(), style);
  draw_grid(c, grid);
  c.polyline(path.points, style.path_color, style.stroke_px);
  if (!path.points.empty()) {
    c.circle(path.points.front(), 4.0, style.path_color);
    c.circle(path.points.back(), 4.0, style.actual_color);
  }
  return c.str();
}

/// Reference trajectory (dashed) against the driven path, avoider stretches highlighted.
inline std::string plot_trajectory_overlay(const std::vector<Tick>& ticks, const ReferenceTrajectory* traj,
                                           const SegmentMap2D* map, const Style& style = {}) {
  std::vector<Vec2> pts;
  for (const auto& t : ticks) pts.push_back(t.pose.position());
  std::vector<Vec2> ref;
  if (traj) {
    for (const auto& s : traj->samples) ref.push_back({s.x, s.y});
  }
  std::vector<Vec2> all = pts;
  all.insert(all.end(), ref.begin(), ref.end());
  if (map) {
    for (const auto& s : map->segments) {
      all.push_back(s.a);
      all.push_back(s.b);
    }
  }
  Canvas c(extent(all, 0.5), style);
  if (map) draw_segments(c, *map);
  c.polyline(ref, style.path_color, style.stroke_px, true);
  // split the driven path into runs of equal mode
  std::size_t from = 0;
  for (std::size_t i = 1; i <= ticks.size(); ++i) {
    if (i == ticks.size() || ticks[i].mode != ticks[from].mode) {
      std::vector<Vec2> run(pts.begin() + static_cast<long>(from),
                            pts.begin() + static_cast<long>(std::min(i + 1, pts.size())));
      c.polyline(run, ticks[from].mode == DriveMode::kAvoid ? style.avoid_color : style.actual_color,
                 style.stroke_px);
      from = i;
    }
  }
  return c.str();
}

/// Heading, target bearing and chosen direction over time (degrees), with d30 below.
inline std::string plot_vfh_run(const std::vector<AvoiderRecord>& recs, const Style& style = {}) {
  const double t_end = recs.empty() ? 1.0 : std::max(recs.back().t, recs.front().t + 1.0);
  const double t0 = recs.empty() ? 0.0 : recs.front().t;
  // angles in [0, 360) map to y in [2, 5.6]; d30 in [0, 4] maps to y in [0, 1.6]
  Style s = style;
  const double span = t_end - t0;
  s.px_per_m = 800.0 / span;
  Canvas c({t0, 0.0, t_end, 6.0}, s, 60.0);
  const auto series = [&](auto value, double lo, double scale) {
    std::vector<Vec2> pts;
    for (const auto& r : recs) pts.push_back({r.t, lo + value(r) * scale});
    return pts;
  };
  c.polyline(series([](const AvoiderRecord& r) { return r.theta_deg; }, 2.0, 0.01), style.actual_color, 1.5);
  c.polyline(series([](const AvoiderRecord& r) { return r.theta_t_deg; }, 2.0, 0.01), style.path_color, 1.5, true);
  c.polyline(series([](const AvoiderRecord& r) { return r.decision.theta_d; }, 2.0, 0.01), style.avoid_color, 1.0);
  c.polyline(series([](const AvoiderRecord& r) { return std::min(r.d30, 4.0); }, 0.0, 0.4), style.wall_color, 1.5);
  c.label({t0, 5.8}, "theta (red) theta_t (blue) theta_d (orange)");
  c.label({t0, 1.8}, "d30");
  return c.str();
}

}  // namespace floornav::svg

#endif  // FLOORNAV_SVG_HPP
