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

#ifndef FLOORNAV_GEOMETRY_HPP
#define FLOORNAV_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <optional>

#include "floornav/angles.hpp"

namespace floornav {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const noexcept { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const noexcept { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const noexcept { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2&) const = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) noexcept { return norm(a - b); }
inline Vec2 unit_from_angle(double rad) noexcept { return {std::cos(rad), std::sin(rad)}; }

/// Planar pose. Heading in radians, counter-clockwise from +x.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  constexpr Vec2 position() const noexcept { return {x, y}; }
  constexpr bool operator==(const Pose&) const = default;
};

struct Segment2D {
  Vec2 a;
  Vec2 b;

  double length() const noexcept { return distance(a, b); }
  constexpr bool operator==(const Segment2D&) const = default;
};

/// Axis-aligned rectangle, closed.
struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  constexpr bool contains(Vec2 p) const noexcept {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  constexpr bool operator==(const Rect&) const = default;
};

inline double point_segment_distance(Vec2 p, const Segment2D& s) noexcept {
  const Vec2 d = s.b - s.a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, s.a);
  const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return distance(p, s.a + d * t);
}

/// Parameter t >= 0 along `origin + t * dir` where the ray meets `s`, if it does.
inline std::optional<double> ray_segment_intersection(Vec2 origin, Vec2 dir,
                                                      const Segment2D& s) noexcept {
  const Vec2 e = s.b - s.a;
  const double denom = cross(dir, e);
  if (denom == 0.0) return std::nullopt;  // parallel; grazing hits are ignored
  const Vec2 w = s.a - origin;
  const double t = cross(w, e) / denom;
  const double u = cross(w, dir) / denom;
  if (t < 0.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return t;
}

inline bool segments_intersect(const Segment2D& p, const Segment2D& q) noexcept {
  const auto orient = [](Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); };
  const auto on_segment = [](Vec2 a, Vec2 b, Vec2 c) {
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
  };
  const double d1 = orient(q.a, q.b, p.a);
  const double d2 = orient(q.a, q.b, p.b);
  const double d3 = orient(p.a, p.b, q.a);
  const double d4 = orient(p.a, p.b, q.b);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(q.a, q.b, p.a)) return true;
  if (d2 == 0 && on_segment(q.a, q.b, p.b)) return true;
  if (d3 == 0 && on_segment(p.a, p.b, q.a)) return true;
  if (d4 == 0 && on_segment(p.a, p.b, q.b)) return true;
  return false;
}

inline double segment_segment_distance(const Segment2D& p, const Segment2D& q) noexcept {
  if (segments_intersect(p, q)) return 0.0;
  return std::min({point_segment_distance(p.a, q), point_segment_distance(p.b, q),
                   point_segment_distance(q.a, p), point_segment_distance(q.b, p)});
}

/// Liang-Barsky clip of `s` to `r`; nullopt when nothing of the segment lies inside.
inline std::optional<Segment2D> clip_segment(const Segment2D& s, const Rect& r) noexcept {
  const Vec2 d = s.b - s.a;
  double t0 = 0.0;
  double t1 = 1.0;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {s.a.x - r.x_min, r.x_max - s.a.x, s.a.y - r.y_min, r.y_max - s.a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return std::nullopt;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return std::nullopt;
  }
  Segment2D out{t0 == 0.0 ? s.a : s.a + d * t0, t1 == 1.0 ? s.b : s.a + d * t1};
  return out;
}

}  // namespace floornav

#endif  // FLOORNAV_GEOMETRY_HPP
