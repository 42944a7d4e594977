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

#ifndef FLOORNAV_BOUNDARY_MAP_HPP
#define FLOORNAV_BOUNDARY_MAP_HPP

// 3D-to-2D image compression and boundary detection: collapses a pitched-scanner cloud onto
// the floor plane, keeps the nearest admissible return per scan angle, and segments the
// resulting single-valued profile into wall segments.

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "floornav/angles.hpp"
#include "floornav/geometry.hpp"
#include "floornav/scan_geometry.hpp"
#include "floornav/text_io.hpp"

namespace floornav {

struct CompressOptions {
  /// Returns this close to z = 0 are floor hits.
  double floor_epsilon = 0.02;
  /// Drop floor and overhead returns before picking the nearest one per scan angle. The
  /// opposite order lets a girder above z_limit hide a reachable opening behind it.
  bool filter_before_min = true;
};

struct SegmentOptions {
  double min_break_distance = 0.10;
  double fit_epsilon = 0.03;
};

/// One column of the compressed image: the nearest admissible return at scan angle `scan_deg`.
/// `range` is measured in the floor plane.
struct PolarPixel2D {
  int ray = 0;
  double scan_deg = 0.0;
  double range = 0.0;

  bool operator==(const PolarPixel2D&) const = default;
};

struct SegmentMap2D {
  std::vector<Segment2D> segments;
  Pose source_pose;
  double z_limit = 0.0;
};

inline std::vector<PolarPixel2D> compress(const Cloud3D& cloud, double z_limit,
                                          const CompressOptions& opt = {}) {
  if (!(z_limit > 0.0)) throw std::invalid_argument("compress: z_limit must be positive");
  const auto& cfg = cloud.config;
  const auto admissible = [&](const CloudPoint& p) {
    const double z = p.sensor.z + cfg.mount_height;
    return z <= z_limit && z > opt.floor_epsilon;
  };

  struct Best {
    double range;
    bool keep;
  };
  std::vector<std::optional<Best>> best(static_cast<std::size_t>(cfg.rays_per_frame()));
  for (const auto& p : cloud.points) {
    if (p.ray < 0 || p.ray >= static_cast<int>(best.size())) {
      throw std::out_of_range("compress: ray index outside the scan lattice");
    }
    const bool ok = admissible(p);
    if (opt.filter_before_min && !ok) continue;
    const double r = std::hypot(p.sensor.x, p.sensor.y);
    auto& slot = best[static_cast<std::size_t>(p.ray)];
    if (!slot || r < slot->range) slot = Best{r, ok};
  }

  std::vector<PolarPixel2D> out;
  for (std::size_t k = 0; k < best.size(); ++k) {
    if (!best[k] || !best[k]->keep || !(best[k]->range > 0.0)) continue;
    const int ray = static_cast<int>(k);
    out.push_back({ray, cfg.scan_at(ray), best[k]->range});
  }
  return out;
}

namespace detail {

inline void split_cluster(const std::vector<Vec2>& pts, std::size_t lo, std::size_t hi, double eps,
                          std::vector<std::size_t>& breaks) {
  if (hi <= lo + 1) return;
  const Segment2D chord{pts[lo], pts[hi]};
  double worst = -1.0;
  std::size_t at = lo;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    const double d = point_segment_distance(pts[i], chord);
    if (d > worst) {
      worst = d;
      at = i;
    }
  }
  if (worst <= eps) return;
  split_cluster(pts, lo, at, eps, breaks);
  breaks.push_back(at);
  split_cluster(pts, at, hi, eps, breaks);
}

inline bool fits(const std::vector<Vec2>& pts, std::size_t lo, std::size_t hi, double eps) {
  const Segment2D chord{pts[lo], pts[hi]};
  for (std::size_t i = lo; i <= hi; ++i) {
    if (point_segment_distance(pts[i], chord) > eps) return false;
  }
  return true;
}

}  // namespace detail

/// Breakpoint clustering followed by split-and-merge line fitting. Pixels must be ordered by
/// scan angle. Each segment runs between two input pixels, its nodal points.
inline SegmentMap2D segment(const std::vector<PolarPixel2D>& pixels, const Pose& pose,
                            double scan_step_deg, const SegmentOptions& opt = {}) {
  for (std::size_t i = 1; i < pixels.size(); ++i) {
    if (!(pixels[i - 1].scan_deg < pixels[i].scan_deg)) {
      throw std::invalid_argument("segment: pixels must be sorted by scan angle");
    }
  }
  SegmentMap2D map;
  map.source_pose = pose;

  const Pose frame = scanner_frame(pose);
  const double c = std::cos(frame.theta);
  const double s = std::sin(frame.theta);
  std::vector<Vec2> world;
  world.reserve(pixels.size());
  for (const auto& px : pixels) {
    const double b = deg2rad(px.scan_deg);
    const Vec2 local{px.range * std::cos(b), px.range * std::sin(b)};
    world.push_back({frame.x + c * local.x - s * local.y, frame.y + s * local.x + c * local.y});
  }

  const double step_sin = std::sin(deg2rad(scan_step_deg));
  std::size_t start = 0;
  for (std::size_t i = 0; i < world.size(); ++i) {
    const bool last = i + 1 == world.size();
    if (!last) {
      const double r = std::max(pixels[i].range, pixels[i + 1].range);
      const double threshold = std::max(opt.min_break_distance, 2.0 * r * step_sin);
      if (distance(world[i], world[i + 1]) <= threshold) continue;
    }
    // cluster [start, i]
    if (i > start) {
      std::vector<std::size_t> nodes{start};
      detail::split_cluster(world, start, i, opt.fit_epsilon, nodes);
      nodes.push_back(i);
      // merge neighbours whose union still fits
      bool merged = true;
      while (merged && nodes.size() > 2) {
        merged = false;
        for (std::size_t n = 1; n + 1 < nodes.size(); ++n) {
          if (detail::fits(world, nodes[n - 1], nodes[n + 1], opt.fit_epsilon)) {
            nodes.erase(nodes.begin() + static_cast<std::ptrdiff_t>(n));
            merged = true;
            break;
          }
        }
      }
      for (std::size_t n = 0; n + 1 < nodes.size(); ++n) {
        const Segment2D seg{world[nodes[n]], world[nodes[n + 1]]};
        if (seg.length() > 0.0) map.segments.push_back(seg);
      }
    }
    start = i + 1;
  }
  return map;
}

struct BoundaryMapOptions {
  CompressOptions compress;
  SegmentOptions segment;
};

inline SegmentMap2D build_boundary_map(const Cloud3D& cloud, double z_limit,
                                       const BoundaryMapOptions& opt = {}) {
  auto map = segment(compress(cloud, z_limit, opt.compress), cloud.pose, cloud.config.scan_step,
                     opt.segment);
  map.z_limit = z_limit;
  return map;
}

inline void write_segment_map(std::ostream& out, const SegmentMap2D& map) {
  using text::fixed;
  out << "# segmap v1 z_limit=" << text::sig(map.z_limit) << " pose=" << text::sig(map.source_pose.x)
      << ',' << text::sig(map.source_pose.y) << ',' << text::sig(rad2deg(map.source_pose.theta))
      << '\n';
  out << "# x1 y1 x2 y2\n";
  for (const auto& s : map.segments) {
    out << fixed(s.a.x) << ' ' << fixed(s.a.y) << ' ' << fixed(s.b.x) << ' ' << fixed(s.b.y) << '\n';
  }
}

inline SegmentMap2D read_segment_map(std::istream& in) {
  SegmentMap2D map;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.rfind("# segmap v1", 0) == 0) {
      for (const auto& tok : text::split(line.substr(11))) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const auto key = tok.substr(0, eq);
        const auto val = tok.substr(eq + 1);
        if (key == "z_limit") {
          map.z_limit = text::parse_double(val, n);
        } else if (key == "pose") {
          const auto parts = text::split(val, ",");
          if (parts.size() != 3) throw ParseError("pose needs x,y,theta_deg", n);
          map.source_pose = {text::parse_double(parts[0], n), text::parse_double(parts[1], n),
                             deg2rad(text::parse_double(parts[2], n))};
        }
      }
      continue;
    }
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto tok = text::split(line);
    if (tok.empty()) continue;
    if (tok.size() != 4) throw ParseError("expected 'x1 y1 x2 y2'", n);
    map.segments.push_back({{text::parse_double(tok[0], n), text::parse_double(tok[1], n)},
                            {text::parse_double(tok[2], n), text::parse_double(tok[3], n)}});
  }
  return map;
}

}  // namespace floornav

#endif  // FLOORNAV_BOUNDARY_MAP_HPP
