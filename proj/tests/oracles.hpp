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

// Independent reference implementations the library is checked against. Kept deliberately
// naive: exhaustive loops, no shared helpers with the code under test.

#ifndef FLOORNAV_TESTS_ORACLES_HPP
#define FLOORNAV_TESTS_ORACLES_HPP

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <vector>

#include "floornav.hpp"

namespace oracle {

using namespace floornav;

/// Groups by ray, drops floor and overhead returns, keeps the shortest horizontal range.
inline std::vector<PolarPixel2D> compress(const Cloud3D& cloud, double z_limit, double floor_eps = 0.02) {
  std::map<int, double> best;
  for (const auto& p : cloud.points) {
    const double z = p.range * std::sin(deg2rad(p.pitch_deg)) + cloud.config.mount_height;
    if (z > z_limit || z <= floor_eps) continue;
    const double r = p.range * std::cos(deg2rad(p.pitch_deg));
    auto it = best.find(p.ray);
    if (it == best.end() || r < it->second) best[p.ray] = r;
  }
  std::vector<PolarPixel2D> out;
  for (const auto& [k, r] : best) out.push_back({k, cloud.config.scan_min + k * cloud.config.scan_step, r});
  return out;
}

/// Random points on the default sweep lattice; several share each ray.
inline Cloud3D random_cloud(std::mt19937_64& rng, int n) {
  Cloud3D c;
  std::uniform_int_distribution<int> frame(0, c.config.frame_count() - 1);
  std::uniform_int_distribution<int> ray(0, c.config.rays_per_frame() - 1);
  std::uniform_real_distribution<double> range(0.2, 12.0);
  for (int i = 0; i < n; ++i) {
    CloudPoint p;
    p.frame = frame(rng);
    p.ray = ray(rng);
    p.pitch_deg = c.config.pitch_at(p.frame);
    p.scan_deg = c.config.scan_at(p.ray);
    p.range = range(rng);
    p.sensor = polar_to_cartesian(p.pitch_deg, p.scan_deg, p.range);
    c.points.push_back(p);
  }
  return c;
}

/// Plain O(V^2) Dijkstra over the same move set with exact octile costs; nullopt when
/// unreachable.
inline std::optional<OctileCost> dijkstra_steps(const OccupancyGrid& g, GridIndex s, GridIndex t) {
  const std::size_t n = g.cells().size();
  std::vector<std::optional<OctileCost>> dist(n);
  std::vector<bool> done(n, false);
  dist[g.index(s)] = OctileCost{};
  while (true) {
    std::optional<std::size_t> u;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k] || !dist[k]) continue;
      if (!u || compare(*dist[k], *dist[*u]) < 0) u = k;
    }
    if (!u) break;
    done[*u] = true;
    const GridIndex c{static_cast<int>(*u % g.width()), static_cast<int>(*u / g.width())};
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        const GridIndex m{c.i + di, c.j + dj};
        if (!g.free(m)) continue;
        if (di != 0 && dj != 0 && (!g.free({c.i + di, c.j}) || !g.free({c.i, c.j + dj}))) continue;
        const OctileCost w = di != 0 && dj != 0 ? OctileCost{0, 1} : OctileCost{1, 0};
        auto& d = dist[g.index(m)];
        if (!d || compare(*dist[*u] + w, *d) < 0) d = *dist[*u] + w;
      }
    }
  }
  return dist[g.index(t)];
}

/// Shortest path length in metres; infinity when unreachable.
inline double dijkstra(const OccupancyGrid& g, GridIndex s, GridIndex t) {
  const auto steps = dijkstra_steps(g, s, t);
  return steps ? steps->cells() * g.cellsize() : std::numeric_limits<double>::infinity();
}

/// Non-free after dilation iff some Occupied cell lies within Chebyshev distance r.
inline std::vector<bool> dilated_mask(const OccupancyGrid& g, int r) {
  std::vector<bool> out(g.cells().size(), false);
  for (int j = 0; j < g.height(); ++j) {
    for (int i = 0; i < g.width(); ++i) {
      for (int q = 0; q < g.height() && !out[g.index({i, j})]; ++q) {
        for (int p = 0; p < g.width(); ++p) {
          if (g.at({p, q}) == Cell::kOccupied && std::max(std::abs(p - i), std::abs(q - j)) <= r) {
            out[g.index({i, j})] = true;
            break;
          }
        }
      }
    }
  }
  return out;
}

/// Random grid with the given obstacle density.
inline OccupancyGrid random_grid(std::mt19937_64& rng, int w, int h, double density, double cellsize = 0.4) {
  OccupancyGrid g(cellsize, 0.0, 0.0, w, h);
  std::bernoulli_distribution wall(density);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      if (wall(rng)) g.set({i, j}, Cell::kOccupied);
    }
  }
  return g;
}

}  // namespace oracle

#endif  // FLOORNAV_TESTS_ORACLES_HPP
