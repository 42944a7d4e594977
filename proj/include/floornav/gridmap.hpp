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

#ifndef FLOORNAV_GRIDMAP_HPP
#define FLOORNAV_GRIDMAP_HPP

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "floornav/boundary_map.hpp"
#include "floornav/geometry.hpp"
#include "floornav/text_io.hpp"

namespace floornav {

enum class Cell : unsigned char { kFree, kOccupied, kDilated };

struct GridIndex {
  int i = 0;  // column, along x
  int j = 0;  // row, along y
  constexpr bool operator==(const GridIndex&) const = default;
};

class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(double cellsize, double x_min, double y_min, int width, int height)
      : cellsize_(cellsize), x_min_(x_min), y_min_(y_min), width_(width), height_(height),
        cells_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), Cell::kFree) {
    if (!(cellsize > 0.0)) throw std::invalid_argument("grid: cellsize must be positive");
    if (width <= 0 || height <= 0) throw std::invalid_argument("grid: empty extent");
  }

  /// Smallest grid anchored at the lower-left corner of `bounds` that covers it.
  static OccupancyGrid covering(const Rect& bounds, double cellsize) {
    if (!(cellsize > 0.0)) throw std::invalid_argument("grid: cellsize must be positive");
    const auto cells = [&](double extent) {
      return std::max(1, static_cast<int>(std::ceil(extent / cellsize - 1e-9)));
    };
    return {cellsize, bounds.x_min, bounds.y_min, cells(bounds.x_max - bounds.x_min),
            cells(bounds.y_max - bounds.y_min)};
  }

  double cellsize() const noexcept { return cellsize_; }
  double x_min() const noexcept { return x_min_; }
  double y_min() const noexcept { return y_min_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Rect bounds() const noexcept {
    return {x_min_, y_min_, x_min_ + width_ * cellsize_, y_min_ + height_ * cellsize_};
  }

  bool contains(GridIndex c) const noexcept {
    return c.i >= 0 && c.j >= 0 && c.i < width_ && c.j < height_;
  }
  Cell at(GridIndex c) const { return cells_.at(index(c)); }
  void set(GridIndex c, Cell v) { cells_.at(index(c)) = v; }
  bool free(GridIndex c) const { return contains(c) && at(c) == Cell::kFree; }
  std::size_t index(GridIndex c) const noexcept {
    return static_cast<std::size_t>(c.j) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.i);
  }
  std::size_t count(Cell v) const { return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), v)); }
  const std::vector<Cell>& cells() const noexcept { return cells_; }

  /// Continuous grid coordinates: x_G = (x - x_min) / cellsize.
  Vec2 to_grid_coords(Vec2 p) const noexcept {
    return {(p.x - x_min_) / cellsize_, (p.y - y_min_) / cellsize_};
  }
  GridIndex world_to_grid(Vec2 p) const noexcept {
    const Vec2 g = to_grid_coords(p);
    return {static_cast<int>(std::floor(g.x)), static_cast<int>(std::floor(g.y))};
  }
  Vec2 grid_to_world(GridIndex c) const noexcept {
    return {x_min_ + (c.i + 0.5) * cellsize_, y_min_ + (c.j + 0.5) * cellsize_};
  }

  bool operator==(const OccupancyGrid&) const = default;

 private:
  double cellsize_ = 1.0;
  double x_min_ = 0.0;
  double y_min_ = 0.0;
  int width_ = 0;
  int height_ = 0;
  std::vector<Cell> cells_;
};

/// Calls fn(GridIndex) for every in-grid cell whose closed square touches the segment,
/// corner contacts included. Scans row bands, so each cell is visited once.
template <typename Fn>
void for_each_cell_touching(const OccupancyGrid& grid, const Segment2D& seg, Fn&& fn) {
  const Vec2 p = grid.to_grid_coords(seg.a);
  const Vec2 q = grid.to_grid_coords(seg.b);
  const double v_lo = std::min(p.y, q.y);
  const double v_hi = std::max(p.y, q.y);
  const int row_first = std::max(0, static_cast<int>(std::ceil(v_lo)) - 1);
  const int row_last = std::min(grid.height() - 1, static_cast<int>(std::floor(v_hi)));
  for (int j = row_first; j <= row_last; ++j) {
    double u_lo;
    double u_hi;
    if (p.y == q.y) {
      u_lo = std::min(p.x, q.x);
      u_hi = std::max(p.x, q.x);
    } else {
      const auto u_at = [&](double v) {
        const double t = std::clamp((v - p.y) / (q.y - p.y), 0.0, 1.0);
        return p.x + t * (q.x - p.x);
      };
      const double a = u_at(std::max(v_lo, static_cast<double>(j)));
      const double b = u_at(std::min(v_hi, static_cast<double>(j + 1)));
      u_lo = std::min(a, b);
      u_hi = std::max(a, b);
    }
    const int col_first = std::max(0, static_cast<int>(std::ceil(u_lo)) - 1);
    const int col_last = std::min(grid.width() - 1, static_cast<int>(std::floor(u_hi)));
    for (int i = col_first; i <= col_last; ++i) fn(GridIndex{i, j});
  }
}

inline void rasterize_segment(OccupancyGrid& grid, const Segment2D& seg) {
  for_each_cell_touching(grid, seg, [&](GridIndex c) { grid.set(c, Cell::kOccupied); });
}

inline OccupancyGrid rasterize(const SegmentMap2D& map, double cellsize, const Rect& bounds) {
  auto grid = OccupancyGrid::covering(bounds, cellsize);
  for (std::size_t n = 0; n < map.segments.size(); ++n) {
    const auto& s = map.segments[n];
    if (!bounds.contains(s.a) || !bounds.contains(s.b)) {
      throw std::out_of_range("rasterize: segment " + std::to_string(n) + " (" + text::sig(s.a.x, 6) +
                              ", " + text::sig(s.a.y, 6) + ")-(" + text::sig(s.b.x, 6) + ", " +
                              text::sig(s.b.y, 6) + ") lies outside the grid bounds");
    }
    rasterize_segment(grid, s);
  }
  return grid;
}

/// Keeps only the parts of the map's segments that fall inside `bounds`.
inline SegmentMap2D clip_to_bounds(const SegmentMap2D& map, const Rect& bounds) {
  SegmentMap2D out = map;
  out.segments.clear();
  for (const auto& s : map.segments) {
    if (auto c = clip_segment(s, bounds); c && c->length() > 0.0) out.segments.push_back(*c);
  }
  return out;
}

/// Free cells within Chebyshev distance `radius` of an Occupied cell become Dilated.
inline OccupancyGrid dilate(const OccupancyGrid& grid, int radius) {
  if (radius < 0) throw std::invalid_argument("dilate: radius must be >= 0");
  OccupancyGrid out = grid;
  for (int j = 0; j < grid.height(); ++j) {
    for (int i = 0; i < grid.width(); ++i) {
      if (grid.at({i, j}) != Cell::kOccupied) continue;
      for (int dj = -radius; dj <= radius; ++dj) {
        for (int di = -radius; di <= radius; ++di) {
          const GridIndex n{i + di, j + dj};
          if (out.contains(n) && out.at(n) == Cell::kFree) out.set(n, Cell::kDilated);
        }
      }
    }
  }
  return out;
}

inline char cell_glyph(Cell c) noexcept {
  switch (c) {
    case Cell::kOccupied:
      return '#';
    case Cell::kDilated:
      return '+';
    case Cell::kFree:
      break;
  }
  return '.';
}

/// Header `cellsize x_min y_min width height`, then rows from the top (highest y) down.
inline void write_grid(std::ostream& out, const OccupancyGrid& grid) {
  out << "# grid v1: . free, # occupied, + dilated; first row is the top\n";
  out << text::sig(grid.cellsize()) << ' ' << text::sig(grid.x_min()) << ' ' << text::sig(grid.y_min())
      << ' ' << grid.width() << ' ' << grid.height() << '\n';
  std::string row(static_cast<std::size_t>(grid.width()), '.');
  for (int j = grid.height() - 1; j >= 0; --j) {
    for (int i = 0; i < grid.width(); ++i) row[static_cast<std::size_t>(i)] = cell_glyph(grid.at({i, j}));
    out << row << '\n';
  }
}

/// '#' starts a comment only before the header; raster rows are read verbatim since '#' is a glyph.
inline OccupancyGrid read_grid(std::istream& in) {
  OccupancyGrid grid;
  bool header = false;
  int row = 0;
  int line = 0;
  std::string raw;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (!header) {
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
      const auto tok = text::split(raw);
      if (tok.empty()) continue;
      if (tok.size() != 5) throw ParseError("expected 'cellsize x_min y_min width height'", line);
      try {
        grid = OccupancyGrid(text::parse_double(tok[0], line), text::parse_double(tok[1], line),
                             text::parse_double(tok[2], line), static_cast<int>(text::parse_int(tok[3], line)),
                             static_cast<int>(text::parse_int(tok[4], line)));
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), line);
      }
      header = true;
      continue;
    }
    if (raw.empty()) continue;
    if (row >= grid.height()) throw ParseError("too many raster rows", line);
    if (static_cast<int>(raw.size()) != grid.width()) throw ParseError("raster row has the wrong width", line);
    const int j = grid.height() - 1 - row;
    for (int i = 0; i < grid.width(); ++i) {
      switch (raw[static_cast<std::size_t>(i)]) {
        case '.':
          break;
        case '#':
          grid.set({i, j}, Cell::kOccupied);
          break;
        case '+':
          grid.set({i, j}, Cell::kDilated);
          break;
        default:
          throw ParseError("unknown raster glyph", line);
      }
    }
    ++row;
  }
  if (!header) throw ParseError("empty grid file");
  if (row != grid.height()) throw ParseError("raster has too few rows");
  return grid;
}

}  // namespace floornav

#endif  // FLOORNAV_GRIDMAP_HPP
