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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "floornav/boundary_map.hpp"
#include "oracles.hpp"

namespace floornav {
namespace {

/// Point on ray `k` at horizontal range `r` and world height `z`.
CloudPoint lifted(const SweepConfig& cfg, int k, double r, double z) {
  CloudPoint p;
  p.ray = k;
  p.scan_deg = cfg.scan_at(k);
  p.pitch_deg = rad2deg(std::atan2(z - cfg.mount_height, r));
  p.range = std::hypot(r, z - cfg.mount_height);
  p.sensor = polar_to_cartesian(p.pitch_deg, p.scan_deg, p.range);
  return p;
}

constexpr int kAhead = 50;  // scan angle 90 deg on the default lattice

void expect_same_pixels(const std::vector<PolarPixel2D>& got, const std::vector<PolarPixel2D>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].ray, want[i].ray);
    EXPECT_DOUBLE_EQ(got[i].scan_deg, want[i].scan_deg);
    EXPECT_NEAR(got[i].range, want[i].range, 1e-12 * want[i].range);
  }
}

TEST(Compress, MinimumOfTwoReturns) {
  Cloud3D c;
  c.points = {lifted(c.config, kAhead, 3.0, 0.5), lifted(c.config, kAhead, 2.0, 1.0)};
  const auto px = compress(c, 1.2);
  ASSERT_EQ(px.size(), 1u);
  EXPECT_DOUBLE_EQ(px[0].scan_deg, 90.0);
  EXPECT_NEAR(px[0].range, 2.0, 1e-12);
}

TEST(Compress, GirderAboveTheLimitIsInvisible) {
  Cloud3D c;
  c.points = {lifted(c.config, kAhead, 2.0, 1.5), lifted(c.config, kAhead, 3.0, 0.5)};
  const auto px = compress(c, 1.2);
  ASSERT_EQ(px.size(), 1u);
  EXPECT_DOUBLE_EQ(px[0].scan_deg, 90.0);
  EXPECT_NEAR(px[0].range, 3.0, 1e-12);
}

TEST(Compress, MinBeforeFilterLetsTheGirderShadowTheOpening) {
  Cloud3D c;
  c.points = {lifted(c.config, kAhead, 2.0, 1.5), lifted(c.config, kAhead, 3.0, 0.5)};
  CompressOptions opt;
  opt.filter_before_min = false;
  EXPECT_TRUE(compress(c, 1.2, opt).empty());
}

TEST(Compress, FloorReturnsAreRemoved) {
  Cloud3D c;
  c.points = {lifted(c.config, kAhead, 4.588, 0.0), lifted(c.config, kAhead + 1, 4.0, 0.01)};
  EXPECT_TRUE(compress(c, 1.2).empty());
}

TEST(Compress, RejectsNonPositiveLimit) { EXPECT_THROW(compress(Cloud3D{}, 0.0), std::invalid_argument); }

TEST(Compress, EmptyCloudIsLegal) { EXPECT_TRUE(compress(Cloud3D{}, 1.2).empty()); }

TEST(Compress, MatchesBruteForceOracleOnRandomClouds) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto cloud = oracle::random_cloud(rng, 1000);
    for (double z_limit : {0.3, 1.2, 2.5}) {
      expect_same_pixels(compress(cloud, z_limit), oracle::compress(cloud, z_limit));
    }
  }
}

TEST(Compress, MonovalentSortedAndDominant) {
  std::mt19937_64 rng(7);
  const auto cloud = oracle::random_cloud(rng, 3000);
  const double z_limit = 1.2;
  const auto px = compress(cloud, z_limit);
  for (std::size_t i = 1; i < px.size(); ++i) EXPECT_LT(px[i - 1].ray, px[i].ray);
  for (const auto& p : px) {
    for (const auto& q : cloud.points) {
      if (q.ray != p.ray) continue;
      const double z = q.sensor.z + cloud.config.mount_height;
      if (z > z_limit || z <= 0.02) continue;
      EXPECT_GE(std::hypot(q.sensor.x, q.sensor.y), p.range);
    }
  }
}

TEST(Compress, NearerWallOccludesFartherOne) {
  WorldModel near_w, both;
  const WallFace near{{{-1.0, 2.0}, {1.0, 2.0}}, 0.0, 3.0, "near"};
  const WallFace far{{{-6.0, 5.0}, {6.0, 5.0}}, 0.0, 3.0, "far"};
  near_w.walls = {near};
  both.walls = {near, far};
  const Pose pose{0, 0, kPi / 2};
  const auto a = compress(sweep(near_w, pose, {}), 1.2);
  const auto ab = compress(sweep(both, pose, {}), 1.2);
  int covered = 0;
  for (const auto& p : a) {
    const auto it = std::find_if(ab.begin(), ab.end(), [&](const PolarPixel2D& q) { return q.ray == p.ray; });
    ASSERT_NE(it, ab.end());
    EXPECT_NEAR(it->range, p.range, 1e-12);
    ++covered;
  }
  EXPECT_GT(covered, 40);
}

TEST(Compress, IdempotentWhenLiftedBackAtAnyAdmissibleHeight) {
  std::mt19937_64 rng(99);
  const auto cloud = oracle::random_cloud(rng, 2000);
  const auto once = compress(cloud, 1.2);
  for (double z : {0.1, 0.4, 1.1}) {
    Cloud3D lifted_cloud;
    for (const auto& p : once) lifted_cloud.points.push_back(lifted(lifted_cloud.config, p.ray, p.range, z));
    expect_same_pixels(compress(lifted_cloud, 1.2), once);
  }
}

// Pixels seen by a scanner at the origin facing +y; the scanner frame then equals the world frame.
PolarPixel2D pixel_at(const SweepConfig& cfg, int k, Vec2 world) {
  (void)cfg;
  return {k, cfg.scan_at(k), norm(world)};
}

std::vector<PolarPixel2D> pixels_on_line_y(double y, int k_lo, int k_hi) {
  const SweepConfig cfg;
  std::vector<PolarPixel2D> px;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double b = deg2rad(cfg.scan_at(k));
    px.push_back(pixel_at(cfg, k, {y / std::tan(b), y}));
  }
  return px;
}

const Pose kFacingY{0, 0, kPi / 2};

TEST(Segment, CollinearPixelsGiveOneSegment) {
  const auto px = pixels_on_line_y(3.0, 40, 49);  // scan 80..89 deg
  const auto map = segment(px, kFacingY, 1.0);
  ASSERT_EQ(map.segments.size(), 1u);
  const auto& s = map.segments[0];
  const double b0 = deg2rad(80.0), b1 = deg2rad(89.0);
  EXPECT_NEAR(s.a.x, 3.0 / std::tan(b0), 1e-9);
  EXPECT_NEAR(s.b.x, 3.0 / std::tan(b1), 1e-9);
  EXPECT_NEAR(s.a.y, 3.0, 1e-9);
  EXPECT_NEAR(s.b.y, 3.0, 1e-9);
}

TEST(Segment, RightAngleCornerSplitsNearTheCorner) {
  // wall x = 2 for y in [0.5, 2], then wall y = 2 for x in [2, -1]
  WorldModel w;
  w.walls = {{{{2.0, 0.0}, {2.0, 2.0}}, 0.0, 3.0, "side"}, {{{2.0, 2.0}, {-3.0, 2.0}}, 0.0, 3.0, "front"}};
  const auto cloud = sweep(w, kFacingY, {});
  const auto map = segment(compress(cloud, 1.2), kFacingY, 1.0);
  ASSERT_EQ(map.segments.size(), 2u);
  const Vec2 corner{2.0, 2.0};
  const double gap = std::min({distance(map.segments[0].b, corner), distance(map.segments[1].a, corner),
                               distance(map.segments[0].a, corner), distance(map.segments[1].b, corner)});
  EXPECT_LT(gap, 0.1);
}

TEST(Segment, DoorwayGapIsNeverBridged) {
  WorldModel w;
  w.walls = {{{{-6.0, 3.0}, {-0.8, 3.0}}, 0.0, 3.0, "left"}, {{{0.8, 3.0}, {6.0, 3.0}}, 0.0, 3.0, "right"}};
  const auto map = segment(compress(sweep(w, kFacingY, {}), 1.2), kFacingY, 1.0);
  ASSERT_GE(map.segments.size(), 2u);
  for (const auto& s : map.segments) {
    const double lo = std::min(s.a.x, s.b.x), hi = std::max(s.a.x, s.b.x);
    EXPECT_FALSE(lo < -0.7 && hi > 0.7) << "segment spans the doorway";
  }
}

TEST(Segment, SingletonClustersAreDropped) {
  const SweepConfig cfg;
  std::vector<PolarPixel2D> px{pixel_at(cfg, 10, {-2.0, 2.0}), pixel_at(cfg, 50, {0.0, 5.0})};
  EXPECT_TRUE(segment(px, kFacingY, 1.0).segments.empty());
}

TEST(Segment, RejectsUnsortedPixels) {
  auto px = pixels_on_line_y(3.0, 40, 45);
  std::swap(px[0], px[1]);
  EXPECT_THROW(segment(px, kFacingY, 1.0), std::invalid_argument);
}

TEST(Segment, EveryClusteredPixelLiesOnItsSegment) {
  WorldModel w;
  w.walls = {{{{-5.0, 6.0}, {5.0, 6.0}}, 0.0, 3.0, "back"},
             {{{-1.0, 2.0}, {0.5, 3.5}}, 0.0, 3.0, "slant"},
             {{{1.5, 2.5}, {3.0, 2.5}}, 0.0, 3.0, "box"},
             {{{3.0, 2.5}, {3.0, 4.0}}, 0.0, 3.0, "box"}};
  const Pose pose{0.2, -0.1, kPi / 2 + 0.1};
  const auto cloud = sweep(w, pose, {});
  const auto px = compress(cloud, 1.2);
  const SegmentOptions opt;
  const auto map = segment(px, pose, cloud.config.scan_step, opt);
  ASSERT_FALSE(map.segments.empty());
  const Pose frame = scanner_frame(pose);
  for (const auto& p : px) {
    const double b = deg2rad(p.scan_deg) + frame.theta;
    const Vec2 q{frame.x + p.range * std::cos(b), frame.y + p.range * std::sin(b)};
    double best = INFINITY;
    for (const auto& s : map.segments) best = std::min(best, point_segment_distance(q, s));
    EXPECT_LE(best, opt.fit_epsilon + 1e-9);
  }
  for (const auto& s : map.segments) EXPECT_GT(s.length(), 0.0);
}

TEST(BoundaryMap, HighGirderLeavesTheGateOpen) {
  WorldModel w;
  w.walls = {{{{-4.0, 3.0}, {-1.0, 3.0}}, 0.0, 3.0, "l"},
             {{{1.0, 3.0}, {4.0, 3.0}}, 0.0, 3.0, "r"},
             {{{-1.0, 3.0}, {1.0, 3.0}}, 1.35, 3.0, "girder"}};  // the top frames just reach it
  const auto cloud = sweep(w, kFacingY, {});
  const auto open = build_boundary_map(cloud, 1.2);
  for (const auto& s : open.segments) EXPECT_FALSE(std::min(s.a.x, s.b.x) < -0.5 && std::max(s.a.x, s.b.x) > 0.5);
  const auto shut = build_boundary_map(cloud, 1.6);
  bool spans = false;
  for (const auto& s : shut.segments) spans |= std::min(s.a.x, s.b.x) < -0.5 && std::max(s.a.x, s.b.x) > 0.5;
  EXPECT_TRUE(spans);
}

TEST(SegmentMapIo, RoundTripAndComments) {
  SegmentMap2D m;
  m.segments = {{{0.0, 1.0}, {2.5, 1.0}}, {{-1.25, 3.5}, {4.0, -2.0}}};
  m.z_limit = 1.2;
  std::stringstream s;
  write_segment_map(s, m);
  std::istringstream in("# leading comment\n" + s.str());
  const auto back = read_segment_map(in);
  ASSERT_EQ(back.segments.size(), 2u);
  EXPECT_EQ(back.segments[1], m.segments[1]);
  std::istringstream bad("1 2 3\n");
  EXPECT_THROW(read_segment_map(bad), ParseError);
}

}  // namespace
}  // namespace floornav
