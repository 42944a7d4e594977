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

#include <cmath>
#include <random>

#include "floornav/world.hpp"

namespace floornav {
namespace {

WorldModel wall_at_y(double y, double z_lo = 0.0, double z_hi = 2.5) {
  WorldModel w;
  w.walls.push_back({{{-10.0, y}, {10.0, y}}, z_lo, z_hi, "wall"});
  return w;
}

TEST(CastLrfRay, LevelRayHitsTheWallAhead) {
  const auto r = cast_lrf_ray(wall_at_y(3.0), {0, 0, 0.4}, 0.0, 0.0, 90.0, 30.0);
  ASSERT_TRUE(r);
  EXPECT_NEAR(*r, 3.0, 1e-12);
}

TEST(CastLrfRay, PassesUnderARaisedFace) {
  const auto w = wall_at_y(3.0, 1.5, 2.5);
  EXPECT_FALSE(cast_lrf_ray(w, {0, 0, 0.4}, 0.0, 0.0, 90.0, 30.0));
  // pitched up enough to meet the face between its bottom and top
  const auto up = cast_lrf_ray(w, {0, 0, 0.4}, 0.0, 25.0, 90.0, 30.0);
  ASSERT_TRUE(up);
  EXPECT_NEAR(*up * std::cos(deg2rad(25.0)), 3.0, 1e-9);
}

TEST(CastLrfRay, LowestPitchMeetsTheFloor) {
  const auto r = cast_lrf_ray(WorldModel{}, {0, 0, 0.4}, 0.0, -5.0, 90.0, 30.0);
  ASSERT_TRUE(r);
  EXPECT_NEAR(*r, 4.588, 0.01);
  EXPECT_FALSE(cast_lrf_ray(WorldModel{}, {0, 0, 0.4}, 0.0, -5.0, 90.0, 4.0));
}

TEST(CastLrfRay, FrameYawTurnsTheScanPlane) {
  WorldModel w;
  w.walls.push_back({{{2.0, -5.0}, {2.0, 5.0}}, 0.0, 2.5, "east"});
  const auto r = cast_lrf_ray(w, {0, 0, 0.4}, -kPi / 2, 0.0, 90.0, 30.0);
  ASSERT_TRUE(r);
  EXPECT_NEAR(*r, 2.0, 1e-12);
}

TEST(CastSonar, RangeIsMeasuredFromTheSensorFace) {
  const SonarRing ring;
  const auto r = cast_sonar(wall_at_y(3.0), {0, 0, kPi / 2}, ring, 0);
  ASSERT_TRUE(r.valid());
  EXPECT_NEAR(r.range, 3.0 - ring.mount_radius, 1e-12);
  EXPECT_DOUBLE_EQ(r.bearing_deg, 0.0);
}

TEST(CastSonar, ConeSeesAnObstacleOffTheAxis) {
  WorldModel w;
  // a short post 10 deg off the axis, 2 m from the face
  const Vec2 face{0.4, 0.0};
  const Vec2 p = face + unit_from_angle(deg2rad(10.0)) * 2.0;
  w.walls.push_back({{p, p + Vec2{0.0, 0.05}}, 0.0, 2.5, "post"});
  const auto r = cast_sonar(w, {0, 0, 0}, SonarRing{}, 0);
  ASSERT_TRUE(r.valid());
  EXPECT_NEAR(r.range, 2.0, 1e-9);
  // outside the cone
  WorldModel far;
  const Vec2 q = face + unit_from_angle(deg2rad(20.0)) * 2.0;
  far.walls.push_back({{q, q + Vec2{0.0, 0.05}}, 0.0, 2.5, "post"});
  EXPECT_FALSE(cast_sonar(far, {0, 0, 0}, SonarRing{}, 0).valid());
}

TEST(CastSonar, StatusCoversTooCloseAndNoEcho) {
  const SonarRing ring;
  EXPECT_EQ(cast_sonar(wall_at_y(0.55), {0, 0, kPi / 2}, ring, 0).status, SonarReading::Status::kTooClose);
  EXPECT_EQ(cast_sonar(wall_at_y(5.0), {0, 0, kPi / 2}, ring, 0).status, SonarReading::Status::kNoEcho);
  EXPECT_EQ(cast_sonar(WorldModel{}, {0, 0, 0}, ring, 3).status, SonarReading::Status::kNoEcho);
}

TEST(CastSonar, IgnoresFacesAboveOrBelowTheMountHeight) {
  const SonarRing ring;
  EXPECT_FALSE(cast_sonar(wall_at_y(2.0, 1.0, 2.5), {0, 0, kPi / 2}, ring, 0).valid());
  EXPECT_TRUE(cast_sonar(wall_at_y(2.0, 0.0, 0.5), {0, 0, kPi / 2}, ring, 0).valid());
}

TEST(CastSonar, RingReportsEverySensorInOrder) {
  WorldModel box;
  box.walls.push_back({{{-2, -2}, {2, -2}}, 0.0, 2.5, ""});
  box.walls.push_back({{{2, -2}, {2, 2}}, 0.0, 2.5, ""});
  box.walls.push_back({{{2, 2}, {-2, 2}}, 0.0, 2.5, ""});
  box.walls.push_back({{{-2, 2}, {-2, -2}}, 0.0, 2.5, ""});
  const SonarRing ring;
  const auto all = scan_sonar_ring(box, {0, 0, 0.3}, ring);
  ASSERT_EQ(all.size(), 8u);
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_DOUBLE_EQ(all[i].bearing_deg, ring.bearings_deg[i]);
    ASSERT_TRUE(all[i].valid());
    EXPECT_LE(all[i].range, 2.0 * std::sqrt(2.0) - ring.mount_radius + 1e-9);
    EXPECT_GE(all[i].range, 2.0 - ring.mount_radius - 1e-9);
  }
}

TEST(CastRay, NeverReportsAHitBeyondTheFirstFace) {
  // two parallel faces; any ray that reaches the far one must have crossed the near one
  WorldModel w = wall_at_y(2.0, 0.0, 3.0);
  w.walls.push_back({{{-10.0, 4.0}, {10.0, 4.0}}, 0.0, 3.0, "far"});
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> scan(30.0, 150.0), pitch(-4.0, 30.0);
  for (int n = 0; n < 2000; ++n) {
    const double b = scan(rng), a = pitch(rng);
    const auto r = cast_lrf_ray(w, {0, 0, 0.4}, 0.0, a, b, 30.0);
    if (!r) continue;
    const double y = *r * std::cos(deg2rad(a)) * std::sin(deg2rad(b));
    EXPECT_LE(y, 2.0 + 1e-9);
  }
}

}  // namespace
}  // namespace floornav
