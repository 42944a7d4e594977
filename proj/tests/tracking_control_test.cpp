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

#include "floornav/tracking_control.hpp"

namespace floornav {
namespace {

/// Robot pose whose tracking error against `ref` is exactly `e`.
Pose pose_with_error(const Pose& ref, const TrackingError& e) {
  const double th = ref.theta - e.e3;
  const double c = std::cos(th), s = std::sin(th);
  return {ref.x - (c * e.e1 - s * e.e2), ref.y - (s * e.e1 + c * e.e2), th};
}

TEST(WheelSpeeds, Examples) {
  const RobotParams p;
  auto w = wheel_speeds(1.0, 0.0, p);
  EXPECT_DOUBLE_EQ(w.right, 10.0);
  EXPECT_DOUBLE_EQ(w.left, 10.0);
  w = wheel_speeds(0.0, 1.0, p);
  EXPECT_DOUBLE_EQ(w.right, 2.5);
  EXPECT_DOUBLE_EQ(w.left, -2.5);
  w = wheel_speeds(0.3, 0.5, p);
  EXPECT_NEAR(w.right, 4.25, 1e-12);
  EXPECT_NEAR(w.left, 1.75, 1e-12);
}

TEST(RobotParams, RejectsNonPositive) {
  RobotParams p;
  p.wheel_radius = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_THROW((Gains{1.0, 0.0}).validate(), std::invalid_argument);
}

TEST(TrackingError, Examples) {
  auto e = tracking_error({1, 2, 0.3}, {1, 2, 0.3});
  EXPECT_DOUBLE_EQ(e.e1, 0.0);
  EXPECT_DOUBLE_EQ(e.e2, 0.0);
  EXPECT_DOUBLE_EQ(e.e3, 0.0);
  e = tracking_error({1, 2, 0.3}, {0, 0, 0});
  EXPECT_DOUBLE_EQ(e.e1, 1.0);
  EXPECT_DOUBLE_EQ(e.e2, 2.0);
  EXPECT_DOUBLE_EQ(e.e3, 0.3);
  e = tracking_error({1, 0, kPi / 2}, {0, 0, kPi / 2});
  EXPECT_NEAR(e.e1, 0.0, 1e-15);
  EXPECT_NEAR(e.e2, -1.0, 1e-15);
  EXPECT_NEAR(e.e3, 0.0, 1e-15);
}

TEST(TrackingError, InvariantUnderFullTurns) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 0; n < 500; ++n) {
    const Pose r{u(rng), u(rng), u(rng)}, q{u(rng), u(rng), u(rng)};
    const auto a = tracking_error(r, q);
    for (const auto& [rr, qq] : {std::pair{Pose{r.x, r.y, r.theta + 2 * kPi}, q},
                                 std::pair{r, Pose{q.x, q.y, q.theta - 2 * kPi}}}) {
      const auto b = tracking_error(rr, qq);
      EXPECT_NEAR(a.e1, b.e1, 1e-12);
      EXPECT_NEAR(a.e2, b.e2, 1e-12);
      EXPECT_NEAR(a.e3, b.e3, 1e-12);
    }
    EXPECT_GT(a.e3, -kPi);
    EXPECT_LE(a.e3, kPi);
  }
}

TEST(ControlLaw, Examples) {
  const Gains k{1.0, 2.0};
  auto u = control({0, 0, 0}, 0.3, 0.1, k);
  EXPECT_DOUBLE_EQ(u.v, 0.3);
  EXPECT_DOUBLE_EQ(u.omega, 0.1);
  u = control({0.1, 0, 0}, 0.3, 0.0, k);
  EXPECT_NEAR(u.v, 0.4, 1e-15);
  EXPECT_DOUBLE_EQ(u.omega, 0.0);
  u = control({0, 1.0, 1e-12}, 0.3, 0.0, Gains{1.0, 1e-9});
  EXPECT_TRUE(std::isfinite(u.omega));
  EXPECT_NEAR(u.omega, 0.3, 1e-12);
}

TEST(ControlLaw, SincIsExactAcrossTheSeriesSwitch) {
  EXPECT_DOUBLE_EQ(sinc(0.0), 1.0);
  for (double x : {1e-8, 9.9e-5, 1.01e-4, 0.3, -2.0}) EXPECT_NEAR(sinc(x), std::sin(x) / x, 1e-15);
}

TEST(Lyapunov, Examples) {
  EXPECT_DOUBLE_EQ(lyapunov({0, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(lyapunov({1, 1, 1}), 1.5);
  EXPECT_NEAR(lyapunov({0.3, -0.4, 0.0}), 0.125, 1e-15);
}

TEST(Lyapunov, RateIdentityOnRandomErrors) {
  // dV/dt = e . de/dt with the control law plugged into the error dynamics
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Gains k{1.0, 0.4};
  for (int n = 0; n < 1000; ++n) {
    const TrackingError e{u(rng), u(rng), 3 * u(rng)};
    const double vr = 0.1 + std::abs(u(rng)), wr = u(rng);
    const auto de = error_rates(e, control(e, vr, wr, k), vr, wr);
    EXPECT_NEAR(e.e1 * de.e1 + e.e2 * de.e2 + e.e3 * de.e3, lyapunov_rate(e, k), 1e-12);
  }
}

struct Run {
  std::vector<double> t, V, Vdot;
  std::vector<TrackingError> e;
};

Run closed_loop(const ReferenceFn& ref, const TrackingError& e0, double dt, double horizon, const Gains& k,
                const ActuationLimits& lim) {
  Run run;
  LoopState s{0.0, pose_with_error(ref(0.0).pose(), e0)};
  const auto steps = static_cast<int>(std::lround(horizon / dt));
  for (int n = 0; n <= steps; ++n) {
    const auto e = tracking_error(ref(s.t).pose(), s.pose);
    run.t.push_back(s.t);
    run.e.push_back(e);
    run.V.push_back(lyapunov(e));
    run.Vdot.push_back(lyapunov_rate(e, k));
    s = closed_loop_step(s, ref, dt, k, lim);
    s.t = (n + 1) * dt;
  }
  return run;
}

double central_difference_error(double dt, const Gains& k) {
  const auto ref = arc_reference({0, 0, 0.2}, 0.3, 0.1);
  ActuationLimits off;
  off.enabled = false;
  const auto run = closed_loop(ref, {0.3, -0.2, 0.3}, dt, 4.0, k, off);
  const auto at = static_cast<std::size_t>(std::lround(2.0 / dt));
  const double fd = (run.V[at + 1] - run.V[at - 1]) / (2 * dt);
  return std::abs(fd - run.Vdot[at]);
}

TEST(ClosedLoop, LyapunovDerivativeShrinksFourfoldWhenStepHalves) {
  for (const Gains k : {Gains{1.0, 0.4}, Gains{1.0, 2.0}}) {
    const double e1 = central_difference_error(0.1, k);
    const double e2 = central_difference_error(0.05, k);
    const double e3 = central_difference_error(0.025, k);
    EXPECT_LT(e1, 1e-3);
    EXPECT_NEAR(e1 / e2, 4.0, 0.5);
    EXPECT_NEAR(e2 / e3, 4.0, 0.5);
  }
}

TEST(ClosedLoop, ErrorDerivativeMatchesErrorDynamics) {
  const auto ref = arc_reference({1, -1, 0.5}, 0.25, -0.15);
  const Gains k{1.0, 0.4};
  ActuationLimits off;
  off.enabled = false;
  const double dt = 0.01;
  const auto run = closed_loop(ref, {-0.2, 0.4, -0.4}, dt, 3.0, k, off);
  for (std::size_t n = 1; n + 1 < run.e.size(); n += 25) {
    const auto r = ref(run.t[n]);
    const auto& e = run.e[n];
    const auto de = error_rates(e, control(e, r.v, r.omega, k), r.v, r.omega);
    EXPECT_NEAR((run.e[n + 1].e1 - run.e[n - 1].e1) / (2 * dt), de.e1, 1e-3);
    EXPECT_NEAR((run.e[n + 1].e2 - run.e[n - 1].e2) / (2 * dt), de.e2, 1e-3);
    EXPECT_NEAR((run.e[n + 1].e3 - run.e[n - 1].e3) / (2 * dt), de.e3, 1e-3);
  }
}

TEST(ClosedLoop, ConvergesAndNeverIncreasesV) {
  const Gains k;
  const ActuationLimits lim;
  for (double v : {0.2, 0.4}) {
    for (double w : {0.0, 0.15}) {
      for (const TrackingError e0 : {TrackingError{0.5, 0.5, deg2rad(30.0)}, TrackingError{-0.5, 0.5, -deg2rad(30.0)},
                                     TrackingError{0.5, -0.5, -deg2rad(30.0)}}) {
        const auto run = closed_loop(arc_reference({0, 0, 0}, v, w), e0, 0.05, 60.0, k, lim);
        for (std::size_t n = 1; n < run.V.size(); ++n) ASSERT_LE(run.V[n], run.V[n - 1] + 1e-6) << "t=" << run.t[n];
        EXPECT_LT(run.e.back().norm(), 0.01) << "v=" << v << " w=" << w;
      }
    }
  }
}

TEST(ClosedLoop, StepRejectsNonPositiveDt) {
  const auto ref = arc_reference({0, 0, 0}, 0.3, 0.0);
  EXPECT_THROW(closed_loop_step({0.0, {}}, ref, 0.0, Gains{}), std::invalid_argument);
}

TEST(Saturation, ClampsBothChannels) {
  const ActuationLimits lim;
  const auto u = saturate({2.0, -3.0}, lim);
  EXPECT_DOUBLE_EQ(u.v, 0.5);
  EXPECT_DOUBLE_EQ(u.omega, -deg2rad(25.0));
  ActuationLimits off;
  off.enabled = false;
  EXPECT_DOUBLE_EQ(saturate({2.0, -3.0}, off).v, 2.0);
}

TEST(Unicycle, AccurateOnStraightAndArc) {
  const Pose p = unicycle_step({0, 0, 0}, {0.5, 0.0}, 2.0);
  EXPECT_NEAR(p.x, 1.0, 1e-12);
  Pose q{0, 0, 0};
  for (int n = 0; n < 100; ++n) q = unicycle_step(q, {0.5, 0.5}, 2 * kPi / 100);  // half circle, radius 1
  EXPECT_NEAR(q.x, 0.0, 1e-6);
  EXPECT_NEAR(q.y, 2.0, 1e-6);
}

}  // namespace
}  // namespace floornav
