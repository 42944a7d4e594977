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

#ifndef FLOORNAV_TRACKING_CONTROL_HPP
#define FLOORNAV_TRACKING_CONTROL_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "floornav/angles.hpp"
#include "floornav/geometry.hpp"
#include "floornav/planner.hpp"

namespace floornav {

/// Differential-drive geometry. `half_axle` is half the wheel separation.
struct RobotParams {
  double wheel_radius = 0.1;
  double half_axle = 0.25;
  double body_diameter = 0.8;
  double body_height = 1.2;

  double body_radius() const noexcept { return body_diameter / 2.0; }

  void validate() const {
    if (!(wheel_radius > 0.0) || !(half_axle > 0.0) || !(body_diameter > 0.0) || !(body_height > 0.0)) {
      throw std::invalid_argument("robot parameters must be positive");
    }
  }
};

/// Wheel angular rates (rad/s).
struct WheelSpeeds {
  double right = 0.0;
  double left = 0.0;
};

inline WheelSpeeds wheel_speeds(double v, double omega, const RobotParams& p) noexcept {
  return {(v + p.half_axle * omega) / p.wheel_radius, (v - p.half_axle * omega) / p.wheel_radius};
}

/// Reference-minus-actual pose expressed in the robot frame; e3 wrapped to (-pi, pi].
struct TrackingError {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;

  double norm() const noexcept { return std::sqrt(e1 * e1 + e2 * e2 + e3 * e3); }
};

inline TrackingError tracking_error(const Pose& ref, const Pose& q) noexcept {
  const double c = std::cos(q.theta);
  const double s = std::sin(q.theta);
  const double dx = ref.x - q.x;
  const double dy = ref.y - q.y;
  return {c * dx + s * dy, -s * dx + c * dy, wrap_pi(ref.theta - q.theta)};
}

struct Gains {
  double k1 = 1.0;
  double k3 = 0.4;

  void validate() const {
    if (!(k1 > 0.0) || !(k3 > 0.0)) throw std::invalid_argument("gains k1, k3 must be positive");
  }
};

struct Command {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s
};

/// sin(x)/x with the removable singularity filled in.
inline double sinc(double x) noexcept {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

/// v = v_r cos e3 + k1 e1;  w = w_r + k3 e3 + v_r e2 sin(e3)/e3.
inline Command control(const TrackingError& e, double v_ref, double omega_ref, const Gains& k) noexcept {
  return {v_ref * std::cos(e.e3) + k.k1 * e.e1, omega_ref + k.k3 * e.e3 + v_ref * e.e2 * sinc(e.e3)};
}

inline double lyapunov(const TrackingError& e) noexcept {
  return 0.5 * (e.e1 * e.e1 + e.e2 * e.e2 + e.e3 * e.e3);
}

/// Closed-form dV/dt under the control law.
inline double lyapunov_rate(const TrackingError& e, const Gains& k) noexcept {
  return -k.k1 * e.e1 * e.e1 - k.k3 * e.e3 * e.e3;
}

/// Tracking-error dynamics for an arbitrary command (v, w).
inline TrackingError error_rates(const TrackingError& e, const Command& u, double v_ref,
                                 double omega_ref) noexcept {
  return {u.omega * e.e2 - u.v + v_ref * std::cos(e.e3), -u.omega * e.e1 + v_ref * std::sin(e.e3),
          omega_ref - u.omega};
}

struct ActuationLimits {
  double v_max = 0.5;
  double omega_max = deg2rad(25.0);
  bool enabled = true;
};

inline Command saturate(Command u, const ActuationLimits& lim) noexcept {
  if (!lim.enabled) return u;
  return {std::clamp(u.v, -lim.v_max, lim.v_max), std::clamp(u.omega, -lim.omega_max, lim.omega_max)};
}

using ReferenceFn = std::function<RefState(double)>;

struct LoopState {
  double t = 0.0;
  Pose pose;
};

inline Pose unicycle_rate(const Pose& q, const Command& u) noexcept {
  return {u.v * std::cos(q.theta), u.v * std::sin(q.theta), u.omega};
}

inline Pose advance(const Pose& q, const Pose& rate, double h) noexcept {
  return {q.x + h * rate.x, q.y + h * rate.y, q.theta + h * rate.theta};
}

/// Tracking command at the given state, after saturation.
inline Command tracking_command(const LoopState& s, const ReferenceFn& ref, const Gains& k,
                                const ActuationLimits& lim) {
  const RefState r = ref(s.t);
  return saturate(control(tracking_error(r.pose(), s.pose), r.v, r.omega, k), lim);
}

/// One RK4 step of the closed loop; the control law is re-evaluated at every stage.
inline LoopState closed_loop_step(const LoopState& s, const ReferenceFn& ref, double dt, const Gains& k,
                                  const ActuationLimits& lim = {}) {
  if (!(dt > 0.0)) throw std::invalid_argument("closed_loop_step: dt must be positive");
  const auto f = [&](double t, const Pose& q) { return unicycle_rate(q, tracking_command({t, q}, ref, k, lim)); };
  const Pose k1 = f(s.t, s.pose);
  const Pose k2 = f(s.t + dt / 2, advance(s.pose, k1, dt / 2));
  const Pose k3 = f(s.t + dt / 2, advance(s.pose, k2, dt / 2));
  const Pose k4 = f(s.t + dt, advance(s.pose, k3, dt));
  Pose next{s.pose.x + dt / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
            s.pose.y + dt / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
            wrap_pi(s.pose.theta + dt / 6 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta))};
  return {s.t + dt, next};
}

/// RK4 step of the unicycle under a command held constant over the step.
inline Pose unicycle_step(const Pose& q, const Command& u, double dt) noexcept {
  const Pose k1 = unicycle_rate(q, u);
  const Pose k2 = unicycle_rate(advance(q, k1, dt / 2), u);
  const Pose k3 = unicycle_rate(advance(q, k2, dt / 2), u);
  const Pose k4 = unicycle_rate(advance(q, k3, dt), u);
  return {q.x + dt / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x), q.y + dt / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
          wrap_pi(q.theta + dt / 6 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta))};
}

/// Constant-speed, constant-turn-rate reference from `start` (a line when omega is 0).
inline ReferenceFn arc_reference(const Pose& start, double v, double omega) {
  return [=](double t) {
    TrajectoryPiece p;
    p.start = start.position();
    p.heading = start.theta;
    p.speed = v;
    p.curvature = omega / v;
    p.length = v * t;
    RefState r = p.at_distance(v * t);
    r.t = t;
    return r;
  };
}

}  // namespace floornav

#endif  // FLOORNAV_TRACKING_CONTROL_HPP
