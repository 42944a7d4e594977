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

#ifndef FLOORNAV_VFH_HPP
#define FLOORNAV_VFH_HPP

// Sonar-driven local obstacle avoidance: a net chart rebuilt every cycle from the sonar ring,
// a polar obstacle-density histogram, slot (valley) selection restricted to +-100 deg of the
// heading, and proportional steering / distance-scheduled speed laws.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "floornav/angles.hpp"
#include "floornav/geometry.hpp"
#include "floornav/text_io.hpp"
#include "floornav/world.hpp"

namespace floornav {

class NetChart;

/// Writes the evidence for one echo at `hit` along a beam of direction `axis` (rad).
using EchoPattern = std::function<void(NetChart&, Vec2 hit, double axis)>;

struct NetChartConfig {
  double cellsize = 0.1;
  double min_range = 0.3;
  double max_range = 4.0;
  /// Distance from the robot center to the sonar faces; ranges are measured from there.
  double mount_radius = 0.0;
};

/// Square, world-aligned evidence grid centered on the robot. Cells hold 0, 2 or 3.
class NetChart {
 public:
  explicit NetChart(const NetChartConfig& cfg = {}, Vec2 center = {})
      : cfg_(cfg),
        half_(static_cast<int>(std::ceil((cfg.mount_radius + cfg.max_range) / cfg.cellsize)) + 1),
        center_(center),
        cells_(static_cast<std::size_t>((2 * half_ + 1) * (2 * half_ + 1)), 0) {}

  const NetChartConfig& config() const noexcept { return cfg_; }
  Vec2 center() const noexcept { return center_; }
  /// Cells span offsets -half()..half() in both axes.
  int half() const noexcept { return half_; }

  bool contains(int di, int dj) const noexcept { return std::abs(di) <= half_ && std::abs(dj) <= half_; }
  std::uint8_t value(int di, int dj) const { return cells_.at(index(di, dj)); }

  /// Raises the cell containing `p` to `v`; points off the chart are ignored.
  void raise(Vec2 p, std::uint8_t v) {
    const int di = static_cast<int>(std::lround((p.x - center_.x) / cfg_.cellsize));
    const int dj = static_cast<int>(std::lround((p.y - center_.y) / cfg_.cellsize));
    if (!contains(di, dj)) return;
    auto& c = cells_[index(di, dj)];
    c = std::max(c, v);
  }

  Vec2 cell_offset(int di, int dj) const noexcept { return {di * cfg_.cellsize, dj * cfg_.cellsize}; }

  std::size_t nonzero() const {
    return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](auto v) { return v != 0; }));
  }

  template <typename Fn>
  void for_each_nonzero(Fn&& fn) const {
    for (int dj = -half_; dj <= half_; ++dj) {
      for (int di = -half_; di <= half_; ++di) {
        if (const auto v = value(di, dj); v != 0) fn(di, dj, v);
      }
    }
  }

 private:
  std::size_t index(int di, int dj) const noexcept {
    return static_cast<std::size_t>((dj + half_) * (2 * half_ + 1) + (di + half_));
  }

  NetChartConfig cfg_;
  int half_;
  Vec2 center_;
  std::vector<std::uint8_t> cells_;
};

/// 3 at the echo on the beam axis, 2 on the two cells beside it across the beam.
inline void axis_with_flanks(NetChart& chart, Vec2 hit, double axis) {
  const Vec2 across = unit_from_angle(axis + kPi / 2.0) * chart.config().cellsize;
  chart.raise(hit + across, 2);
  chart.raise(hit - across, 2);
  chart.raise(hit, 3);
}

/// Rebuilds the chart around `pose` from one set of sonar readings (bearings relative to the
/// heading). Readings outside [min_range, max_range] carry no evidence.
inline NetChart update_netchart(const NetChart& previous, const std::vector<SonarReading>& readings,
                                const Pose& pose, const EchoPattern& pattern = axis_with_flanks) {
  NetChart chart(previous.config(), pose.position());
  const auto& cfg = chart.config();
  for (const auto& r : readings) {
    if (!r.valid() || r.range < cfg.min_range || r.range > cfg.max_range) continue;
    const double axis = pose.theta + deg2rad(r.bearing_deg);
    const Vec2 hit = pose.position() + unit_from_angle(axis) * (cfg.mount_radius + r.range);
    pattern(chart, hit, axis);
  }
  return chart;
}

struct HistogramConfig {
  double sector_width_deg = 5.0;
  int smoothing = 2;
  /// Weights a - b d fall linearly from 1 at d_near to 0 at d_far (d from the sensor faces).
  double d_near = 0.3;
  double d_far = 4.0;

  double b() const noexcept { return 1.0 / (d_far - d_near); }
  double a() const noexcept { return d_far * b(); }
  int sectors() const noexcept { return static_cast<int>(std::lround(360.0 / sector_width_deg)); }
  /// Density of one value-2 cell at 1.5 m.
  double default_threshold() const noexcept { return 4.0 * (a() - b() * 1.5); }
};

struct PolarHistogram {
  double sector_width_deg = 5.0;
  std::vector<double> raw;
  std::vector<double> smoothed;

  int sectors() const noexcept { return static_cast<int>(std::lround(360.0 / sector_width_deg)); }
  int sector_of(double bearing_deg) const noexcept {
    return std::min(sectors() - 1, static_cast<int>(std::floor(wrap_360(bearing_deg) / sector_width_deg)));
  }
};

/// Each evidence cell adds c^2 (a - b d) to the sector holding its bearing; the profile is
/// then smoothed with triangular weights over +-smoothing sectors.
inline PolarHistogram build_histogram(const NetChart& chart, const HistogramConfig& cfg = {}) {
  PolarHistogram h;
  h.sector_width_deg = cfg.sector_width_deg;
  const int n = cfg.sectors();
  h.raw.assign(static_cast<std::size_t>(n), 0.0);
  const double mount = chart.config().mount_radius;
  chart.for_each_nonzero([&](int di, int dj, std::uint8_t c) {
    const Vec2 off = chart.cell_offset(di, dj);
    const double d = std::max(0.0, norm(off) - mount);
    const double m = static_cast<double>(c) * c * std::max(0.0, cfg.a() - cfg.b() * d);
    if (m <= 0.0 || (di == 0 && dj == 0)) return;
    h.raw[static_cast<std::size_t>(h.sector_of(rad2deg(std::atan2(off.y, off.x))))] += m;
  });
  h.smoothed.assign(static_cast<std::size_t>(n), 0.0);
  const int l = cfg.smoothing;
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int i = -l; i <= l; ++i) {
      acc += (l + 1 - std::abs(i)) * h.raw[static_cast<std::size_t>(((k + i) % n + n) % n)];
    }
    h.smoothed[static_cast<std::size_t>(k)] = acc / (2 * l + 1);
  }
  return h;
}

/// A maximal run of free sectors, [first, first + count) modulo the sector count.
struct Slot {
  int first = 0;
  int count = 0;
  double theta_d = 0.0;  // candidate direction, world deg in [0, 360)
  bool full_circle = false;
};

struct SelectionConfig {
  double threshold = HistogramConfig{}.default_threshold();
  /// Narrowest opening (deg) the robot is sent through.
  double robot_clearance_deg = 30.0;
  /// Slots up to this width are entered through their middle.
  double narrow_slot_deg = 90.0;
  double window_deg = 100.0;
  double case_split_deg = 90.0;
  /// Center the +-window on the target instead of the heading.
  bool window_on_target = false;
};

/// Free runs at least as wide as the robot clearance, each with its candidate direction.
inline std::vector<Slot> find_slots(const PolarHistogram& h, double theta_t_deg, const SelectionConfig& cfg) {
  const int n = h.sectors();
  const double w = h.sector_width_deg;
  std::vector<bool> free(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) free[static_cast<std::size_t>(k)] = h.smoothed[static_cast<std::size_t>(k)] < cfg.threshold;

  std::vector<Slot> slots;
  if (std::all_of(free.begin(), free.end(), [](bool f) { return f; })) {
    slots.push_back({0, n, wrap_360(theta_t_deg), true});
    return slots;
  }
  // start scanning right after a blocked sector so runs never straddle the scan origin
  int origin = 0;
  while (free[static_cast<std::size_t>(origin)]) ++origin;
  for (int step = 1; step <= n;) {
    const int k = (origin + step) % n;
    if (!free[static_cast<std::size_t>(k)]) {
      ++step;
      continue;
    }
    int count = 0;
    while (step <= n && free[static_cast<std::size_t>((origin + step) % n)]) {
      ++count;
      ++step;
    }
    Slot s{k, count, 0.0, false};
    const double width = count * w;
    if (width + 1e-9 < cfg.robot_clearance_deg) continue;
    const double lo = k * w;  // CCW-most edge is lo + width
    if (width <= cfg.narrow_slot_deg + 1e-9) {
      s.theta_d = wrap_360(lo + width / 2.0);
    } else {
      const double half = cfg.robot_clearance_deg / 2.0;
      const double into = wrap_360(theta_t_deg - lo);
      const double right = wrap_360(lo + half);
      const double left = wrap_360(lo + width - half);
      const double to_right = angle_diff_deg(theta_t_deg, lo);
      const double to_left = angle_diff_deg(theta_t_deg, lo + width);
      if (into >= half && into <= width - half) {
        s.theta_d = wrap_360(theta_t_deg);
      } else {
        s.theta_d = to_right <= to_left ? right : left;
      }
    }
    slots.push_back(s);
  }
  std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) { return a.first < b.first; });
  return slots;
}

struct SteeringDecision {
  enum class Kind { kCase1, kCase2, kRotateLeft, kRotateRight };

  Kind kind = Kind::kCase1;
  double theta_d = 0.0;  // world deg; for rotations, the heading 100 deg away
  std::vector<Slot> slots;

  bool rotating() const noexcept { return kind == Kind::kRotateLeft || kind == Kind::kRotateRight; }
};

inline const char* to_string(SteeringDecision::Kind k) noexcept {
  switch (k) {
    case SteeringDecision::Kind::kCase1:
      return "case1";
    case SteeringDecision::Kind::kCase2:
      return "case2";
    case SteeringDecision::Kind::kRotateLeft:
      return "rotate_left";
    case SteeringDecision::Kind::kRotateRight:
      return "rotate_right";
  }
  return "?";
}

/// Picks the travel direction. Only slots whose direction is within the window of the heading
/// count. With the target roughly ahead (Case 1) the slot closest to the target wins, otherwise
/// (Case 2) the one closest to the heading. With no slot in the window, turn 100 deg toward
/// the target side.
inline SteeringDecision select_direction(const PolarHistogram& h, double theta_deg, double theta_t_deg,
                                         const SelectionConfig& cfg = {}) {
  SteeringDecision d;
  d.slots = find_slots(h, theta_t_deg, cfg);
  const double center = cfg.window_on_target ? theta_t_deg : theta_deg;
  const bool case1 = angle_diff_deg(theta_deg, theta_t_deg) < cfg.case_split_deg;
  const Slot* best = nullptr;
  double best_cost = std::numeric_limits<double>::infinity();
  for (const auto& s : d.slots) {
    if (!(angle_diff_deg(center, s.theta_d) < cfg.window_deg)) continue;
    const double cost = case1 ? angle_diff_deg(s.theta_d, theta_t_deg) : angle_diff_deg(s.theta_d, theta_deg);
    if (cost < best_cost) {
      best_cost = cost;
      best = &s;
    }
  }
  if (best) {
    d.kind = case1 ? SteeringDecision::Kind::kCase1 : SteeringDecision::Kind::kCase2;
    d.theta_d = best->theta_d;
  } else if (wrap_180(theta_t_deg - theta_deg) > 0.0) {
    d.kind = SteeringDecision::Kind::kRotateLeft;
    d.theta_d = wrap_360(theta_deg + 100.0);
  } else {
    d.kind = SteeringDecision::Kind::kRotateRight;
    d.theta_d = wrap_360(theta_deg - 100.0);
  }
  return d;
}

struct CommandLaws {
  double heading_gain = 10.0;       // 1/s
  double omega_max_dps = 25.0;      // deg/s
  double v_max = 0.5;               // m/s
  double slow_distance = 0.5;       // m; V_max beyond this
  double stop_distance = 0.4;       // m
  double approach_gain = 5.0;       // 1/s
  double turn_trigger_dps = 10.0;   // deg/s
  double turn_divisor = 2.5;
};

/// omega = gain * (theta_d - theta), clamped; deg/s.
inline double angular_command(double theta_d_deg, double theta_deg, const CommandLaws& law = {}) noexcept {
  return std::clamp(law.heading_gain * wrap_180(theta_d_deg - theta_deg), -law.omega_max_dps, law.omega_max_dps);
}

/// Speed from the nearest obstacle within +-30 deg of the heading, slowed while turning.
inline double speed_command(double d30, double omega_dps, const CommandLaws& law = {}) noexcept {
  const double base =
      d30 >= law.slow_distance ? law.v_max : std::max(0.0, law.approach_gain * (d30 - law.stop_distance));
  return std::abs(omega_dps) >= law.turn_trigger_dps ? base / law.turn_divisor : base;
}

/// Nearest evidence cell within +-half_angle of the heading, measured from the sensor faces.
inline double nearest_ahead(const NetChart& chart, double theta_deg, double half_angle_deg = 30.0) {
  double best = std::numeric_limits<double>::infinity();
  const double mount = chart.config().mount_radius;
  chart.for_each_nonzero([&](int di, int dj, std::uint8_t) {
    const Vec2 off = chart.cell_offset(di, dj);
    if (di == 0 && dj == 0) return;
    if (angle_diff_deg(rad2deg(std::atan2(off.y, off.x)), theta_deg) > half_angle_deg) return;
    best = std::min(best, std::max(0.0, norm(off) - mount));
  });
  return best;
}

struct AvoiderConfig {
  NetChartConfig chart;
  HistogramConfig histogram;
  SelectionConfig selection;
  CommandLaws laws;
};

struct AvoiderRecord {
  double t = 0.0;
  double theta_deg = 0.0;
  double theta_t_deg = 0.0;
  double d30 = 0.0;
  double omega_dps = 0.0;
  double v = 0.0;
  SteeringDecision decision;
  PolarHistogram histogram;
};

struct AvoiderOutput {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s
  AvoiderRecord record;
};

/// One avoider per robot. The only state carried between cycles is an unfinished rotation,
/// which is dropped as soon as a slot shows up in the window.
class ImprovedVfh {
 public:
  explicit ImprovedVfh(AvoiderConfig cfg = {}) : cfg_(std::move(cfg)), chart_(cfg_.chart) {}

  const AvoiderConfig& config() const noexcept { return cfg_; }
  const NetChart& chart() const noexcept { return chart_; }
  bool rotating() const noexcept { return rotation_goal_.has_value(); }
  void reset() { rotation_goal_.reset(); }

  AvoiderOutput step(double t, const std::vector<SonarReading>& readings, const Pose& pose, Vec2 target) {
    chart_ = update_netchart(chart_, readings, pose);
    AvoiderOutput out;
    auto& rec = out.record;
    rec.t = t;
    rec.theta_deg = wrap_360(rad2deg(pose.theta));
    rec.theta_t_deg = wrap_360(rad2deg(std::atan2(target.y - pose.y, target.x - pose.x)));
    rec.histogram = build_histogram(chart_, cfg_.histogram);
    rec.decision = select_direction(rec.histogram, rec.theta_deg, rec.theta_t_deg, cfg_.selection);
    rec.d30 = nearest_ahead(chart_, rec.theta_deg);

    if (rec.decision.rotating()) {
      if (!rotation_goal_) rotation_goal_ = rec.decision.theta_d;
      if (angle_diff_deg(*rotation_goal_, rec.theta_deg) < 1.0) {
        rotation_goal_ = rec.decision.theta_d;  // finished one turn without a slot: turn again
      }
      rec.omega_dps = angular_command(*rotation_goal_, rec.theta_deg, cfg_.laws);
      if (std::abs(rec.omega_dps) < cfg_.laws.omega_max_dps) {
        rec.omega_dps = std::copysign(cfg_.laws.omega_max_dps, rec.omega_dps);
      }
      rec.v = 0.0;
    } else {
      rotation_goal_.reset();
      rec.omega_dps = angular_command(rec.decision.theta_d, rec.theta_deg, cfg_.laws);
      rec.v = speed_command(rec.d30, rec.omega_dps, cfg_.laws);
    }
    out.v = rec.v;
    out.omega = deg2rad(rec.omega_dps);
    return out;
  }

 private:
  AvoiderConfig cfg_;
  NetChart chart_;
  std::optional<double> rotation_goal_;
};

/// One line per cycle: scalars, then slots as first:count@theta_d, then the smoothed histogram.
inline void write_avoider_record(std::ostream& out, const AvoiderRecord& r) {
  using text::sig;
  out << "t=" << sig(r.t, 6) << " case=" << to_string(r.decision.kind) << " theta=" << sig(r.theta_deg, 6)
      << " theta_t=" << sig(r.theta_t_deg, 6) << " theta_d=" << sig(r.decision.theta_d, 6)
      << " d30=" << sig(r.d30, 6) << " omega_dps=" << sig(r.omega_dps, 6) << " v=" << sig(r.v, 6) << " slots=";
  for (std::size_t i = 0; i < r.decision.slots.size(); ++i) {
    const auto& s = r.decision.slots[i];
    out << (i ? ";" : "") << s.first << ':' << s.count << '@' << sig(s.theta_d, 6);
  }
  out << " hist=";
  for (std::size_t i = 0; i < r.histogram.smoothed.size(); ++i) {
    out << (i ? "," : "") << sig(r.histogram.smoothed[i], 4);
  }
  out << '\n';
}

/// Reads the scalar fields and slots of an avoider log; histograms are restored as well.
inline std::vector<AvoiderRecord> read_avoider_log(std::istream& in) {
  std::vector<AvoiderRecord> out;
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const auto tok = text::split(raw);
    if (tok.empty() || tok[0][0] == '#') continue;
    AvoiderRecord r;
    for (const auto& field : tok) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw ParseError("expected key=value, got '" + field + "'", n);
      const std::string key = field.substr(0, eq);
      const std::string val = field.substr(eq + 1);
      if (key == "t") {
        r.t = text::parse_double(val, n);
      } else if (key == "case") {
        using K = SteeringDecision::Kind;
        bool known = false;
        for (auto k : {K::kCase1, K::kCase2, K::kRotateLeft, K::kRotateRight}) {
          if (val == to_string(k)) {
            r.decision.kind = k;
            known = true;
          }
        }
        if (!known) throw ParseError("unknown case '" + val + "'", n);
      } else if (key == "theta") {
        r.theta_deg = text::parse_double(val, n);
      } else if (key == "theta_t") {
        r.theta_t_deg = text::parse_double(val, n);
      } else if (key == "theta_d") {
        r.decision.theta_d = text::parse_double(val, n);
      } else if (key == "d30") {
        r.d30 = text::parse_double(val, n);
      } else if (key == "omega_dps") {
        r.omega_dps = text::parse_double(val, n);
      } else if (key == "v") {
        r.v = text::parse_double(val, n);
      } else if (key == "slots") {
        for (const auto& item : text::split(val, ";")) {
          const auto colon = item.find(':');
          const auto at = item.find('@');
          if (colon == std::string::npos || at == std::string::npos || at < colon) {
            throw ParseError("bad slot '" + item + "'", n);
          }
          Slot sl;
          sl.first = static_cast<int>(text::parse_int(item.substr(0, colon), n));
          sl.count = static_cast<int>(text::parse_int(item.substr(colon + 1, at - colon - 1), n));
          sl.theta_d = text::parse_double(item.substr(at + 1), n);
          r.decision.slots.push_back(sl);
        }
      } else if (key == "hist") {
        for (const auto& v : text::split(val, ",")) r.histogram.smoothed.push_back(text::parse_double(v, n));
      } else {
        throw ParseError("unknown field '" + key + "'", n);
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace floornav

#endif  // FLOORNAV_VFH_HPP
