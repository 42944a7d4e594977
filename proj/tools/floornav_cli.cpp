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

// floornav: pipeline stages and scenario runs from the command line.
// Exit codes: 0 success, 1 domain failure (no path, collision, timeout), 2 input error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "floornav.hpp"

namespace fs = std::filesystem;
using namespace floornav;

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kInputError = 2;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Opens `path` for reading; "-" is stdin.
std::unique_ptr<std::istream, std::function<void(std::istream*)>> open_in(const std::string& path) {
  if (path == "-") return {&std::cin, [](std::istream*) {}};
  auto* f = new std::ifstream(path);
  if (!*f) {
    delete f;
    throw InputError("cannot open '" + path + "'");
  }
  return {f, [](std::istream* p) { delete p; }};
}

void write_out(const std::string& path, const std::function<void(std::ostream&)>& emit) {
  if (path == "-") {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  emit(f);
}

std::string default_out_dir() {
  const char* env = std::getenv("FLOORNAV_OUT_DIR");
  return env && *env ? env : ".";
}

Vec2 parse_point(const std::string& s) {
  const auto v = units::parse_tuple(s, {units::Dimension::kLength, units::Dimension::kLength});
  return {v[0], v[1]};
}

Scenario load_with_overrides(const std::string& path, const std::string& z_limit, const std::string& cellsize,
                             const std::optional<std::uint64_t>& seed) {
  Scenario sc = load_scenario(path);
  if (!z_limit.empty()) sc.z_limit = units::length(z_limit);
  if (!cellsize.empty()) sc.cellsize = units::length(cellsize);
  if (seed) sc.seed = *seed;
  sc.validate();
  return sc;
}

struct Common {
  std::string scenario;
  std::string z_limit;
  std::string cellsize;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_sweep(const Common& c) {
  const Scenario sc = load_with_overrides(c.scenario, c.z_limit, c.cellsize, c.seed);
  std::mt19937_64 rng(sc.seed);
  const Cloud3D cloud = perceive(sc, rng);
  write_out(c.out.empty() ? "-" : c.out, [&](std::ostream& o) { write_cloud(o, cloud); });
  return kOk;
}

int cmd_map(const Common& c, const std::string& in) {
  if (c.z_limit.empty() && c.scenario.empty()) throw InputError("map needs --z-limit or --scenario");
  double z_limit = 0.0;
  BoundaryMapOptions opt;
  if (!c.scenario.empty()) {
    const Scenario sc = load_with_overrides(c.scenario, c.z_limit, c.cellsize, c.seed);
    z_limit = sc.effective_z_limit();
    opt = sc.boundary;
  } else {
    z_limit = units::length(c.z_limit);
  }
  const auto stream = open_in(in);
  const Cloud3D cloud = read_cloud(*stream);
  const SegmentMap2D map = build_boundary_map(cloud, z_limit, opt);
  write_out(c.out.empty() ? "-" : c.out, [&](std::ostream& o) { write_segment_map(o, map); });
  return kOk;
}

struct PlanArgs {
  std::string in = "-";
  std::string start;
  std::string goal;
  std::string bounds;
  int dilation = -1;
  std::string grid_out;
  std::string trajectory_out;
};

int cmd_plan(const Common& c, const PlanArgs& a) {
  std::optional<Scenario> sc;
  if (!c.scenario.empty()) sc = load_with_overrides(c.scenario, c.z_limit, c.cellsize, c.seed);
  if (!sc && (a.start.empty() || a.goal.empty())) throw InputError("plan needs --start and --goal or --scenario");
  const Vec2 start = !a.start.empty() ? parse_point(a.start) : sc->start.position();
  const Vec2 goal = !a.goal.empty() ? parse_point(a.goal) : sc->goal;
  const double cellsize = !c.cellsize.empty() ? units::length(c.cellsize) : sc ? sc->cellsize : 0.4;
  const int dilation = a.dilation >= 0 ? a.dilation : sc ? sc->dilation : 2;

  const auto stream = open_in(a.in);
  const SegmentMap2D map = read_segment_map(*stream);
  Rect bounds;
  if (!a.bounds.empty()) {
    using units::Dimension;
    const auto v = units::parse_tuple(
        a.bounds, {Dimension::kLength, Dimension::kLength, Dimension::kLength, Dimension::kLength});
    bounds = {v[0], v[1], v[2], v[3]};
  } else if (sc) {
    bounds = sc->bounds;
  } else {
    std::vector<Vec2> pts{start, goal};
    for (const auto& s : map.segments) {
      pts.push_back(s.a);
      pts.push_back(s.b);
    }
    bounds = svg::extent(pts, cellsize * (dilation + 1));
  }
  const OccupancyGrid grid = dilate(rasterize(clip_to_bounds(map, bounds), cellsize, bounds), dilation);
  if (!a.grid_out.empty()) write_out(a.grid_out, [&](std::ostream& o) { write_grid(o, grid); });
  GridPath path;
  try {
    path = astar(grid, grid.world_to_grid(start), grid.world_to_grid(goal));
  } catch (const InvalidEndpointError& e) {
    std::cerr << "floornav plan: " << e.what() << '\n';
    return kDomainFailure;
  } catch (const NoPathError& e) {
    std::cerr << "floornav plan: " << e.what() << '\n';
    return kDomainFailure;
  }
  write_out(c.out.empty() ? "-" : c.out, [&](std::ostream& o) { write_path_csv(o, path); });
  if (!a.trajectory_out.empty()) {
    const TrajectoryOptions topt = sc ? sc->trajectory : TrajectoryOptions{};
    const bool cut = sc ? sc->shortcut : true;
    auto poly = anchor_endpoints(grid, cut ? shortcut(grid, path) : path.points, start, goal);
    const auto traj = polyline_to_trajectory(poly, topt);
    write_out(a.trajectory_out, [&](std::ostream& o) { write_trajectory_csv(o, traj); });
  }
  return kOk;
}

struct RunOutcome {
  int code = kOk;
  std::string message;
};

RunOutcome run_one(const Scenario& sc, const fs::path& dir, bool verify) {
  const RunResult run = run_scenario(sc);
  const std::string base = (dir / sc.name).string();
  write_out(base + ".runlog.csv", [&](std::ostream& o) { write_run_log(o, sc, run); });
  if (sc.mode == Scenario::Mode::kFull) {
    write_out(base + ".map.txt", [&](std::ostream& o) { write_segment_map(o, run.plan.map); });
    write_out(base + ".grid.txt", [&](std::ostream& o) { write_grid(o, run.plan.grid); });
    if (run.plan.path) write_out(base + ".path.csv", [&](std::ostream& o) { write_path_csv(o, *run.plan.path); });
    if (run.plan.ok()) {
      write_out(base + ".trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, run.plan.trajectory); });
    }
  }
  if (!run.avoider.empty()) {
    write_out(base + ".avoider.log", [&](std::ostream& o) {
      for (const auto& r : run.avoider) write_avoider_record(o, r);
    });
  }
  const auto& s = run.summary;
  std::ostringstream msg;
  msg << sc.name << ": " << to_string(s.verdict) << " t=" << text::sig(s.completion_time, 6)
      << " min_clearance=" << text::sig(s.min_clearance, 4) << " takeovers=" << s.takeovers;
  RunOutcome out;
  out.code = s.verdict == Verdict::kGoalReached ? kOk : kDomainFailure;
  if (verify) {
    for (const auto& r : s.regions) {
      msg << " region " << r.region << (r.passed() ? " ok" : " MISMATCH");
      if (!r.passed()) out.code = kDomainFailure;
    }
  }
  out.message = msg.str();
  return out;
}

int cmd_run(const Common& c, const std::vector<std::string>& files, bool verify) {
  std::vector<std::string> all = files;
  if (!c.scenario.empty()) all.insert(all.begin(), c.scenario);
  if (all.empty()) throw InputError("run needs at least one scenario");
  std::vector<Scenario> scenarios;
  for (const auto& f : all) scenarios.push_back(load_with_overrides(f, c.z_limit, c.cellsize, c.seed));
  const fs::path dir = c.out.empty() ? default_out_dir() : c.out;
  fs::create_directories(dir);

  std::vector<RunOutcome> outcomes(scenarios.size());
  std::vector<std::thread> workers;
  std::mutex err_mutex;
  std::string first_error;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    workers.emplace_back([&, i] {
      try {
        outcomes[i] = run_one(scenarios[i], dir, verify);
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mutex);
        if (first_error.empty()) first_error = scenarios[i].name + ": " + e.what();
        outcomes[i] = {kInputError, scenarios[i].name + ": " + e.what()};
      }
    });
  }
  for (auto& w : workers) w.join();
  int code = kOk;
  for (const auto& o : outcomes) {
    std::cout << o.message << '\n';
    code = std::max(code, o.code);
  }
  return code;
}

struct PlotArgs {
  std::string kind;
  std::string in;
  std::string grid;
  std::string path;
  std::string map;
  std::string trajectory;
  double scale = 40.0;
};

int cmd_plot(const Common& c, const PlotArgs& a) {
  svg::Style style;
  style.px_per_m = a.scale;
  std::string doc;
  const auto need = [](const std::string& v, const char* flag) {
    if (v.empty()) throw InputError(std::string("plot needs ") + flag);
    return v;
  };
  if (a.kind == "map2d") {
    const auto s = open_in(need(a.in, "--in"));
    doc = svg::plot_map2d(read_segment_map(*s), style);
  } else if (a.kind == "grid") {
    const auto s = open_in(need(a.in, "--in"));
    doc = svg::plot_grid(read_grid(*s), style);
  } else if (a.kind == "path") {
    const auto g = open_in(need(a.grid, "--grid"));
    const auto p = open_in(need(a.in.empty() ? a.path : a.in, "--in"));
    doc = svg::plot_path(read_grid(*g), read_path_csv(*p), style);
  } else if (a.kind == "trajectory-overlay") {
    const auto s = open_in(need(a.in, "--in"));
    const RunResult run = read_run_log(*s);
    std::optional<ReferenceTrajectory> traj;
    std::optional<SegmentMap2D> map;
    if (!a.trajectory.empty()) traj = read_trajectory_csv(*open_in(a.trajectory));
    if (!a.map.empty()) map = read_segment_map(*open_in(a.map));
    doc = svg::plot_trajectory_overlay(run.ticks, traj ? &*traj : nullptr, map ? &*map : nullptr, style);
  } else if (a.kind == "vfh-run") {
    const auto s = open_in(need(a.in, "--in"));
    doc = svg::plot_vfh_run(read_avoider_log(*s), style);
  } else {
    throw InputError("unknown plot kind '" + a.kind + "'");
  }
  write_out(c.out.empty() ? "-" : c.out, [&](std::ostream& o) { o << doc; });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"floornav: 3D sweep mapping, grid planning, tracking and sonar avoidance"};
  app.require_subcommand(1);
  Common common;
  std::uint64_t seed = 0;
  const auto add_common = [&](CLI::App* sub, bool scenario_required) {
    auto* opt = sub->add_option("--scenario", common.scenario, "scenario file");
    if (scenario_required) opt->required();
    opt->check(CLI::ExistingFile);
    sub->add_option("--z-limit", common.z_limit, "height filter, e.g. 1.2m");
    sub->add_option("--cellsize", common.cellsize, "grid cell size, e.g. 0.4m");
    sub->add_option("--seed", seed, "random seed")->each([&](const std::string&) { common.seed = seed; });
    sub->add_option("--out", common.out, "output file or directory ('-' for stdout)");
  };

  auto* sweep_cmd = app.add_subcommand("sweep", "simulate the 3D laser sweep from the scenario start");
  add_common(sweep_cmd, true);

  std::string map_in = "-";
  auto* map_cmd = app.add_subcommand("map", "compress and segment a cloud into a 2D boundary map");
  add_common(map_cmd, false);
  map_cmd->add_option("--in", map_in, "cloud file ('-' for stdin)");

  PlanArgs plan_args;
  auto* plan_cmd = app.add_subcommand("plan", "grid A* over a boundary map");
  add_common(plan_cmd, false);
  plan_cmd->add_option("--in", plan_args.in, "segment map ('-' for stdin)");
  plan_cmd->add_option("--start", plan_args.start, "x,y");
  plan_cmd->add_option("--goal", plan_args.goal, "x,y");
  plan_cmd->add_option("--bounds", plan_args.bounds, "x_min,y_min,x_max,y_max");
  plan_cmd->add_option("--dilation", plan_args.dilation, "dilation radius in cells");
  plan_cmd->add_option("--grid-out", plan_args.grid_out, "also write the dilated grid");
  plan_cmd->add_option("--trajectory", plan_args.trajectory_out, "also write the reference trajectory");

  std::vector<std::string> run_files;
  bool verify = false;
  auto* run_cmd = app.add_subcommand("run", "run scenarios end to end (concurrently)");
  add_common(run_cmd, false);
  run_cmd->add_option("scenarios", run_files, "scenario files")->check(CLI::ExistingFile);
  run_cmd->add_flag("--verify", verify, "also check the scenario's region expectations");

  PlotArgs plot_args;
  auto* plot_cmd = app.add_subcommand("plot", "render an SVG");
  add_common(plot_cmd, false);
  plot_cmd->add_option("--kind", plot_args.kind, "map2d | grid | path | trajectory-overlay | vfh-run")->required();
  plot_cmd->add_option("--in", plot_args.in, "primary input");
  plot_cmd->add_option("--grid", plot_args.grid, "grid file (path plots)");
  plot_cmd->add_option("--path", plot_args.path, "path CSV (path plots)");
  plot_cmd->add_option("--map", plot_args.map, "segment map (overlay)");
  plot_cmd->add_option("--trajectory", plot_args.trajectory, "reference trajectory CSV (overlay)");
  plot_cmd->add_option("--scale", plot_args.scale, "pixels per metre");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*sweep_cmd) return cmd_sweep(common);
    if (*map_cmd) return cmd_map(common, map_in);
    if (*plan_cmd) return cmd_plan(common, plan_args);
    if (*run_cmd) return cmd_run(common, run_files, verify);
    if (*plot_cmd) return cmd_plot(common, plot_args);
  } catch (const ParseError& e) {
    std::cerr << "floornav: " << e.what() << '\n';
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "floornav: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "floornav: " << e.what() << '\n';
    return kInputError;
  } catch (const std::out_of_range& e) {
    std::cerr << "floornav: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "floornav: " << e.what() << '\n';
    return kDomainFailure;
  }
  return kOk;
}
