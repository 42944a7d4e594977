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

// Plans the two-gate world for a range of robot heights and prints which openings the
// planned path uses. A lintel only blocks robots taller than its lower edge.
//
//   gate_choice_demo [scenario.scn]

#include <cstdio>
#include <string>

#include "floornav.hpp"

int main(int argc, char** argv) {
  using namespace floornav;
  const std::string file = argc > 1 ? argv[1] : std::string(FLOORNAV_SCENARIO_DIR) + "/gates.scn";
  try {
    const Scenario base = load_scenario(file);
    std::printf("%-8s %-10s %-8s %s\n", "height", "cost(m)", "time(s)", "regions");
    for (double h : {0.6, 0.9, 1.2, 1.4, 1.7}) {
      Scenario sc = base;
      sc.robot.body_height = h;
      sc.z_limit.reset();
      const PlanArtifacts plan = plan_scenario(sc);
      if (!plan.ok()) {
        std::printf("%-8.2f %s\n", h, plan.failure.c_str());
        continue;
      }
      std::string via;
      for (const auto& r : sc.world.regions) {
        if (trajectory_visits(plan.trajectory, r.area)) via += r.name + " ";
      }
      std::printf("%-8.2f %-10.2f %-8.1f %s\n", h, plan.path->cost, plan.trajectory.duration(), via.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "gate_choice_demo: %s\n", e.what());
    return 2;
  }
  return 0;
}
