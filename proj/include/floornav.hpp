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

#ifndef FLOORNAV_FLOORNAV_HPP
#define FLOORNAV_FLOORNAV_HPP

#include "floornav/angles.hpp"
#include "floornav/boundary_map.hpp"
#include "floornav/geometry.hpp"
#include "floornav/gridmap.hpp"
#include "floornav/planner.hpp"
#include "floornav/scan_geometry.hpp"
#include "floornav/scenario.hpp"
#include "floornav/simulation.hpp"
#include "floornav/svg.hpp"
#include "floornav/text_io.hpp"
#include "floornav/tracking_control.hpp"
#include "floornav/units.hpp"
#include "floornav/vfh.hpp"
#include "floornav/world.hpp"

#endif  // FLOORNAV_FLOORNAV_HPP
