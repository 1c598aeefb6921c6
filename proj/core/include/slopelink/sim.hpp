// Copyright 2026 The SlopeLink Authors.
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

#pragma once

#include <cstdint>
#include <vector>

#include "slopelink/annotation.hpp"
#include "slopelink/geometry.hpp"
#include "slopelink/terrain.hpp"
#include "slopelink/viewmodel.hpp"

namespace slopelink {

inline constexpr double kGravity = 9.81;
inline constexpr double kEyeHeight = 1.7;
inline constexpr double kRestSpeed = 0.05;

struct SimConfig {
  Vec2 start_xy;
  double dt = 0.1;          // s
  double v_max = 25.0;      // m/s
  double drag = 0.01;       // 1/m
  double inertia = 0.85;    // share of the previous heading kept per step
  std::uint64_t seed = 0;   // perturbs the initial heading only
  int max_steps = 1000;
  double initial_speed = 0.0;
  bool ignore_zones = false;  // skip the slow-zone speed clamp
  std::int64_t start_ms = 0;
};

/// Throws std::invalid_argument when dt, inertia, drag, or v_max is out of range.
void check_sim_config(const SimConfig& cfg);

struct SimState {
  WorldPoint position;  // on the surface
  Vec2 heading{1.0, 0.0};
  double speed = 0.0;
  int step_index = 0;
  double slope_angle = 0.0;  // of the last step, for the pose pitch

  friend bool operator==(const SimState&, const SimState&) = default;
};

struct TraceSample {
  std::int64_t t_ms = 0;
  Pose pose;
  double speed = 0.0;

  friend bool operator==(const TraceSample&, const TraceSample&) = default;
};

/// Start state: on the surface at start_xy, heading down the fall line
/// turned by a seed-derived angle in [-pi/8, pi/8].
SimState initial_state(const TerrainGrid& grid, const SimConfig& cfg);

/// One explicit Euler step of the fall-line point mass. Throws TerrainError
/// (kOutOfBounds) when the skier would leave the usable terrain.
SimState sim_step(const SimState& state, const TerrainGrid& grid, const AnnotationStore& store,
                  const SimConfig& cfg);

Pose pose_of(const SimState& state);

/// Steps until max_steps, the terrain edge, or rest inside a safe zone.
/// The first sample is the initial state.
std::vector<TraceSample> run_sim(const TerrainGrid& grid, const AnnotationStore& store,
                                 const SimConfig& cfg);

}  // namespace slopelink
