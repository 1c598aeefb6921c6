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

#include "slopelink/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace slopelink {
namespace {

constexpr double kFlatGradient = 1e-12;

bool inside_zone(const AnnotationStore& store, Vec2 p, AnnotationKind kind) {
  for (const auto& [id, a] : store.entries()) {
    if (!a.deleted && a.kind == kind && point_in_polygon(p, *a.polygon())) return true;
  }
  return false;
}

std::int64_t step_time(const SimConfig& cfg, int step) {
  return cfg.start_ms + std::llround(static_cast<double>(step) * cfg.dt * 1000.0);
}

}  // namespace

void check_sim_config(const SimConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(cfg.inertia >= 0.0 && cfg.inertia <= 1.0)) {
    throw std::invalid_argument("inertia must be within [0, 1]");
  }
  if (!(cfg.drag > 0.0)) throw std::invalid_argument("drag must be positive");
  if (!(cfg.v_max > 0.0)) throw std::invalid_argument("v_max must be positive");
  if (cfg.max_steps < 0) throw std::invalid_argument("max_steps must be >= 0");
  if (!(cfg.initial_speed >= 0.0)) throw std::invalid_argument("initial speed must be >= 0");
}

SimState initial_state(const TerrainGrid& grid, const SimConfig& cfg) {
  SimState s;
  s.position = snap_to_surface(grid, cfg.start_xy.x, cfg.start_xy.y, 0.0);
  s.speed = std::min(cfg.initial_speed, cfg.v_max);

  double base = 0.0;
  const Gradient g = gradient_at(grid, cfg.start_xy.x, cfg.start_xy.y);
  const double mag = std::hypot(g.dzdx, g.dzdy);
  if (mag > kFlatGradient) base = std::atan2(-g.dzdy, -g.dzdx);
  s.slope_angle = std::atan(mag);

  // mt19937_64 output is fully specified, unlike the standard distributions.
  std::mt19937_64 rng(cfg.seed);
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double angle = base + (2.0 * unit - 1.0) * (std::numbers::pi / 8.0);
  s.heading = {std::cos(angle), std::sin(angle)};
  return s;
}

SimState sim_step(const SimState& state, const TerrainGrid& grid, const AnnotationStore& store,
                  const SimConfig& cfg) {
  const Gradient g = gradient_at(grid, state.position.x, state.position.y);
  const double mag = std::hypot(g.dzdx, g.dzdy);

  Vec2 heading = state.heading;
  if (mag > kFlatGradient) {
    const Vec2 fall{-g.dzdx / mag, -g.dzdy / mag};
    const Vec2 blend{cfg.inertia * heading.x + (1.0 - cfg.inertia) * fall.x,
                     cfg.inertia * heading.y + (1.0 - cfg.inertia) * fall.y};
    const double len = std::hypot(blend.x, blend.y);
    if (len > kFlatGradient) heading = {blend.x / len, blend.y / len};
  }

  const double theta = std::atan(mag);
  double speed = state.speed + cfg.dt * (kGravity * std::sin(theta) -
                                         cfg.drag * state.speed * state.speed);
  speed = std::clamp(speed, 0.0, cfg.v_max);
  if (!cfg.ignore_zones) {
    const Vec2 here{state.position.x, state.position.y};
    for (const auto& [id, a] : store.entries()) {
      if (!a.deleted && a.kind == AnnotationKind::kSlowZone && a.speed_limit &&
          point_in_polygon(here, *a.polygon())) {
        speed = std::min(speed, *a.speed_limit);
      }
    }
  }

  const double x = state.position.x + cfg.dt * speed * heading.x;
  const double y = state.position.y + cfg.dt * speed * heading.y;
  SimState next;
  next.position = snap_to_surface(grid, x, y, 0.0);
  next.heading = heading;
  next.speed = speed;
  next.step_index = state.step_index + 1;
  next.slope_angle = theta;
  return next;
}

Pose pose_of(const SimState& state) {
  Pose pose;
  pose.position = {state.position.x, state.position.y, state.position.z + kEyeHeight};
  pose.yaw = std::atan2(state.heading.y, state.heading.x);
  pose.pitch = -state.slope_angle;
  return pose;
}

std::vector<TraceSample> run_sim(const TerrainGrid& grid, const AnnotationStore& store,
                                 const SimConfig& cfg) {
  check_sim_config(cfg);
  std::vector<TraceSample> trace;
  SimState state = initial_state(grid, cfg);
  trace.push_back({step_time(cfg, 0), pose_of(state), state.speed});

  auto at_rest = [&](const SimState& s) {
    return s.speed < kRestSpeed &&
           inside_zone(store, {s.position.x, s.position.y}, AnnotationKind::kSafeZone);
  };

  while (state.step_index < cfg.max_steps && !at_rest(state)) {
    try {
      SimState next = sim_step(state, grid, store, cfg);
      // The next step needs a gradient here; stop before leaving usable terrain.
      gradient_at(grid, next.position.x, next.position.y);
      state = next;
    } catch (const TerrainError& e) {
      if (e.code() != TerrainErrc::kOutOfBounds) throw;
      break;
    }
    trace.push_back({step_time(cfg, state.step_index), pose_of(state), state.speed});
  }
  return trace;
}

}  // namespace slopelink
