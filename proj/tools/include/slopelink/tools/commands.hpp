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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "slopelink/annotation.hpp"
#include "slopelink/sim.hpp"
#include "slopelink/terrain.hpp"

namespace slopelink::tools {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitInputError = 2;

struct ValidateArgs {
  std::filesystem::path terrain;
  std::filesystem::path annotations;
};

/// Prints "OK", or one "<id>: <Violation>" line per violation.
int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err);

struct SimulateArgs {
  std::filesystem::path terrain;
  std::optional<std::filesystem::path> annotations;
  Vec2 start;
  std::uint64_t seed = 0;
  int steps = 1000;
  std::filesystem::path out;
  bool ignore_zones = false;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& err);

/// The simulate pipeline without file handling. Writes one JSON object per
/// line: each trace sample, then the alerts it raised, then a VIEW_STATE
/// whenever the visible overlay ids change.
void write_simulation(std::ostream& out, const TerrainGrid& grid, const AnnotationStore& store,
                      const SimConfig& cfg);

struct ViewArgs {
  std::filesystem::path terrain;
  std::optional<std::filesystem::path> annotations;
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  double pitch = 0.0;
  int budget = 5;
};

/// Prints the OverlaySet for an eye-height pose above (x, y) as JSON.
int cmd_view(const ViewArgs& args, std::ostream& out, std::ostream& err);

struct ServeArgs {
  std::filesystem::path terrain;
  std::optional<std::filesystem::path> annotations;
  std::uint16_t port = 8080;
  std::filesystem::path log;
};

/// Runs until SIGINT or SIGTERM.
int cmd_serve(const ServeArgs& args, std::ostream& err);

}  // namespace slopelink::tools
