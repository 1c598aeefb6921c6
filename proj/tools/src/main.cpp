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

#include <CLI11.hpp>

#include <iostream>

#include "slopelink/tools/commands.hpp"
#include "slopelink/tools/logging.hpp"

using namespace slopelink::tools;

int main(int argc, char** argv) {
  CLI::App app{"SlopeLink: guided backcountry annotation server and tools"};
  app.require_subcommand(1);

  ServeArgs serve;
  std::string annotations;
  auto* serve_cmd = app.add_subcommand("serve", "Run a guide/skier session over WebSocket");
  serve_cmd->add_option("--terrain", serve.terrain, "ESRI ASCII grid")->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--annotations", annotations, "Initial annotation set (JSON)");
  serve_cmd->add_option("--port", serve.port, "Listening port")->capture_default_str();
  serve_cmd->add_option("--log", serve.log, "Event log (JSON Lines), replayed on start")->required();

  ValidateArgs validate;
  auto* validate_cmd = app.add_subcommand("validate", "Check a terrain and annotation set");
  validate_cmd->add_option("--terrain", validate.terrain)->required();
  validate_cmd->add_option("--annotations", validate.annotations)->required();

  SimulateArgs simulate;
  std::vector<double> start;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run the fall-line skier simulator");
  simulate_cmd->add_option("--terrain", simulate.terrain)->required();
  simulate_cmd->add_option("--annotations", annotations);
  simulate_cmd->add_option("--start", start, "X,Y")->required()->delimiter(',')->expected(2);
  simulate_cmd->add_option("--seed", simulate.seed)->capture_default_str();
  simulate_cmd->add_option("--steps", simulate.steps)->capture_default_str();
  simulate_cmd->add_option("--out", simulate.out, "Output JSON Lines")->required();
  simulate_cmd->add_flag("--ignore-zones", simulate.ignore_zones, "Skip slow-zone speed limits");

  ViewArgs view;
  std::vector<double> pose;
  auto* view_cmd = app.add_subcommand("view", "Print the overlay set for a pose");
  view_cmd->add_option("--terrain", view.terrain)->required();
  view_cmd->add_option("--annotations", annotations);
  view_cmd->add_option("--pose", pose, "X,Y,YAW,PITCH (radians)")
      ->required()
      ->delimiter(',')
      ->expected(4);
  view_cmd->add_option("--budget", view.budget)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  configure_logging();
  std::optional<std::filesystem::path> annotation_path;
  if (!annotations.empty()) annotation_path = annotations;

  if (*serve_cmd) {
    serve.annotations = annotation_path;
    return cmd_serve(serve, std::cerr);
  }
  if (*validate_cmd) return cmd_validate(validate, std::cout, std::cerr);
  if (*simulate_cmd) {
    simulate.annotations = annotation_path;
    simulate.start = {start[0], start[1]};
    return cmd_simulate(simulate, std::cerr);
  }
  view.annotations = annotation_path;
  view.x = pose[0];
  view.y = pose[1];
  view.yaw = pose[2];
  view.pitch = pose[3];
  return cmd_view(view, std::cout, std::cerr);
}
