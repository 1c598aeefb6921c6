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

#include "slopelink/tools/commands.hpp"

#include <spdlog/spdlog.h>

#include <boost/asio/signal_set.hpp>

#include <csignal>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "slopelink/alerts.hpp"
#include "slopelink/annotation_json.hpp"
#include "slopelink/protocol.hpp"
#include "slopelink/tools/server.hpp"
#include "slopelink/viewmodel.hpp"

namespace slopelink::tools {
namespace {

using ordered = nlohmann::ordered_json;

// Input failures all map to the same exit code; the message says which file.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TerrainGrid read_terrain(const std::filesystem::path& path) {
  try {
    return load_terrain_file(path);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

AnnotationStore read_annotations(const std::optional<std::filesystem::path>& path) {
  if (!path) return {};
  try {
    return load_annotation_file(*path);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

// One line per violation, ids in store order. Returns the number of lines.
int report_violations(const AnnotationStore& store, const TerrainGrid& grid, std::ostream& out) {
  int lines = 0;
  for (const auto& [id, a] : store.entries()) {
    for (Violation v : validate_annotation(a, grid)) {
      out << id << ": " << to_string(v) << '\n';
      ++lines;
    }
  }
  return lines;
}

ordered reorder(const nlohmann::json& j) {
  ordered o = ordered::object();
  for (const auto& [key, value] : j.items()) o[key] = value;
  return o;
}

}  // namespace

int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const TerrainGrid grid = read_terrain(args.terrain);
    const AnnotationStore store = read_annotations(args.annotations);
    if (report_violations(store, grid, out) > 0) return kExitInvalid;
    out << "OK\n";
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

void write_simulation(std::ostream& out, const TerrainGrid& grid, const AnnotationStore& store,
                      const SimConfig& cfg) {
  const std::vector<TraceSample> trace = run_sim(grid, store, cfg);
  SkierTrack track;
  track.skier_id = "sim";
  track.timestamp = cfg.start_ms;
  std::vector<std::string> shown;

  for (const TraceSample& s : trace) {
    ordered line = ordered::object();
    line["t_ms"] = s.t_ms;
    line["x"] = s.pose.position.x;
    line["y"] = s.pose.position.y;
    line["z"] = s.pose.position.z;
    line["yaw"] = s.pose.yaw;
    line["pitch"] = s.pose.pitch;
    line["speed"] = s.speed;
    out << line.dump() << '\n';

    AlertStep step = step_alerts(track, store, grid, s.pose, s.speed, s.t_ms);
    track = std::move(step.track);
    for (const AlertEvent& event : step.events) {
      ordered alert = ordered::object();
      alert["type"] = "ALERT";
      alert["t_ms"] = s.t_ms;
      alert.update(reorder(alert_to_json(event)));
      out << alert.dump() << '\n';
    }

    const OverlaySet view = compute_overlays(store, grid, s.pose);
    std::vector<std::string> ids;
    for (const Overlay& o : view.overlays) ids.push_back(o.annotation_id);
    if (ids != shown) {
      ordered record = ordered::object();
      record["type"] = "VIEW_STATE";
      record["t_ms"] = s.t_ms;
      record.update(reorder(overlay_set_to_json(view)));
      out << record.dump() << '\n';
      shown = std::move(ids);
    }
  }
}

int cmd_simulate(const SimulateArgs& args, std::ostream& err) {
  try {
    const TerrainGrid grid = read_terrain(args.terrain);
    const AnnotationStore store = read_annotations(args.annotations);
    if (report_violations(store, grid, err) > 0) return kExitInvalid;
    if (!grid.contains(args.start.x, args.start.y)) {
      err << "error: start (" << args.start.x << ", " << args.start.y
          << ") is outside the terrain\n";
      return kExitInputError;
    }
    SimConfig cfg;
    cfg.start_xy = args.start;
    cfg.seed = args.seed;
    cfg.max_steps = args.steps;
    cfg.ignore_zones = args.ignore_zones;
    check_sim_config(cfg);

    std::ostringstream buffer;
    write_simulation(buffer, grid, store, cfg);
    std::ofstream file(args.out, std::ios::binary | std::ios::trunc);
    if (!(file << buffer.str()) || !file.flush()) {
      err << "error: cannot write " << args.out.string() << '\n';
      return kExitInputError;
    }
    spdlog::info("wrote {}", args.out.string());
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
  } catch (const TerrainError& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitInputError;
}

int cmd_view(const ViewArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const TerrainGrid grid = read_terrain(args.terrain);
    const AnnotationStore store = read_annotations(args.annotations);
    if (report_violations(store, grid, err) > 0) return kExitInvalid;
    Pose pose;
    pose.position = snap_to_surface(grid, args.x, args.y, kEyeHeight);
    pose.yaw = args.yaw;
    pose.pitch = args.pitch;
    ViewConfig cfg;
    cfg.budget = args.budget;
    out << overlay_set_to_json(compute_overlays(store, grid, pose, cfg)).dump(2) << '\n';
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
  } catch (const TerrainError& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitInputError;
}

int cmd_serve(const ServeArgs& args, std::ostream& err) {
  ServerOptions options;
  try {
    std::ifstream in(args.terrain, std::ios::binary);
    if (!in) throw InputError("cannot open terrain file " + args.terrain.string());
    options.terrain_text.assign(std::istreambuf_iterator<char>(in), {});
    const TerrainGrid grid = read_terrain(args.terrain);
    options.initial = read_annotations(args.annotations);
    if (report_violations(options.initial, grid, err) > 0) return kExitInvalid;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  options.log_path = args.log;
  options.port = args.port;

  boost::asio::io_context ioc(1);
  std::unique_ptr<Server> server;
  try {
    server = std::make_unique<Server>(ioc, std::move(options));
  } catch (const CorruptLog& e) {
    err << "error: event log " << args.log.string() << ": " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  if (server->replayed() > 0) spdlog::info("replayed {} logged messages", server->replayed());
  server->start();

  boost::asio::signal_set signals(ioc, SIGINT, SIGTERM);
  signals.async_wait([&](const boost::system::error_code&, int) {
    spdlog::info("shutting down");
    server->stop();
    ioc.stop();
  });
  ioc.run();
  return kExitOk;
}

}  // namespace slopelink::tools
