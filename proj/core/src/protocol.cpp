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

#include "slopelink/protocol.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <utility>

#include "slopelink/annotation_json.hpp"

namespace slopelink {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<MessageType, std::string_view>, 11> kMessageNames{{
    {MessageType::kHello, "HELLO"},
    {MessageType::kWelcome, "WELCOME"},
    {MessageType::kSnapshot, "SNAPSHOT"},
    {MessageType::kAnnotationUpsert, "ANNOTATION_UPSERT"},
    {MessageType::kAnnotationDelete, "ANNOTATION_DELETE"},
    {MessageType::kPose, "POSE"},
    {MessageType::kViewState, "VIEW_STATE"},
    {MessageType::kAlert, "ALERT"},
    {MessageType::kError, "ERROR"},
    {MessageType::kPing, "PING"},
    {MessageType::kPong, "PONG"},
}};

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw BadMessage(std::string("missing field '") + key + "'");
  }
  const json& v = j.at(key);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw BadMessage(std::string(key) + " must be a string");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw BadMessage(std::string(key) + " must be an integer");
  } else {
    if (!v.is_number()) throw BadMessage(std::string(key) + " must be a number");
  }
  return v.get<T>();
}

}  // namespace

std::string_view to_string(MessageType type) {
  for (const auto& [t, name] : kMessageNames) {
    if (t == type) return name;
  }
  return "UNKNOWN";
}

std::optional<MessageType> parse_message_type(std::string_view text) {
  for (const auto& [t, name] : kMessageNames) {
    if (name == text) return t;
  }
  return std::nullopt;
}

std::string_view to_string(Role role) { return role == Role::kGuide ? "guide" : "skier"; }

std::optional<Role> parse_role(std::string_view text) {
  if (text == "guide") return Role::kGuide;
  if (text == "skier") return Role::kSkier;
  return std::nullopt;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kRoleForbidden: return "ROLE_FORBIDDEN";
    case ErrorCode::kTerrainMismatch: return "TERRAIN_MISMATCH";
    case ErrorCode::kBadMessage: return "BAD_MESSAGE";
    case ErrorCode::kGuideTaken: return "GUIDE_TAKEN";
  }
  return "UNKNOWN";
}

json envelope_to_json(const Envelope& e) {
  return {{"v", e.v},
          {"type", std::string(to_string(e.type))},
          {"seq", e.seq},
          {"session_id", e.session_id},
          {"sender_id", e.sender_id},
          {"t_ms", e.t_ms},
          {"payload", e.payload}};
}

Envelope envelope_from_json(const json& j) {
  if (!j.is_object()) throw BadMessage("envelope must be an object");
  Envelope e;
  e.v = field<int>(j, "v");
  if (e.v != kProtocolVersion) {
    throw BadMessage("unsupported protocol version " + std::to_string(e.v));
  }
  const auto type = parse_message_type(field<std::string>(j, "type"));
  if (!type) throw BadMessage("unknown message type");
  e.type = *type;
  e.seq = field<std::int64_t>(j, "seq");
  if (e.seq < 1) throw BadMessage("seq must be >= 1");
  e.session_id = field<std::string>(j, "session_id");
  e.sender_id = field<std::string>(j, "sender_id");
  e.t_ms = field<std::int64_t>(j, "t_ms");
  if (!j.contains("payload") || !j.at("payload").is_object()) {
    throw BadMessage("payload must be an object");
  }
  e.payload = j.at("payload");
  return e;
}

std::string encode(const Envelope& e) { return envelope_to_json(e).dump(); }

Envelope decode(std::string_view frame) {
  json j = json::parse(frame.begin(), frame.end(), nullptr, false);
  if (j.is_discarded()) throw BadMessage("frame is not valid JSON");
  return envelope_from_json(j);
}

json pose_to_json(const Pose& pose) {
  return {{"x", pose.position.x}, {"y", pose.position.y}, {"z", pose.position.z},
          {"yaw", pose.yaw},      {"pitch", pose.pitch},  {"hfov", pose.hfov},
          {"aspect", pose.aspect}};
}

Pose pose_from_json(const json& j) {
  Pose pose;
  pose.position = {field<double>(j, "x"), field<double>(j, "y"), field<double>(j, "z")};
  pose.yaw = field<double>(j, "yaw");
  pose.pitch = field<double>(j, "pitch");
  if (j.contains("hfov")) pose.hfov = field<double>(j, "hfov");
  if (j.contains("aspect")) pose.aspect = field<double>(j, "aspect");
  try {
    check_pose(pose);
  } catch (const std::invalid_argument& e) {
    throw BadMessage(e.what());
  }
  return pose;
}

json overlay_to_json(const Overlay& o) {
  return {{"annotation_id", o.annotation_id},
          {"anchor_world", {{"x", o.anchor_world.x}, {"y", o.anchor_world.y}, {"z", o.anchor_world.z}}},
          {"screen_u", o.screen_u},
          {"screen_v", o.screen_v},
          {"distance", o.distance},
          {"priority", o.priority},
          {"kind", std::string(to_string(o.kind))}};
}

json overlay_set_to_json(const OverlaySet& set) {
  json overlays = json::array();
  for (const Overlay& o : set.overlays) overlays.push_back(overlay_to_json(o));
  return {{"pose", pose_to_json(set.pose)}, {"budget", set.budget}, {"overlays", std::move(overlays)}};
}

json alert_to_json(const AlertEvent& a) {
  return {{"kind", std::string(to_string(a.kind))},
          {"annotation_id", a.annotation_id},
          {"skier_id", a.skier_id},
          {"timestamp", a.timestamp},
          {"detail", a.detail}};
}

AlertEvent alert_from_json(const json& j) {
  AlertEvent a;
  const auto kind = parse_alert_kind(field<std::string>(j, "kind"));
  if (!kind) throw BadMessage("unknown alert kind");
  a.kind = *kind;
  a.annotation_id = field<std::string>(j, "annotation_id");
  a.skier_id = field<std::string>(j, "skier_id");
  a.timestamp = field<std::int64_t>(j, "timestamp");
  a.detail = field<std::string>(j, "detail");
  return a;
}

std::vector<Envelope> read_event_log(std::istream& in) {
  std::vector<Envelope> log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      log.push_back(decode(line));
    } catch (const BadMessage& e) {
      throw CorruptLog("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return log;
}

std::vector<Envelope> read_event_log_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorruptLog("cannot open event log " + path.string());
  return read_event_log(in);
}

void append_event_log(std::ostream& out, const Envelope& e) { out << encode(e) << '\n'; }

}  // namespace slopelink
