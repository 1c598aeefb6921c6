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

#include "slopelink/session.hpp"

#include <fmt/format.h>

#include <stdexcept>
#include <utility>

#include "slopelink/annotation_json.hpp"

namespace slopelink {
namespace {

using nlohmann::json;

bool is_client_type(MessageType type) {
  switch (type) {
    case MessageType::kHello:
    case MessageType::kAnnotationUpsert:
    case MessageType::kAnnotationDelete:
    case MessageType::kPose:
    case MessageType::kPing:
      return true;
    default:
      return false;
  }
}

json snapshot_payload(const SessionState& s) {
  json list = json::array();
  for (const Annotation& a : s.store.live()) list.push_back(annotation_to_json(a));
  return {{"terrain_ref", s.terrain_ref}, {"annotations", std::move(list)}};
}

}  // namespace

Session::Session(std::shared_ptr<const TerrainGrid> grid, std::string terrain_ref,
                 SessionConfig config, AnnotationStore initial)
    : grid_(std::move(grid)), config_(std::move(config)) {
  if (!grid_) throw std::invalid_argument("session needs a terrain");
  state_.session_id = config_.session_id;
  state_.terrain_ref = std::move(terrain_ref);
  state_.store = std::move(initial);
}

const std::string* Session::guide_id() const {
  for (const auto& [id, role] : state_.roles) {
    if (role == Role::kGuide) return &id;
  }
  return nullptr;
}

void Session::mark_disconnected(std::string_view sender_id) {
  if (state_.roles.contains(sender_id)) disconnected_.emplace(sender_id);
}

bool Session::is_connected(std::string_view sender_id) const {
  return state_.roles.contains(sender_id) && !disconnected_.contains(sender_id);
}

Envelope Session::make(MessageType type, std::int64_t t_ms, json payload) {
  Envelope e;
  e.type = type;
  e.seq = ++server_seq_;
  e.session_id = state_.session_id;
  e.sender_id = std::string(kServerSenderId);
  e.t_ms = t_ms;
  e.payload = std::move(payload);
  return e;
}

Outbound Session::error_reply(const Envelope& msg, ErrorCode code, std::string message,
                              bool close) {
  json payload = {{"code", std::string(to_string(code))},
                  {"message", std::move(message)},
                  {"ref_seq", msg.seq}};
  return {"", make(MessageType::kError, msg.t_ms, std::move(payload)), close};
}

void Session::accept(const Envelope& msg, const std::string& sender) {
  state_.last_seq[sender] = msg.seq;
  state_.log.push_back(msg);
}

std::vector<Outbound> Session::handle_frame(std::string_view frame) {
  Envelope probe;
  probe.seq = 0;
  json j = json::parse(frame.begin(), frame.end(), nullptr, false);
  if (j.is_discarded()) {
    return {error_reply(probe, ErrorCode::kBadMessage, "frame is not valid JSON")};
  }
  if (j.is_object() && j.contains("seq") && j.at("seq").is_number_integer()) {
    probe.seq = j.at("seq").get<std::int64_t>();
  }
  if (j.is_object() && j.contains("t_ms") && j.at("t_ms").is_number_integer()) {
    probe.t_ms = j.at("t_ms").get<std::int64_t>();
  }
  if (j.is_object() && j.contains("v") && j.at("v") != kProtocolVersion) {
    return {error_reply(probe, ErrorCode::kBadMessage, "unsupported protocol version", true)};
  }
  Envelope msg;
  try {
    msg = envelope_from_json(j);
  } catch (const BadMessage& e) {
    return {error_reply(probe, ErrorCode::kBadMessage, e.what())};
  }
  return handle(msg);
}

std::vector<Outbound> Session::handle(const Envelope& msg) {
  if (msg.v != kProtocolVersion) {
    return {error_reply(msg, ErrorCode::kBadMessage, "unsupported protocol version", true)};
  }
  if (!msg.session_id.empty() && msg.session_id != state_.session_id) {
    return {error_reply(msg, ErrorCode::kBadMessage, "unknown session '" + msg.session_id + "'")};
  }
  if (!is_client_type(msg.type)) {
    return {error_reply(msg, ErrorCode::kBadMessage,
                        fmt::format("{} is server-only", to_string(msg.type)))};
  }
  if (msg.type == MessageType::kPing) {
    return {{"", make(MessageType::kPong, msg.t_ms, {{"ref_seq", msg.seq}}), false}};
  }
  if (msg.type == MessageType::kHello) return on_hello(msg);

  if (!state_.roles.contains(msg.sender_id)) {
    return {error_reply(msg, ErrorCode::kBadMessage, "HELLO required before other messages")};
  }
  if (auto it = state_.last_seq.find(msg.sender_id);
      it != state_.last_seq.end() && msg.seq <= it->second) {
    return {};  // redelivery
  }
  if (msg.type == MessageType::kPose) return on_pose(msg);
  return on_annotation(msg);
}

std::vector<Outbound> Session::on_hello(const Envelope& msg) {
  std::optional<Role> role;
  std::string terrain_hash;
  if (msg.payload.contains("role") && msg.payload.at("role").is_string()) {
    role = parse_role(msg.payload.at("role").get<std::string>());
  }
  if (msg.payload.contains("terrain_hash") && msg.payload.at("terrain_hash").is_string()) {
    terrain_hash = msg.payload.at("terrain_hash").get<std::string>();
  }
  if (!role) return {error_reply(msg, ErrorCode::kBadMessage, "HELLO needs role guide|skier")};
  if (terrain_hash != state_.terrain_ref) {
    return {error_reply(msg, ErrorCode::kTerrainMismatch,
                        "client terrain differs from session terrain " + state_.terrain_ref)};
  }
  if (msg.sender_id == kServerSenderId) {
    return {error_reply(msg, ErrorCode::kBadMessage, "sender id is reserved")};
  }

  std::string id = msg.sender_id;
  const std::string* guide = guide_id();
  if (!id.empty() && state_.roles.contains(id)) {
    if (msg.seq <= state_.last_seq[id]) return {};
    if (state_.roles.at(id) != *role) {
      return {error_reply(msg, ErrorCode::kRoleForbidden, "sender already joined as " +
                                                              std::string(to_string(state_.roles.at(id))))};
    }
  } else {
    if (*role == Role::kGuide && guide) {
      return {error_reply(msg, ErrorCode::kGuideTaken, "session already has guide " + *guide)};
    }
    if (id.empty()) {
      do {
        id = fmt::format("{}-{}", to_string(*role), state_.next_client_index++);
      } while (state_.roles.contains(id));
    }
    state_.roles.emplace(id, *role);
    if (*role == Role::kSkier) {
      SkierTrack track;
      track.skier_id = id;
      state_.tracks.emplace(id, std::move(track));
    }
  }
  disconnected_.erase(id);
  accept(msg, id);

  std::vector<Outbound> out;
  out.push_back({"", make(MessageType::kWelcome, msg.t_ms,
                          {{"sender_id", id},
                           {"role", std::string(to_string(*role))},
                           {"session_id", state_.session_id},
                           {"budget", config_.view.budget}})});
  out.push_back({"", make(MessageType::kSnapshot, msg.t_ms, snapshot_payload(state_))});
  return out;
}

std::vector<Outbound> Session::on_annotation(const Envelope& msg) {
  if (state_.roles.at(msg.sender_id) != Role::kGuide) {
    return {error_reply(msg, ErrorCode::kRoleForbidden, "only the guide edits annotations")};
  }
  Annotation a;
  try {
    if (!msg.payload.contains("annotation")) throw AnnotationFormatError("missing 'annotation'");
    a = annotation_from_json(msg.payload.at("annotation"));
  } catch (const AnnotationFormatError& e) {
    return {error_reply(msg, ErrorCode::kBadMessage, e.what())};
  }
  if (msg.type == MessageType::kAnnotationDelete) a.deleted = true;
  if (const auto violations = validate_annotation(a, *grid_); !violations.empty()) {
    std::string names;
    for (Violation v : violations) {
      if (!names.empty()) names += ", ";
      names += to_string(v);
    }
    return {error_reply(msg, ErrorCode::kBadMessage, "invalid annotation: " + names)};
  }

  accept(msg, msg.sender_id);
  if (!state_.store.merge(a)) return {};

  std::vector<Outbound> out;
  const json payload = {{"annotation", annotation_to_json(a)}};
  for (const auto& [id, role] : state_.roles) {
    out.push_back({id, make(msg.type, msg.t_ms, payload)});
  }
  return out;
}

std::vector<Outbound> Session::on_pose(const Envelope& msg) {
  if (state_.roles.at(msg.sender_id) != Role::kSkier) {
    return {error_reply(msg, ErrorCode::kRoleForbidden, "only skiers report poses")};
  }
  Pose pose;
  double speed = 0.0;
  try {
    if (!msg.payload.contains("pose")) throw BadMessage("missing 'pose'");
    pose = pose_from_json(msg.payload.at("pose"));
    if (!msg.payload.contains("speed") || !msg.payload.at("speed").is_number()) {
      throw BadMessage("missing numeric 'speed'");
    }
    speed = msg.payload.at("speed").get<double>();
  } catch (const BadMessage& e) {
    return {error_reply(msg, ErrorCode::kBadMessage, e.what())};
  }

  const SkierTrack& track = state_.tracks.at(msg.sender_id);
  AlertStep step;
  OverlaySet view;
  try {
    step = step_alerts(track, state_.store, *grid_, pose, speed, msg.t_ms, config_.alerts);
    view = compute_overlays(state_.store, *grid_, pose, config_.view);
  } catch (const TerrainError& e) {
    return {error_reply(msg, ErrorCode::kBadMessage, e.what())};
  } catch (const std::invalid_argument& e) {
    return {error_reply(msg, ErrorCode::kBadMessage, e.what())};
  }

  accept(msg, msg.sender_id);
  state_.tracks.at(msg.sender_id) = std::move(step.track);
  state_.alerts.insert(state_.alerts.end(), step.events.begin(), step.events.end());

  std::vector<Outbound> out;
  const std::string* guide = guide_id();
  json view_payload = overlay_set_to_json(view);
  view_payload["skier_id"] = msg.sender_id;
  view_payload["speed"] = speed;
  out.push_back({"", make(MessageType::kViewState, msg.t_ms, view_payload)});
  if (guide) out.push_back({*guide, make(MessageType::kViewState, msg.t_ms, view_payload)});
  for (const AlertEvent& event : step.events) {
    const json payload = alert_to_json(event);
    out.push_back({"", make(MessageType::kAlert, msg.t_ms, payload)});
    if (guide) out.push_back({*guide, make(MessageType::kAlert, msg.t_ms, payload)});
  }
  return out;
}

Session replay_log(std::span<const Envelope> log, std::shared_ptr<const TerrainGrid> grid,
                   std::string terrain_ref, SessionConfig config, AnnotationStore initial) {
  Session session(std::move(grid), std::move(terrain_ref), std::move(config), std::move(initial));
  std::map<std::string, std::int64_t, std::less<>> seen;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const Envelope& e = log[i];
    if (!e.sender_id.empty()) {
      auto it = seen.find(e.sender_id);
      if (it != seen.end() && e.seq <= it->second) {
        throw CorruptLog(fmt::format("entry {}: seq {} from '{}' does not increase", i, e.seq,
                                     e.sender_id));
      }
      seen[e.sender_id] = e.seq;
    }
    const std::size_t before = session.log().size();
    session.handle(e);
    if (session.log().size() != before + 1) {
      throw CorruptLog(fmt::format("entry {} ({} from '{}') was rejected on replay", i,
                                   to_string(e.type), e.sender_id));
    }
  }
  return session;
}

void ClientMirror::apply(const Envelope& msg) {
  switch (msg.type) {
    case MessageType::kWelcome:
      sender_id_ = msg.payload.value("sender_id", "");
      break;
    case MessageType::kSnapshot: {
      AnnotationStore fresh;
      for (const json& a : msg.payload.at("annotations")) fresh.merge(annotation_from_json(a));
      store_ = std::move(fresh);
      break;
    }
    case MessageType::kAnnotationUpsert:
    case MessageType::kAnnotationDelete:
      store_.merge(annotation_from_json(msg.payload.at("annotation")));
      break;
    case MessageType::kViewState:
      view_states_[msg.payload.value("skier_id", "")] = msg.payload;
      break;
    case MessageType::kAlert:
      alerts_.push_back(alert_from_json(msg.payload));
      break;
    case MessageType::kError:
      errors_.push_back(msg.payload.value("code", ""));
      break;
    default:
      break;
  }
}

}  // namespace slopelink
