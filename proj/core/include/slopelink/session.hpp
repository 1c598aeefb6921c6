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
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slopelink/alerts.hpp"
#include "slopelink/annotation.hpp"
#include "slopelink/protocol.hpp"
#include "slopelink/terrain.hpp"
#include "slopelink/viewmodel.hpp"

namespace slopelink {

inline constexpr std::string_view kServerSenderId = "server";

struct SessionConfig {
  std::string session_id = "session";
  ViewConfig view;
  AlertConfig alerts;
};

/// Everything that replaying the log must reproduce.
struct SessionState {
  std::string session_id;
  std::string terrain_ref;
  AnnotationStore store;
  std::map<std::string, Role, std::less<>> roles;
  std::map<std::string, SkierTrack, std::less<>> tracks;
  std::map<std::string, std::int64_t, std::less<>> last_seq;
  std::vector<Envelope> log;       // accepted inbound messages, in order
  std::vector<AlertEvent> alerts;  // every alert emitted, in order
  int next_client_index = 1;

  friend bool operator==(const SessionState&, const SessionState&) = default;
};

struct Outbound {
  /// Recipient sender_id. Empty means the connection the inbound message
  /// arrived on (the only address a client has before WELCOME).
  std::string to;
  Envelope envelope;
  bool close_after = false;
};

/// Single-session state machine shared by one guide and any number of
/// skiers. Not thread-safe: the transport must feed messages one at a time.
class Session {
 public:
  Session(std::shared_ptr<const TerrainGrid> grid, std::string terrain_ref,
          SessionConfig config = {}, AnnotationStore initial = {});

  std::vector<Outbound> handle(const Envelope& msg);

  /// Decodes a wire frame first; undecodable frames get ERROR BAD_MESSAGE,
  /// and a protocol version mismatch also asks the transport to close.
  std::vector<Outbound> handle_frame(std::string_view frame);

  void mark_disconnected(std::string_view sender_id);
  bool is_connected(std::string_view sender_id) const;

  const SessionState& state() const noexcept { return state_; }
  const AnnotationStore& store() const noexcept { return state_.store; }
  const std::vector<Envelope>& log() const noexcept { return state_.log; }
  const TerrainGrid& grid() const noexcept { return *grid_; }
  const SessionConfig& config() const noexcept { return config_; }
  const std::string* guide_id() const;

 private:
  std::vector<Outbound> on_hello(const Envelope& msg);
  std::vector<Outbound> on_annotation(const Envelope& msg);
  std::vector<Outbound> on_pose(const Envelope& msg);

  Envelope make(MessageType type, std::int64_t t_ms, nlohmann::json payload);
  Outbound error_reply(const Envelope& msg, ErrorCode code, std::string message,
                       bool close = false);
  void accept(const Envelope& msg, const std::string& sender);

  std::shared_ptr<const TerrainGrid> grid_;
  SessionConfig config_;
  SessionState state_;
  std::set<std::string, std::less<>> disconnected_;
  std::int64_t server_seq_ = 0;
};

/// Rebuilds a session by feeding every logged message through the state
/// machine. Throws CorruptLog on a seq regression or a rejected entry.
Session replay_log(std::span<const Envelope> log, std::shared_ptr<const TerrainGrid> grid,
                   std::string terrain_ref, SessionConfig config = {},
                   AnnotationStore initial = {});

/// Client-side view of a session built only from server messages: the
/// reference for what a guide or skier client displays.
class ClientMirror {
 public:
  void apply(const Envelope& msg);

  const std::string& sender_id() const noexcept { return sender_id_; }
  const AnnotationStore& store() const noexcept { return store_; }
  std::vector<Annotation> live() const { return store_.live(); }
  const std::map<std::string, nlohmann::json, std::less<>>& view_states() const noexcept {
    return view_states_;
  }
  const std::vector<AlertEvent>& alerts() const noexcept { return alerts_; }
  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::string sender_id_;
  AnnotationStore store_;
  std::map<std::string, nlohmann::json, std::less<>> view_states_;
  std::vector<AlertEvent> alerts_;
  std::vector<std::string> errors_;
};

}  // namespace slopelink
