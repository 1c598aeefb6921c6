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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "slopelink/alerts.hpp"
#include "slopelink/viewmodel.hpp"

namespace slopelink {

inline constexpr int kProtocolVersion = 1;

enum class MessageType {
  kHello,
  kWelcome,
  kSnapshot,
  kAnnotationUpsert,
  kAnnotationDelete,
  kPose,
  kViewState,
  kAlert,
  kError,
  kPing,
  kPong,
};

std::string_view to_string(MessageType type);
std::optional<MessageType> parse_message_type(std::string_view text);

enum class Role { kGuide, kSkier };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

/// Codes carried in ERROR payloads.
enum class ErrorCode { kRoleForbidden, kTerrainMismatch, kBadMessage, kGuideTaken };

std::string_view to_string(ErrorCode code);

struct Envelope {
  int v = kProtocolVersion;
  MessageType type = MessageType::kPing;
  std::int64_t seq = 0;
  std::string session_id;
  std::string sender_id;
  std::int64_t t_ms = 0;
  nlohmann::json payload = nlohmann::json::object();

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

/// The frame does not decode to a well-formed Envelope.
class BadMessage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json envelope_to_json(const Envelope& e);
/// Throws BadMessage. A wrong version is reported the same way.
Envelope envelope_from_json(const nlohmann::json& j);
std::string encode(const Envelope& e);
Envelope decode(std::string_view frame);

nlohmann::json pose_to_json(const Pose& pose);
Pose pose_from_json(const nlohmann::json& j);
nlohmann::json overlay_to_json(const Overlay& overlay);
nlohmann::json overlay_set_to_json(const OverlaySet& set);
nlohmann::json alert_to_json(const AlertEvent& event);
AlertEvent alert_from_json(const nlohmann::json& j);

/// The event log is corrupt or does not replay.
class CorruptLog : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON Lines, one accepted Envelope per line.
std::vector<Envelope> read_event_log(std::istream& in);
std::vector<Envelope> read_event_log_file(const std::filesystem::path& path);
void append_event_log(std::ostream& out, const Envelope& e);

}  // namespace slopelink
