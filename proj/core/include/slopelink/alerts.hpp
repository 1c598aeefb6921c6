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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "slopelink/annotation.hpp"
#include "slopelink/terrain.hpp"
#include "slopelink/viewmodel.hpp"

namespace slopelink {

enum class AlertKind {
  kHazardProximity,
  kSlowZoneEntered,
  kSlowZoneExited,
  kSpeedExceeded,
  kSafeZoneArrived,
};

std::string_view to_string(AlertKind kind);
std::optional<AlertKind> parse_alert_kind(std::string_view text);

struct AlertEvent {
  AlertKind kind = AlertKind::kHazardProximity;
  std::string annotation_id;
  std::string skier_id;
  std::int64_t timestamp = 0;  // unix ms
  std::string detail;

  friend bool operator==(const AlertEvent&, const AlertEvent&) = default;
};

struct SkierTrack {
  std::string skier_id;
  Pose pose;
  double speed = 0.0;
  std::int64_t timestamp = 0;
  std::set<std::string, std::less<>> membership;  // zone ids currently inside
  std::map<std::string, std::int64_t, std::less<>> last_alert_at;

  friend bool operator==(const SkierTrack&, const SkierTrack&) = default;
};

struct AlertConfig {
  /// A member zone is left only once the skier is outside and at least this
  /// far from its boundary.
  double hysteresis_margin = 2.0;
  /// Minimum spacing between rate-limited alerts for one annotation.
  std::int64_t cooldown_ms = 10'000;
};

struct AlertStep {
  SkierTrack track;
  std::vector<AlertEvent> events;
};

/// Advances one skier by one pose sample. Events are ordered: zone
/// transitions, then hazard proximity, then speeding, each by annotation id.
AlertStep step_alerts(const SkierTrack& track, const AnnotationStore& store,
                      const TerrainGrid& grid, const Pose& new_pose, double new_speed,
                      std::int64_t t, const AlertConfig& config = {});

}  // namespace slopelink
