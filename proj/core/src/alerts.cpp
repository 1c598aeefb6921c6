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

#include "slopelink/alerts.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace slopelink {

std::string_view to_string(AlertKind kind) {
  switch (kind) {
    case AlertKind::kHazardProximity: return "HazardProximity";
    case AlertKind::kSlowZoneEntered: return "SlowZoneEntered";
    case AlertKind::kSlowZoneExited: return "SlowZoneExited";
    case AlertKind::kSpeedExceeded: return "SpeedExceeded";
    case AlertKind::kSafeZoneArrived: return "SafeZoneArrived";
  }
  return "Unknown";
}

std::optional<AlertKind> parse_alert_kind(std::string_view text) {
  for (auto kind : {AlertKind::kHazardProximity, AlertKind::kSlowZoneEntered,
                    AlertKind::kSlowZoneExited, AlertKind::kSpeedExceeded,
                    AlertKind::kSafeZoneArrived}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

AlertStep step_alerts(const SkierTrack& track, const AnnotationStore& store,
                      const TerrainGrid& grid, const Pose& new_pose, double new_speed,
                      std::int64_t t, const AlertConfig& config) {
  if (t < track.timestamp) {
    throw std::invalid_argument(
        fmt::format("pose time {} precedes track time {}", t, track.timestamp));
  }
  if (!std::isfinite(new_speed) || new_speed < 0.0) {
    throw std::invalid_argument("speed must be finite and non-negative");
  }
  const Vec2 p{new_pose.position.x, new_pose.position.y};
  if (!grid.contains(p.x, p.y)) {
    throw TerrainError(TerrainErrc::kOutOfBounds,
                       fmt::format("skier at ({}, {}) is outside the terrain", p.x, p.y));
  }

  AlertStep out{track, {}};
  SkierTrack& next = out.track;
  next.pose = new_pose;
  next.speed = new_speed;
  next.timestamp = t;

  auto emit = [&](AlertKind kind, const std::string& id, std::string detail) {
    out.events.push_back({kind, id, track.skier_id, t, std::move(detail)});
  };
  auto cooled_down = [&](const std::string& id) {
    auto it = next.last_alert_at.find(id);
    return it == next.last_alert_at.end() || t - it->second >= config.cooldown_ms;
  };

  // Forget zones that were deleted since the last step.
  std::erase_if(next.membership, [&](const std::string& id) {
    const Annotation* a = store.find(id);
    return a == nullptr || a->deleted || !a->is_zone();
  });

  for (const auto& [id, a] : store.entries()) {
    if (a.deleted || !a.is_zone()) continue;
    const Polygon& poly = *a.polygon();
    const bool member = next.membership.contains(id);
    if (!member && point_in_polygon(p, poly)) {
      next.membership.insert(id);
      if (a.kind == AnnotationKind::kSlowZone) {
        emit(AlertKind::kSlowZoneEntered, id,
             fmt::format("entered '{}' (limit {:.1f} m/s)", a.label, a.speed_limit.value_or(0.0)));
      } else {
        emit(AlertKind::kSafeZoneArrived, id, fmt::format("arrived at '{}'", a.label));
      }
    } else if (member && !point_in_polygon(p, poly) &&
               distance_to_boundary(p, poly) >= config.hysteresis_margin) {
      next.membership.erase(id);
      if (a.kind == AnnotationKind::kSlowZone) {
        emit(AlertKind::kSlowZoneExited, id, fmt::format("left '{}'", a.label));
      }
    }
  }

  for (const auto& [id, a] : store.entries()) {
    if (a.deleted || a.kind != AnnotationKind::kHazard) continue;
    const HazardPoint& hp = *a.point();
    const double d = std::hypot(p.x - hp.x, p.y - hp.y);
    if (d <= hp.radius && cooled_down(id)) {
      next.last_alert_at[id] = t;
      emit(AlertKind::kHazardProximity, id,
           fmt::format("'{}' {:.1f} m away (radius {:.1f} m)", a.label, d, hp.radius));
    }
  }

  for (const auto& [id, a] : store.entries()) {
    if (a.deleted || a.kind != AnnotationKind::kSlowZone || !next.membership.contains(id)) {
      continue;
    }
    const double limit = a.speed_limit.value_or(0.0);
    if (new_speed > limit && cooled_down(id)) {
      next.last_alert_at[id] = t;
      emit(AlertKind::kSpeedExceeded, id,
           fmt::format("{:.1f} m/s in '{}' (limit {:.1f} m/s)", new_speed, a.label, limit));
    }
  }
  return out;
}

}  // namespace slopelink
