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

#include "slopelink/annotation.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace slopelink {

std::string_view to_string(AnnotationKind kind) {
  switch (kind) {
    case AnnotationKind::kHazard: return "hazard";
    case AnnotationKind::kSlowZone: return "slowzone";
    case AnnotationKind::kSafeZone: return "safezone";
  }
  return "unknown";
}

std::optional<AnnotationKind> parse_annotation_kind(std::string_view text) {
  if (text == "hazard") return AnnotationKind::kHazard;
  if (text == "slowzone") return AnnotationKind::kSlowZone;
  if (text == "safezone") return AnnotationKind::kSafeZone;
  return std::nullopt;
}

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::kEmptyId: return "EmptyId";
    case Violation::kInvalidRevision: return "InvalidRevision";
    case Violation::kGeometryKindMismatch: return "GeometryKindMismatch";
    case Violation::kNonFiniteCoordinate: return "NonFiniteCoordinate";
    case Violation::kTooFewVertices: return "TooFewVertices";
    case Violation::kSelfIntersecting: return "SelfIntersecting";
    case Violation::kZeroArea: return "ZeroArea";
    case Violation::kOutOfTerrainBounds: return "OutOfTerrainBounds";
    case Violation::kNonPositiveRadius: return "NonPositiveRadius";
    case Violation::kMissingSpeedLimit: return "MissingSpeedLimit";
    case Violation::kUnexpectedSpeedLimit: return "UnexpectedSpeedLimit";
    case Violation::kNonPositiveSpeedLimit: return "NonPositiveSpeedLimit";
  }
  return "Unknown";
}

std::vector<Violation> validate_annotation(const Annotation& a, const TerrainGrid& grid) {
  std::vector<Violation> out;
  if (a.deleted) return out;

  if (a.id.empty()) out.push_back(Violation::kEmptyId);
  if (a.revision < 1) out.push_back(Violation::kInvalidRevision);

  if (a.kind == AnnotationKind::kSlowZone) {
    if (!a.speed_limit) {
      out.push_back(Violation::kMissingSpeedLimit);
    } else if (!(*a.speed_limit > 0.0) || !std::isfinite(*a.speed_limit)) {
      out.push_back(Violation::kNonPositiveSpeedLimit);
    }
  } else if (a.speed_limit) {
    out.push_back(Violation::kUnexpectedSpeedLimit);
  }

  if (const auto* hp = a.point()) {
    if (a.is_zone()) out.push_back(Violation::kGeometryKindMismatch);
    if (!std::isfinite(hp->x) || !std::isfinite(hp->y) || !std::isfinite(hp->radius)) {
      out.push_back(Violation::kNonFiniteCoordinate);
      return out;
    }
    if (!(hp->radius > 0.0)) out.push_back(Violation::kNonPositiveRadius);
    if (!grid.contains(hp->x, hp->y)) out.push_back(Violation::kOutOfTerrainBounds);
    return out;
  }

  const Polygon& poly = *a.polygon();
  if (!a.is_zone()) out.push_back(Violation::kGeometryKindMismatch);
  if (!std::all_of(poly.begin(), poly.end(), [](Vec2 v) {
        return std::isfinite(v.x) && std::isfinite(v.y);
      })) {
    out.push_back(Violation::kNonFiniteCoordinate);
    return out;
  }
  if (poly.size() < 3) {
    out.push_back(Violation::kTooFewVertices);
  } else {
    // Signed area is meaningless for a crossing ring (a bow-tie sums to 0).
    if (has_self_intersection(poly)) {
      out.push_back(Violation::kSelfIntersecting);
    } else if (signed_area(poly) == 0.0) {
      out.push_back(Violation::kZeroArea);
    }
  }
  if (!std::all_of(poly.begin(), poly.end(), [&](Vec2 v) { return grid.contains(v.x, v.y); })) {
    out.push_back(Violation::kOutOfTerrainBounds);
  }
  return out;
}

DrapedOutline drape(const Annotation& a, const TerrainGrid& grid) {
  if (a.deleted) throw InvalidAnnotation("cannot drape tombstone '" + a.id + "'");
  if (const auto violations = validate_annotation(a, grid); !violations.empty()) {
    throw InvalidAnnotation("annotation '" + a.id + "' is invalid: " +
                            std::string(to_string(violations.front())));
  }

  DrapedOutline out{a.id, {}, false};
  if (const auto* hp = a.point()) {
    out.points.push_back(snap_to_surface(grid, hp->x, hp->y, kDrapeLift));
    return out;
  }

  const Polygon& poly = *a.polygon();
  out.closed = true;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 from = poly[i];
    const Vec2 to = poly[(i + 1) % n];
    const double length = std::hypot(to.x - from.x, to.y - from.y);
    const int pieces = std::max(1, static_cast<int>(std::ceil(length / kDrapeSpacing)));
    for (int k = 0; k < pieces; ++k) {
      const double t = static_cast<double>(k) / pieces;
      out.points.push_back(snap_to_surface(grid, from.x + t * (to.x - from.x),
                                           from.y + t * (to.y - from.y), kDrapeLift));
    }
  }
  return out;
}

bool AnnotationStore::merge(const Annotation& incoming) {
  auto it = entries_.find(incoming.id);
  if (it == entries_.end()) {
    entries_.emplace(incoming.id, incoming);
    return true;
  }
  const Annotation& stored = it->second;
  if (std::tie(incoming.revision, incoming.author_id) >
      std::tie(stored.revision, stored.author_id)) {
    it->second = incoming;
    return true;
  }
  return false;
}

const Annotation* AnnotationStore::find(std::string_view id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<Annotation> AnnotationStore::live() const {
  std::vector<Annotation> out;
  for (const auto& [id, a] : entries_) {
    if (!a.deleted) out.push_back(a);
  }
  return out;
}

}  // namespace slopelink
