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
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "slopelink/geometry.hpp"
#include "slopelink/terrain.hpp"

namespace slopelink {

enum class AnnotationKind { kHazard, kSlowZone, kSafeZone };

std::string_view to_string(AnnotationKind kind);
std::optional<AnnotationKind> parse_annotation_kind(std::string_view text);

inline constexpr double kDefaultHazardRadius = 15.0;
inline constexpr double kDrapeLift = 0.3;
inline constexpr double kDrapeSpacing = 2.0;

struct HazardPoint {
  double x = 0.0;
  double y = 0.0;
  double radius = kDefaultHazardRadius;

  friend bool operator==(const HazardPoint&, const HazardPoint&) = default;
};

using Geometry = std::variant<HazardPoint, Polygon>;

struct Annotation {
  std::string id;
  AnnotationKind kind = AnnotationKind::kHazard;
  Geometry geometry;
  std::string label;
  std::optional<double> speed_limit;  // m/s, slow zones only
  std::int64_t revision = 1;
  std::string author_id;
  std::int64_t created_at = 0;  // unix ms
  bool deleted = false;

  bool is_zone() const noexcept { return kind != AnnotationKind::kHazard; }
  const Polygon* polygon() const noexcept { return std::get_if<Polygon>(&geometry); }
  const HazardPoint* point() const noexcept { return std::get_if<HazardPoint>(&geometry); }

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

enum class Violation {
  kEmptyId,
  kInvalidRevision,
  kGeometryKindMismatch,
  kNonFiniteCoordinate,
  kTooFewVertices,
  kSelfIntersecting,
  kZeroArea,
  kOutOfTerrainBounds,
  kNonPositiveRadius,
  kMissingSpeedLimit,
  kUnexpectedSpeedLimit,
  kNonPositiveSpeedLimit,
};

std::string_view to_string(Violation v);

/// Every invariant the annotation breaks against this terrain. Tombstones are
/// always valid.
std::vector<Violation> validate_annotation(const Annotation& a, const TerrainGrid& grid);

class InvalidAnnotation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DrapedOutline {
  std::string annotation_id;
  std::vector<WorldPoint> points;
  bool closed = false;
};

/// Zones: boundary resampled to at most kDrapeSpacing apart and lifted
/// kDrapeLift above the surface. Hazards: the single lifted point.
DrapedOutline drape(const Annotation& a, const TerrainGrid& grid);

/// Last-writer-wins replica keyed by annotation id. Tombstones are kept.
class AnnotationStore {
 public:
  using Entries = std::map<std::string, Annotation, std::less<>>;

  /// Replaces the stored version iff (revision, author_id) of `incoming` is
  /// strictly greater, or the id is new. Returns whether it replaced.
  bool merge(const Annotation& incoming);

  const Annotation* find(std::string_view id) const;
  const Entries& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Non-deleted entries in id order.
  std::vector<Annotation> live() const;

  friend bool operator==(const AnnotationStore&, const AnnotationStore&) = default;

 private:
  Entries entries_;
};

}  // namespace slopelink
