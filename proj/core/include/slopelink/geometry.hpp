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

#include <span>
#include <vector>

namespace slopelink {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Ordered vertex ring; the closing edge back to the first vertex is implied.
using Polygon = std::vector<Vec2>;

/// Even-odd membership. Points on the boundary count as inside.
bool point_in_polygon(Vec2 p, std::span<const Vec2> poly);

/// True when segments [a, b] and [c, d] share at least one point.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// True when some pair of edges crosses, touches, or overlaps other than
/// neighbouring edges meeting at their shared vertex. Zero-length edges count
/// as intersections.
bool has_self_intersection(std::span<const Vec2> poly);

/// Shoelace area, positive for counter-clockwise rings.
double signed_area(std::span<const Vec2> poly);

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b);

/// Smallest distance from p to any edge of the ring.
double distance_to_boundary(Vec2 p, std::span<const Vec2> poly);

}  // namespace slopelink
