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

#include "slopelink/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slopelink {
namespace {

double cross(Vec2 o, Vec2 a, Vec2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int orientation(Vec2 o, Vec2 a, Vec2 b) {
  const double c = cross(o, a, b);
  return (c > 0.0) - (c < 0.0);
}

// p is known to be collinear with [a, b].
bool within_box(Vec2 p, Vec2 a, Vec2 b) {
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
         p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

bool on_segment(Vec2 p, Vec2 a, Vec2 b) {
  return orientation(a, b, p) == 0 && within_box(p, a, b);
}

}  // namespace

bool point_in_polygon(Vec2 p, std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[j];
    const Vec2 b = poly[i];
    if (on_segment(p, a, b)) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      // Side test without division: which side of edge a->b is p on,
      // normalised by the edge's vertical direction.
      const double side = cross(a, b, p);
      if ((b.y > a.y) ? side > 0.0 : side < 0.0) inside = !inside;
    }
  }
  return inside;
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && within_box(c, a, b)) return true;
  if (o2 == 0 && within_box(d, a, b)) return true;
  if (o3 == 0 && within_box(a, c, d)) return true;
  if (o4 == 0 && within_box(b, c, d)) return true;
  return false;
}

bool has_self_intersection(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  auto at = [&](std::size_t i) { return poly[i % n]; };
  for (std::size_t i = 0; i < n; ++i) {
    if (at(i) == at(i + 1)) return true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = at(i);
    const Vec2 b = at(i + 1);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 c = at(j);
      const Vec2 d = at(j + 1);
      if (j == i + 1) {
        // Shared vertex b == c: only a fold back along the same line counts.
        if (orientation(a, b, d) == 0 && (on_segment(d, a, b) || on_segment(a, c, d))) return true;
      } else if (i == 0 && j == n - 1) {
        // Shared vertex a == d.
        if (orientation(c, d, b) == 0 && (on_segment(b, c, d) || on_segment(c, a, b))) return true;
      } else if (segments_intersect(a, b, c, d)) {
        return true;
      }
    }
  }
  return false;
}

double signed_area(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  double twice = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    twice += poly[j].x * poly[i].y - poly[i].x * poly[j].y;
  }
  return 0.5 * twice;
}

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  const double ex = b.x - a.x;
  const double ey = b.y - a.y;
  const double len2 = ex * ex + ey * ey;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(((p.x - a.x) * ex + (p.y - a.y) * ey) / len2, 0.0, 1.0);
  }
  return std::hypot(p.x - (a.x + t * ex), p.y - (a.y + t * ey));
}

double distance_to_boundary(Vec2 p, std::span<const Vec2> poly) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    best = std::min(best, distance_to_segment(p, poly[j], poly[i]));
  }
  return best;
}

}  // namespace slopelink
