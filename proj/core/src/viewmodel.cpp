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

#include "slopelink/viewmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace slopelink {
namespace {

struct Vec3 {
  double x, y, z;
};

Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
Vec3 normalize(Vec3 a) { return (1.0 / std::sqrt(dot(a, a))) * a; }

// Screen edges are inclusive; this absorbs tan() rounding at exactly 45 degrees.
constexpr double kScreenSlack = 1e-9;

}  // namespace

double Pose::vfov() const { return 2.0 * std::atan(std::tan(hfov / 2.0) / aspect); }

void check_pose(const Pose& pose) {
  if (!std::isfinite(pose.position.x) || !std::isfinite(pose.position.y) ||
      !std::isfinite(pose.position.z) || !std::isfinite(pose.yaw)) {
    throw std::invalid_argument("pose has non-finite components");
  }
  if (!(std::abs(pose.pitch) < std::numbers::pi / 2.0)) {
    throw std::invalid_argument("pitch must be within (-pi/2, pi/2)");
  }
  if (!(pose.hfov > 0.0 && pose.hfov < std::numbers::pi)) {
    throw std::invalid_argument("hfov must be within (0, pi)");
  }
  if (!(pose.aspect > 0.0) || !std::isfinite(pose.aspect)) {
    throw std::invalid_argument("aspect must be positive");
  }
}

int priority_of(AnnotationKind kind) {
  switch (kind) {
    case AnnotationKind::kHazard: return 3;
    case AnnotationKind::kSlowZone: return 2;
    case AnnotationKind::kSafeZone: return 1;
  }
  return 0;
}

WorldPoint anchor_point(const Annotation& a, const TerrainGrid& grid, const Pose& pose) {
  const DrapedOutline outline = drape(a, grid);
  const WorldPoint* best = &outline.points.front();
  double best_d2 = std::numeric_limits<double>::infinity();
  for (const WorldPoint& p : outline.points) {
    const double dx = p.x - pose.position.x;
    const double dy = p.y - pose.position.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = &p;
    }
  }
  return *best;
}

Projection project(const Pose& pose, const WorldPoint& p, double near_plane) {
  const Vec3 forward{std::cos(pose.pitch) * std::cos(pose.yaw),
                     std::cos(pose.pitch) * std::sin(pose.yaw), std::sin(pose.pitch)};
  const Vec3 world_up{0.0, 0.0, 1.0};
  const Vec3 up = normalize(world_up - dot(world_up, forward) * forward);
  const Vec3 right = cross(forward, up);

  const Vec3 rel = Vec3{p.x, p.y, p.z} - Vec3{pose.position.x, pose.position.y, pose.position.z};
  const double f = dot(rel, forward);
  const double r = dot(rel, right);
  const double h = dot(rel, up);

  const double tan_h = std::tan(pose.hfov / 2.0);
  const double tan_v = tan_h / pose.aspect;

  Projection out;
  if (f <= 0.0) return out;
  out.u = 0.5 + 0.5 * (r / (f * tan_h));
  out.v = 0.5 - 0.5 * (h / (f * tan_v));
  out.in_frustum = f > near_plane && std::abs(out.u - 0.5) <= 0.5 + kScreenSlack &&
                   std::abs(out.v - 0.5) <= 0.5 + kScreenSlack;
  return out;
}

bool overlay_before(const Overlay& a, const Overlay& b) {
  return std::tuple(-a.priority, a.distance, std::string_view(a.annotation_id)) <
         std::tuple(-b.priority, b.distance, std::string_view(b.annotation_id));
}

OverlaySet compute_overlays(const AnnotationStore& store, const TerrainGrid& grid,
                            const Pose& pose, const ViewConfig& config) {
  if (config.budget < 1) throw std::invalid_argument("overlay budget must be >= 1");
  check_pose(pose);
  OverlaySet out{pose, {}, config.budget};
  for (const auto& [id, a] : store.entries()) {
    if (a.deleted) continue;
    const WorldPoint anchor = anchor_point(a, grid, pose);
    const Vec3 rel = Vec3{anchor.x, anchor.y, anchor.z} -
                     Vec3{pose.position.x, pose.position.y, pose.position.z};
    const double distance = std::sqrt(dot(rel, rel));
    if (!(distance > 0.0) || distance > config.view_distance) continue;
    const Projection proj = project(pose, anchor, config.near_plane);
    if (!proj.in_frustum) continue;
    if (!line_of_sight(grid, pose.position, anchor, config.occlusion)) continue;
    out.overlays.push_back(Overlay{id, anchor, std::clamp(proj.u, 0.0, 1.0),
                                   std::clamp(proj.v, 0.0, 1.0), distance, priority_of(a.kind),
                                   a.kind});
  }
  std::sort(out.overlays.begin(), out.overlays.end(), overlay_before);
  if (out.overlays.size() > static_cast<std::size_t>(config.budget)) {
    out.overlays.resize(static_cast<std::size_t>(config.budget));
  }
  return out;
}

}  // namespace slopelink
