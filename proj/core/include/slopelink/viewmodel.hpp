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

#include <numbers>
#include <string>
#include <vector>

#include "slopelink/annotation.hpp"
#include "slopelink/terrain.hpp"

namespace slopelink {

/// Skier eye pose. yaw 0 faces +X (east), counter-clockwise positive seen
/// from above; pitch is positive up.
struct Pose {
  WorldPoint position;
  double yaw = 0.0;
  double pitch = 0.0;
  double hfov = std::numbers::pi / 2.0;
  double aspect = 16.0 / 9.0;

  double vfov() const;
  friend bool operator==(const Pose&, const Pose&) = default;
};

/// Throws std::invalid_argument if pitch, hfov, or aspect is out of range.
void check_pose(const Pose& pose);

struct Projection {
  double u = 0.0;  // 0 = left edge
  double v = 0.0;  // 0 = top edge
  bool in_frustum = false;
};

struct Overlay {
  std::string annotation_id;
  WorldPoint anchor_world;
  double screen_u = 0.0;
  double screen_v = 0.0;
  double distance = 0.0;
  int priority = 0;
  AnnotationKind kind = AnnotationKind::kHazard;

  friend bool operator==(const Overlay&, const Overlay&) = default;
};

struct OverlaySet {
  Pose pose;
  std::vector<Overlay> overlays;  // priority desc, distance asc, id asc
  int budget = 0;

  friend bool operator==(const OverlaySet&, const OverlaySet&) = default;
};

struct ViewConfig {
  int budget = 5;
  double near_plane = 0.1;
  double view_distance = 2000.0;
  OcclusionOptions occlusion;
};

/// Hazard = 3, SlowZone = 2, SafeZone = 1.
int priority_of(AnnotationKind kind);

/// Hazards anchor at their lifted surface point; zones at the draped
/// boundary sample closest to the pose in XY.
WorldPoint anchor_point(const Annotation& a, const TerrainGrid& grid, const Pose& pose);

Projection project(const Pose& pose, const WorldPoint& p, double near_plane = 0.1);

/// Strict weak order used for overlay ranking.
bool overlay_before(const Overlay& a, const Overlay& b);

OverlaySet compute_overlays(const AnnotationStore& store, const TerrainGrid& grid,
                            const Pose& pose, const ViewConfig& config = {});

}  // namespace slopelink
