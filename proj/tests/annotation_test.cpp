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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "slopelink/annotation_json.hpp"
#include "support/oracles.hpp"
#include "support/scenes.hpp"

namespace slopelink {
namespace {

using testing::hazard;
using testing::rect;
using testing::zone;

const TerrainGrid& grid100() {
  static const TerrainGrid g = testing::flat_grid(101, 1.0);
  return g;
}

TEST(ValidateAnnotation, ValidSlowZone) {
  const Annotation a = zone("s1", AnnotationKind::kSlowZone, rect(0, 0, 10, 10), 5.0);
  EXPECT_TRUE(validate_annotation(a, grid100()).empty());
}

TEST(ValidateAnnotation, BowTieIsSelfIntersecting) {
  const Polygon bow{{0, 0}, {10, 10}, {10, 0}, {0, 10}};
  ASSERT_TRUE(oracle::crosses_itself(bow));
  const Annotation a = zone("s1", AnnotationKind::kSlowZone, bow, 5.0);
  EXPECT_EQ(validate_annotation(a, grid100()), std::vector{Violation::kSelfIntersecting});
}

TEST(ValidateAnnotation, HazardOutsideTerrain) {
  EXPECT_EQ(validate_annotation(hazard("h", -5, 0), grid100()),
            std::vector{Violation::kOutOfTerrainBounds});
}

TEST(ValidateAnnotation, ReportsEveryViolation) {
  Annotation a = zone("", AnnotationKind::kSafeZone, {{0, 0}, {200, 0}}, std::nullopt, 0);
  a.speed_limit = 3.0;
  const auto v = validate_annotation(a, grid100());
  for (Violation expected : {Violation::kEmptyId, Violation::kInvalidRevision,
                             Violation::kUnexpectedSpeedLimit, Violation::kTooFewVertices,
                             Violation::kOutOfTerrainBounds}) {
    EXPECT_NE(std::find(v.begin(), v.end(), expected), v.end()) << to_string(expected);
  }

  Annotation slow = zone("s", AnnotationKind::kSlowZone, rect(0, 0, 5, 5));
  slow.speed_limit.reset();
  EXPECT_EQ(validate_annotation(slow, grid100()), std::vector{Violation::kMissingSpeedLimit});
  slow.speed_limit = -1.0;
  EXPECT_EQ(validate_annotation(slow, grid100()), std::vector{Violation::kNonPositiveSpeedLimit});

  EXPECT_EQ(validate_annotation(hazard("h", 5, 5, 0.0), grid100()),
            std::vector{Violation::kNonPositiveRadius});

  Annotation mismatched = hazard("h", 5, 5);
  mismatched.geometry = rect(0, 0, 1, 1);
  EXPECT_EQ(validate_annotation(mismatched, grid100()),
            std::vector{Violation::kGeometryKindMismatch});

  // A collinear ring folds back on itself, which is reported as a crossing.
  const Annotation flat = zone("z", AnnotationKind::kSafeZone, {{0, 0}, {1, 1}, {3, 3}});
  EXPECT_EQ(validate_annotation(flat, grid100()), std::vector{Violation::kSelfIntersecting});
}

TEST(ValidateAnnotation, TombstonesAreAlwaysValid) {
  Annotation a = hazard("h", -50, -50);
  a.deleted = true;
  EXPECT_TRUE(validate_annotation(a, grid100()).empty());
}

TEST(ValidateAnnotation, FlagsExactlyWhenOracleFindsCrossing) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    Polygon poly = testing::random_lattice_polygon(rng, 3, 8, 20);
    for (Vec2& v : poly) v = {v.x * 4.0 + 10.0, v.y * 4.0 + 10.0};
    const auto v = validate_annotation(zone("z", AnnotationKind::kSafeZone, poly), grid100());
    const bool flagged = std::find(v.begin(), v.end(), Violation::kSelfIntersecting) != v.end();
    ASSERT_EQ(flagged, oracle::crosses_itself(poly)) << "polygon #" << i;
  }
}

TEST(Drape, HazardIsSingleLiftedPoint) {
  const DrapedOutline d = drape(hazard("h", 10, 10), grid100());
  EXPECT_FALSE(d.closed);
  ASSERT_EQ(d.points.size(), 1u);
  EXPECT_EQ(d.points[0], (WorldPoint{10, 10, 0.3}));
}

TEST(Drape, SquareOnFlatTerrain) {
  const DrapedOutline d =
      drape(zone("s", AnnotationKind::kSafeZone, rect(0, 0, 10, 10)), grid100());
  EXPECT_TRUE(d.closed);
  EXPECT_GE(d.points.size(), 20u);
  for (const WorldPoint& p : d.points) EXPECT_EQ(p.z, 0.3);
}

TEST(Drape, SquareOnPlaneFollowsSurface) {
  const oracle::Plane plane{0.0, 0.1, 0.0};
  const TerrainGrid g = testing::make_grid(41, 41, 1.0, plane);
  const DrapedOutline d = drape(zone("s", AnnotationKind::kSafeZone, rect(5, 5, 15, 15)), g);
  for (const WorldPoint& p : d.points) EXPECT_NEAR(p.z, plane(p.x, p.y) + 0.3, 1e-9);
}

TEST(Drape, RejectsInvalidAndTombstones) {
  EXPECT_THROW(drape(hazard("h", -5, 0), grid100()), InvalidAnnotation);
  Annotation dead = hazard("h", 5, 5);
  dead.deleted = true;
  EXPECT_THROW(drape(dead, grid100()), InvalidAnnotation);
}

TEST(DrapeProperty, SamplesOnSurfaceAndWithinSpacing) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const TerrainGrid g = testing::random_terrain(rng, 61, 2.0);
    for (int i = 0; i < 10; ++i) {
      std::uniform_real_distribution<double> c(30.0, 90.0);
      const Polygon poly = testing::random_star(rng, {c(rng), c(rng)}, 3.0, 25.0);
      const DrapedOutline d = drape(zone("z", AnnotationKind::kSafeZone, poly), g);
      ASSERT_TRUE(d.closed);
      for (std::size_t k = 0; k < d.points.size(); ++k) {
        const WorldPoint& p = d.points[k];
        const WorldPoint& q = d.points[(k + 1) % d.points.size()];
        ASSERT_LE(std::abs(p.z - (elevation_at(g, p.x, p.y) + 0.3)), 1e-6);
        ASSERT_LE(std::hypot(q.x - p.x, q.y - p.y), 2.0 + 1e-9);
      }
    }
  }
}

TEST(Merge, StatedRules) {
  AnnotationStore store;
  EXPECT_TRUE(store.merge(hazard("h", 1, 1, 15, 2)));
  const AnnotationStore before = store;
  EXPECT_FALSE(store.merge(hazard("h", 9, 9, 15, 1)));
  EXPECT_EQ(store, before);

  AnnotationStore tie;
  Annotation stored = hazard("h", 1, 1, 15, 3);
  stored.author_id = "a";
  tie.merge(stored);
  Annotation tomb = hazard("h", 1, 1, 15, 3);
  tomb.author_id = "b";
  tomb.deleted = true;
  EXPECT_TRUE(tie.merge(tomb));
  EXPECT_TRUE(tie.find("h")->deleted);
  EXPECT_TRUE(tie.live().empty());
  EXPECT_EQ(tie.size(), 1u);
}

TEST(MergeProperty, IdempotentAndOrderIndependent) {
  // Up to five versions spread over up to three ids; every delivery order of
  // the same multiset must give the same store.
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 60; ++trial) {
    const int ids = 1 + trial % 3;
    const int versions = 1 + trial % 5;
    std::vector<Annotation> msgs;
    for (int v = 0; v < versions; ++v) {
      const std::string id = "a" + std::to_string(static_cast<int>(rng() % ids));
      Annotation a = hazard(id, static_cast<double>(rng() % 100), 5, 15,
                            1 + static_cast<std::int64_t>(rng() % 3));
      a.author_id = std::string(1, static_cast<char>('a' + v));  // distinct keys per id
      a.deleted = rng() % 4 == 0;
      msgs.push_back(a);
    }
    std::vector<int> order(msgs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    std::optional<AnnotationStore> reference;
    do {
      AnnotationStore s;
      for (int i : order) s.merge(msgs[i]);
      AnnotationStore twice = s;
      for (int i : order) twice.merge(msgs[i]);
      ASSERT_EQ(twice, s);
      if (!reference) reference = s;
      ASSERT_EQ(s, *reference);
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST(AnnotationJson, RoundTripsEveryField) {
  Annotation s = zone("slow-1", AnnotationKind::kSlowZone, rect(1.25, 2.5, 30.125, 40), 4.5, 7);
  s.created_at = 1760000000123;
  s.author_id = "guide-1";
  s.label = "steep rollover";
  Annotation h = hazard("rock", 12.5, 13.75, 22.0, 2);
  h.deleted = true;
  for (const Annotation& a : {s, h}) {
    EXPECT_EQ(annotation_from_json(annotation_to_json(a)), a);
    EXPECT_EQ(annotation_from_json(nlohmann::json::parse(annotation_to_json(a).dump())), a);
  }
  const nlohmann::json j = annotation_to_json(s);
  EXPECT_EQ(j.at("kind"), "slowzone");
  EXPECT_EQ(j.at("geometry").at("polygon").at(0), nlohmann::json({1.25, 2.5}));
  EXPECT_EQ(annotation_to_json(h).at("geometry").at("point").at("radius"), 22.0);
}

TEST(AnnotationJson, RejectsMalformed) {
  const nlohmann::json good = annotation_to_json(hazard("h", 1, 2));
  for (const char* key : {"id", "kind", "geometry", "revision", "author_id"}) {
    nlohmann::json bad = good;
    bad.erase(key);
    EXPECT_THROW(annotation_from_json(bad), AnnotationFormatError) << key;
  }
  nlohmann::json bad_kind = good;
  bad_kind["kind"] = "Hazard";
  EXPECT_THROW(annotation_from_json(bad_kind), AnnotationFormatError);
  nlohmann::json bad_geom = good;
  bad_geom["geometry"] = {{"polygon", {{1, 2, 3}}}};
  EXPECT_THROW(annotation_from_json(bad_geom), AnnotationFormatError);
}

TEST(AnnotationFile, SaveLoadKeepsTombstones) {
  AnnotationStore store;
  store.merge(hazard("h", 1, 2));
  Annotation dead = zone("z", AnnotationKind::kSafeZone, rect(0, 0, 4, 4));
  dead.deleted = true;
  store.merge(dead);
  const auto path = std::filesystem::temp_directory_path() / "slopelink_annotation_test.json";
  save_annotation_file(path, store);
  EXPECT_EQ(load_annotation_file(path), store);
  std::filesystem::remove(path);

  const nlohmann::json wrong_version = {{"version", 2}, {"annotations", nlohmann::json::array()}};
  EXPECT_THROW(store_from_json(wrong_version), AnnotationFormatError);
}

}  // namespace
}  // namespace slopelink
