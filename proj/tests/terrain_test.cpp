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

#include "slopelink/terrain.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "support/scenes.hpp"

namespace slopelink {
namespace {

using testing::make_grid;

TerrainGrid parse(const std::string& text) {
  std::istringstream in(text);
  return load_terrain(in);
}

TerrainErrc parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const TerrainError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected TerrainError for:\n" << text;
  return TerrainErrc::kOutOfBounds;
}

constexpr const char* kTwoByTwo = "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 10\n";

TEST(LoadTerrain, RowsAreStoredNorthToSouth) {
  const TerrainGrid g = parse(std::string(kTwoByTwo) + "1 2\n3 4\n");
  EXPECT_EQ(g.ncols(), 2);
  EXPECT_EQ(g.nrows(), 2);
  EXPECT_DOUBLE_EQ(elevation_at(g, 0, 0), 3.0);
  EXPECT_DOUBLE_EQ(elevation_at(g, 10, 10), 2.0);
  EXPECT_DOUBLE_EQ(elevation_at(g, 0, 10), 1.0);
  EXPECT_DOUBLE_EQ(elevation_at(g, 10, 0), 4.0);
}

TEST(LoadTerrain, HeadersAreCaseInsensitiveAndOriginIsMapped) {
  const TerrainGrid g = parse(
      "NCOLS 3\nNRows 2\nXLLCORNER 100.5\nyllCorner -20\nCellSize 2\nnodata_value -9999\n"
      "1 2 3\n4 5 6\n");
  EXPECT_DOUBLE_EQ(g.origin_x(), 100.5);
  EXPECT_DOUBLE_EQ(g.origin_y(), -20.0);
  EXPECT_DOUBLE_EQ(g.max_x(), 104.5);
  EXPECT_DOUBLE_EQ(g.max_y(), -18.0);
}

TEST(LoadTerrain, RejectsBadInput) {
  EXPECT_EQ(parse_error(std::string(kTwoByTwo) + "1 2\n3\n"), TerrainErrc::kDimensionMismatch);
  EXPECT_EQ(parse_error(std::string(kTwoByTwo) + "1 2\n3 4 5\n"), TerrainErrc::kDimensionMismatch);
  EXPECT_EQ(parse_error("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 0\n1 2\n3 4\n"),
            TerrainErrc::kMalformedHeader);
  EXPECT_EQ(parse_error("ncols 2\nnrows 2\nxllcorner 0\ncellsize 1\n1 2\n3 4\n"),
            TerrainErrc::kMalformedHeader);
  EXPECT_EQ(parse_error("ncols two\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2\n3 4\n"),
            TerrainErrc::kMalformedHeader);
  EXPECT_EQ(parse_error("ncols 1\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1\n3\n"),
            TerrainErrc::kMalformedHeader);
  EXPECT_EQ(parse_error("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n"
                        "NODATA_value -9999\n1 -9999\n3 4\n"),
            TerrainErrc::kNoDataPresent);
  EXPECT_EQ(parse_error(std::string(kTwoByTwo) + "1 nan\n3 4\n"), TerrainErrc::kNonFiniteElevation);
  EXPECT_EQ(parse_error(std::string(kTwoByTwo) + "1 inf\n3 4\n"), TerrainErrc::kNonFiniteElevation);
}

TEST(ElevationAt, FlatGridIsZeroEverywhere) {
  const TerrainGrid g = testing::flat_grid(11, 1.0);
  for (double x : {0.0, 0.3, 5.5, 9.99, 10.0}) {
    EXPECT_EQ(elevation_at(g, x, 10.0 - x), 0.0);
  }
}

TEST(ElevationAt, ReproducesPlaneBetweenCorners) {
  const oracle::Plane plane{0.0, 0.1, 0.0};
  const TerrainGrid g = make_grid(3, 3, 10.0, plane);
  EXPECT_NEAR(elevation_at(g, 5, 5), plane(5, 5), 1e-9);
  EXPECT_NEAR(elevation_at(g, 5, 5), 0.5, 1e-9);
}

TEST(ElevationAt, OutsideRectangleThrows) {
  const TerrainGrid g = testing::flat_grid(11, 1.0);
  EXPECT_THROW(elevation_at(g, -1, 0), TerrainError);
  EXPECT_THROW(elevation_at(g, 0, 10.5), TerrainError);
  EXPECT_NO_THROW(elevation_at(g, 10, 10));
}

TEST(ElevationAt, ExactAtEveryCorner) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> z(-500, 3000);
  std::vector<double> values(7 * 5);
  for (double& v : values) v = z(rng);
  const TerrainGrid g(7, 5, 1234.5, -87.25, 0.75, values);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 7; ++c) {
      EXPECT_NEAR(elevation_at(g, g.origin_x() + c * 0.75, g.origin_y() + r * 0.75), g.corner(c, r),
                  1e-9);
    }
  }
}

TEST(GradientAt, FlatAndPlanes) {
  const TerrainGrid flat = testing::flat_grid(11, 1.0);
  const Gradient g0 = gradient_at(flat, 5, 5);
  EXPECT_EQ(g0.dzdx, 0.0);
  EXPECT_EQ(g0.dzdy, 0.0);

  const TerrainGrid px = make_grid(11, 11, 1.0, oracle::Plane{0.0, 0.1, 0.0});
  const Gradient g1 = gradient_at(px, 4.3, 6.1);
  EXPECT_NEAR(g1.dzdx, 0.1, 1e-9);
  EXPECT_NEAR(g1.dzdy, 0.0, 1e-9);

  const TerrainGrid py = make_grid(11, 11, 1.0, oracle::Plane{2.0, 0.0, -0.3});
  const Gradient g2 = gradient_at(py, 2.5, 7.75);
  EXPECT_NEAR(g2.dzdx, 0.0, 1e-9);
  EXPECT_NEAR(g2.dzdy, -0.3, 1e-9);
}

TEST(GradientAt, NeedsOneCellOfMargin) {
  const TerrainGrid g = testing::flat_grid(11, 1.0);
  EXPECT_NO_THROW(gradient_at(g, 1.0, 9.0));
  EXPECT_THROW(gradient_at(g, 0.5, 5.0), TerrainError);
  EXPECT_THROW(gradient_at(g, 5.0, 9.5), TerrainError);
}

TEST(SnapToSurface, AddsLift) {
  const TerrainGrid flat = testing::flat_grid(11, 1.0);
  EXPECT_EQ(snap_to_surface(flat, 3, 4, 0.0), (WorldPoint{3, 4, 0.0}));
  EXPECT_EQ(snap_to_surface(flat, 3, 4, 1.5), (WorldPoint{3, 4, 1.5}));
  const TerrainGrid plane = make_grid(31, 31, 1.0, oracle::Plane{0.0, 0.1, 0.0});
  EXPECT_NEAR(snap_to_surface(plane, 20, 3, 0.0).z, 2.0, 1e-9);
  EXPECT_THROW(snap_to_surface(plane, 31, 3, 0.0), TerrainError);
}

TEST(LineOfSight, FlatTerrainIsVisible) {
  const TerrainGrid g = testing::flat_grid(101, 1.0);
  EXPECT_TRUE(line_of_sight(g, {0, 0, 2}, {100, 0, 0.5}));
}

TEST(LineOfSight, RidgeOccludes) {
  const TerrainGrid g = testing::ridge_grid();
  const WorldPoint eye{0, 0, 2};
  const WorldPoint target{100, 0, 2};
  EXPECT_FALSE(oracle::dense_line_of_sight(g, eye, target));
  EXPECT_FALSE(line_of_sight(g, eye, target));
  EXPECT_FALSE(line_of_sight(g, target, eye));
  // High enough to clear the 10 m crest from both sides.
  EXPECT_TRUE(line_of_sight(g, {0, 0, 12}, {100, 0, 12}));
}

TEST(LineOfSight, SamePointIsVisible) {
  const TerrainGrid g = testing::ridge_grid();
  EXPECT_TRUE(line_of_sight(g, {50, 0, 0}, {50, 0, 0}));
  EXPECT_TRUE(line_of_sight(g, {50, 0, -3}, {50, 0, 20}));
}

TEST(LineOfSight, SurfaceAnchoredTargetDoesNotOccludeItself) {
  const TerrainGrid g = make_grid(101, 101, 1.0, oracle::Plane{100.0, -0.3, 0.0});
  const WorldPoint eye = snap_to_surface(g, 10, 50, 1.7);
  const WorldPoint target = snap_to_surface(g, 60, 50, 0.0);
  EXPECT_TRUE(line_of_sight(g, eye, target));
}

TEST(LineOfSight, CatchesSpikeBetweenCoarseSamples) {
  // One raised corner at x = 21. Samples every cellsize/2 from x = 0.25 land
  // on 20.75 and 21.25 where the surface is only 6 m high.
  auto spike = [](double x, double y) { return (x == 21.0 && y == 0.0) ? 8.0 : 0.0; };
  const TerrainGrid g = make_grid(42, 21, 1.0, spike, 0.0, -10.0);
  const WorldPoint eye{0.25, 0.0, 7.5};
  const WorldPoint target{40.25, 0.0, 7.5};

  bool coarse_visible = true;
  for (int k = 1; k < 80; ++k) {
    const double x = eye.x + 0.5 * k;
    if (7.5 < oracle::bilinear(g, x, 0.0) - 0.05) coarse_visible = false;
  }
  EXPECT_TRUE(coarse_visible);
  EXPECT_FALSE(oracle::dense_line_of_sight(g, eye, target));
  EXPECT_FALSE(line_of_sight(g, eye, target));
}

TEST(LineOfSight, OutOfBoundsThrows) {
  const TerrainGrid g = testing::flat_grid(11, 1.0);
  EXPECT_THROW(line_of_sight(g, {-1, 0, 1}, {5, 5, 1}), TerrainError);
}

TEST(LineOfSightProperty, SymmetricAndMonotoneInEyeHeight) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int terrain = 0; terrain < 10; ++terrain) {
    const TerrainGrid g = testing::random_terrain(rng, 41, 2.0);
    for (int i = 0; i < 200; ++i) {
      auto pick = [&](double lift) {
        const double x = unit(rng) * g.max_x();
        const double y = unit(rng) * g.max_y();
        return snap_to_surface(g, x, y, lift);
      };
      const WorldPoint a = pick(0.5 + 3.0 * unit(rng));
      const WorldPoint b = pick(0.3);
      const bool ab = line_of_sight(g, a, b);
      ASSERT_EQ(ab, line_of_sight(g, b, a));
      if (ab) {
        const WorldPoint higher{a.x, a.y, a.z + 0.1 + 20.0 * unit(rng)};
        ASSERT_TRUE(line_of_sight(g, higher, b));
      }
      if (ab) ASSERT_TRUE(oracle::dense_line_of_sight(g, a, b));
    }
  }
}

TEST(TerrainRoundTrip, WriteThenLoadIsIdentical) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> z(-100, 4000);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> values(9 * 4);
    for (double& v : values) v = z(rng);
    const TerrainGrid g(9, 4, z(rng), z(rng), 0.1 + trial * 0.37, values);
    std::stringstream buf;
    write_terrain(buf, g);
    EXPECT_EQ(load_terrain(buf), g);
  }
}

TEST(TerrainHash, IsSha256Hex) {
  EXPECT_EQ(terrain_hash(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(terrain_hash("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace slopelink
