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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace slopelink {

/// Right-handed world frame: X east, Y north, Z up, meters.
struct WorldPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const WorldPoint&, const WorldPoint&) = default;
};

enum class TerrainErrc {
  kMalformedHeader,
  kDimensionMismatch,
  kNoDataPresent,
  kNonFiniteElevation,
  kOutOfBounds,
};

std::string_view to_string(TerrainErrc code);

class TerrainError : public std::runtime_error {
 public:
  TerrainError(TerrainErrc code, const std::string& what);
  TerrainErrc code() const noexcept { return code_; }

 private:
  TerrainErrc code_;
};

/// Immutable heightfield. Elevations are stored row-major, north to south,
/// exactly as they appear in an ESRI ASCII grid; cell corners sit at
/// origin + (col, row_from_south) * cellsize.
class TerrainGrid {
 public:
  TerrainGrid(int ncols, int nrows, double origin_x, double origin_y,
              double cellsize, std::vector<double> elevations);

  int ncols() const noexcept { return ncols_; }
  int nrows() const noexcept { return nrows_; }
  double origin_x() const noexcept { return origin_x_; }
  double origin_y() const noexcept { return origin_y_; }
  double cellsize() const noexcept { return cellsize_; }
  double max_x() const noexcept { return origin_x_ + (ncols_ - 1) * cellsize_; }
  double max_y() const noexcept { return origin_y_ + (nrows_ - 1) * cellsize_; }
  std::span<const double> elevations() const noexcept { return elevations_; }

  /// Elevation at the cell corner (col, row) with row counted from the south.
  double corner(int col, int row_from_south) const noexcept {
    return elevations_[static_cast<std::size_t>(nrows_ - 1 - row_from_south) * ncols_ + col];
  }

  /// Inclusive rectangle test, tolerant to rounding at the far edges.
  bool contains(double x, double y) const noexcept;

  friend bool operator==(const TerrainGrid&, const TerrainGrid&) = default;

 private:
  int ncols_;
  int nrows_;
  double origin_x_;
  double origin_y_;
  double cellsize_;
  std::vector<double> elevations_;
};

struct Gradient {
  double dzdx = 0.0;
  double dzdy = 0.0;
};

struct OcclusionOptions {
  /// Ray may dip this far below the surface before it counts as blocked.
  double tolerance = 0.05;
  /// Portion of the segment next to each endpoint that is never tested,
  /// as a fraction of cellsize.
  double endpoint_margin = 0.01;
};

TerrainGrid load_terrain(std::istream& source);
TerrainGrid load_terrain_file(const std::filesystem::path& path);

/// Writes an ESRI ASCII grid that reloads to an identical TerrainGrid.
void write_terrain(std::ostream& out, const TerrainGrid& grid);

/// Bilinear interpolation of the surrounding cell corners.
double elevation_at(const TerrainGrid& grid, double x, double y);

/// Central differences of elevation_at with step cellsize / 2. The point
/// must lie at least one cellsize inside the grid.
Gradient gradient_at(const TerrainGrid& grid, double x, double y);

WorldPoint snap_to_surface(const TerrainGrid& grid, double x, double y, double lift);

/// True when the open segment eye -> target never passes more than
/// `tolerance` below the interpolated surface. The segment is walked cell by
/// cell and the exact minimum of (ray - surface) is checked inside every
/// cell, so no sampling step can slip past a thin ridge.
bool line_of_sight(const TerrainGrid& grid, const WorldPoint& eye,
                   const WorldPoint& target, const OcclusionOptions& options = {});

/// Hex SHA-256 of the raw terrain file contents.
std::string terrain_hash(std::string_view file_contents);

}  // namespace slopelink
