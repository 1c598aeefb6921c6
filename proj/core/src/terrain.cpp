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

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>

namespace slopelink {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char l, char r) {
    return std::tolower(static_cast<unsigned char>(l)) ==
           std::tolower(static_cast<unsigned char>(r));
  });
}

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

double read_header(std::istream& in, std::string_view name) {
  std::string key;
  std::string value;
  if (!(in >> key >> value) || !iequals(key, name)) {
    throw TerrainError(TerrainErrc::kMalformedHeader,
                       "expected header '" + std::string(name) + "'");
  }
  double parsed = 0.0;
  if (!parse_double(value, parsed) || !std::isfinite(parsed)) {
    throw TerrainError(TerrainErrc::kMalformedHeader,
                       "unparseable value for '" + std::string(name) + "': " + value);
  }
  return parsed;
}

int read_count(std::istream& in, std::string_view name) {
  const double value = read_header(in, name);
  if (value != std::floor(value) || value < 2 || value > 1e8) {
    throw TerrainError(TerrainErrc::kMalformedHeader,
                       std::string(name) + " must be an integer >= 2");
  }
  return static_cast<int>(value);
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

[[noreturn]] void out_of_bounds(double x, double y) {
  throw TerrainError(TerrainErrc::kOutOfBounds,
                     "point (" + format_double(x) + ", " + format_double(y) +
                         ") is outside the terrain");
}

struct CellIndex {
  int col;
  int row;
  double tx;
  double ty;
};

CellIndex locate(const TerrainGrid& grid, double x, double y) {
  const double fx = (x - grid.origin_x()) / grid.cellsize();
  const double fy = (y - grid.origin_y()) / grid.cellsize();
  const int col = std::clamp(static_cast<int>(std::floor(fx)), 0, grid.ncols() - 2);
  const int row = std::clamp(static_cast<int>(std::floor(fy)), 0, grid.nrows() - 2);
  return {col, row, std::clamp(fx - col, 0.0, 1.0), std::clamp(fy - row, 0.0, 1.0)};
}

}  // namespace

std::string_view to_string(TerrainErrc code) {
  switch (code) {
    case TerrainErrc::kMalformedHeader: return "MalformedHeader";
    case TerrainErrc::kDimensionMismatch: return "DimensionMismatch";
    case TerrainErrc::kNoDataPresent: return "NoDataPresent";
    case TerrainErrc::kNonFiniteElevation: return "NonFiniteElevation";
    case TerrainErrc::kOutOfBounds: return "OutOfBounds";
  }
  return "Unknown";
}

TerrainError::TerrainError(TerrainErrc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

TerrainGrid::TerrainGrid(int ncols, int nrows, double origin_x, double origin_y,
                         double cellsize, std::vector<double> elevations)
    : ncols_(ncols),
      nrows_(nrows),
      origin_x_(origin_x),
      origin_y_(origin_y),
      cellsize_(cellsize),
      elevations_(std::move(elevations)) {
  if (ncols_ < 2 || nrows_ < 2) {
    throw TerrainError(TerrainErrc::kMalformedHeader, "grid needs at least 2x2 corners");
  }
  if (!(cellsize_ > 0.0) || !std::isfinite(cellsize_)) {
    throw TerrainError(TerrainErrc::kMalformedHeader, "cellsize must be positive");
  }
  if (!std::isfinite(origin_x_) || !std::isfinite(origin_y_)) {
    throw TerrainError(TerrainErrc::kMalformedHeader, "origin must be finite");
  }
  if (elevations_.size() != static_cast<std::size_t>(ncols_) * static_cast<std::size_t>(nrows_)) {
    throw TerrainError(TerrainErrc::kDimensionMismatch,
                       "expected " + std::to_string(static_cast<std::size_t>(ncols_) * nrows_) +
                           " values, got " + std::to_string(elevations_.size()));
  }
  if (!std::all_of(elevations_.begin(), elevations_.end(),
                   [](double z) { return std::isfinite(z); })) {
    throw TerrainError(TerrainErrc::kNonFiniteElevation, "elevation is not finite");
  }
}

bool TerrainGrid::contains(double x, double y) const noexcept {
  const double tol = 1e-9 * cellsize_;
  return x >= origin_x_ - tol && x <= max_x() + tol && y >= origin_y_ - tol &&
         y <= max_y() + tol;
}

TerrainGrid load_terrain(std::istream& source) {
  const int ncols = read_count(source, "ncols");
  const int nrows = read_count(source, "nrows");
  const double xll = read_header(source, "xllcorner");
  const double yll = read_header(source, "yllcorner");
  const double cellsize = read_header(source, "cellsize");
  if (!(cellsize > 0.0)) {
    throw TerrainError(TerrainErrc::kMalformedHeader, "cellsize must be positive");
  }

  std::string token;
  if (!(source >> token)) {
    throw TerrainError(TerrainErrc::kDimensionMismatch, "no elevation values");
  }
  std::optional<double> nodata;
  if (iequals(token, "NODATA_value")) {
    std::string value;
    double parsed = 0.0;
    if (!(source >> value) || !parse_double(value, parsed)) {
      throw TerrainError(TerrainErrc::kMalformedHeader, "unparseable NODATA_value");
    }
    nodata = parsed;
    token.clear();
  }

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(ncols) * nrows);
  auto consume = [&](const std::string& tok) {
    double z = 0.0;
    if (!parse_double(tok, z)) {
      throw TerrainError(TerrainErrc::kNonFiniteElevation, "not a number: '" + tok + "'");
    }
    if (nodata && z == *nodata) {
      throw TerrainError(TerrainErrc::kNoDataPresent,
                         "cell " + std::to_string(values.size()) + " holds NODATA");
    }
    if (!std::isfinite(z)) {
      throw TerrainError(TerrainErrc::kNonFiniteElevation,
                         "cell " + std::to_string(values.size()) + " is not finite");
    }
    values.push_back(z);
  };
  if (!token.empty()) consume(token);
  while (source >> token) consume(token);

  return TerrainGrid(ncols, nrows, xll, yll, cellsize, std::move(values));
}

TerrainGrid load_terrain_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open terrain file " + path.string());
  }
  return load_terrain(in);
}

void write_terrain(std::ostream& out, const TerrainGrid& grid) {
  out << "ncols " << grid.ncols() << '\n'
      << "nrows " << grid.nrows() << '\n'
      << "xllcorner " << format_double(grid.origin_x()) << '\n'
      << "yllcorner " << format_double(grid.origin_y()) << '\n'
      << "cellsize " << format_double(grid.cellsize()) << '\n';
  const auto z = grid.elevations();
  for (int row = 0; row < grid.nrows(); ++row) {
    for (int col = 0; col < grid.ncols(); ++col) {
      if (col) out << ' ';
      out << format_double(z[static_cast<std::size_t>(row) * grid.ncols() + col]);
    }
    out << '\n';
  }
}

double elevation_at(const TerrainGrid& grid, double x, double y) {
  if (!grid.contains(x, y)) out_of_bounds(x, y);
  const auto c = locate(grid, x, y);
  const double z00 = grid.corner(c.col, c.row);
  const double z10 = grid.corner(c.col + 1, c.row);
  const double z01 = grid.corner(c.col, c.row + 1);
  const double z11 = grid.corner(c.col + 1, c.row + 1);
  const double south = z00 + c.tx * (z10 - z00);
  const double north = z01 + c.tx * (z11 - z01);
  return south + c.ty * (north - south);
}

Gradient gradient_at(const TerrainGrid& grid, double x, double y) {
  const double cs = grid.cellsize();
  const double tol = 1e-9 * cs;
  if (x < grid.origin_x() + cs - tol || x > grid.max_x() - cs + tol ||
      y < grid.origin_y() + cs - tol || y > grid.max_y() - cs + tol) {
    out_of_bounds(x, y);
  }
  const double h = cs / 2.0;
  return {(elevation_at(grid, x + h, y) - elevation_at(grid, x - h, y)) / (2.0 * h),
          (elevation_at(grid, x, y + h) - elevation_at(grid, x, y - h)) / (2.0 * h)};
}

WorldPoint snap_to_surface(const TerrainGrid& grid, double x, double y, double lift) {
  return {x, y, elevation_at(grid, x, y) + lift};
}

bool line_of_sight(const TerrainGrid& grid, const WorldPoint& eye, const WorldPoint& target,
                   const OcclusionOptions& options) {
  if (!grid.contains(eye.x, eye.y)) out_of_bounds(eye.x, eye.y);
  if (!grid.contains(target.x, target.y)) out_of_bounds(target.x, target.y);

  // Walk in a canonical direction so the answer is symmetric bit for bit.
  auto key = [](const WorldPoint& p) { return std::tie(p.x, p.y, p.z); };
  const WorldPoint& a = key(eye) <= key(target) ? eye : target;
  const WorldPoint& b = key(eye) <= key(target) ? target : eye;

  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double dz = b.z - a.z;
  const double length = std::hypot(dx, dy);
  const double margin = options.endpoint_margin * grid.cellsize();
  if (length <= 2.0 * margin) return true;

  const double t_lo = margin / length;
  const double t_hi = 1.0 - margin / length;

  // Breakpoints: the clipped ends plus every crossing of a grid line.
  std::vector<double> ts{t_lo, t_hi};
  auto add_crossings = [&](double start, double delta, double origin, int count) {
    if (delta == 0.0) return;
    const double cs = grid.cellsize();
    const double lo = std::min(start, start + delta);
    const double hi = std::max(start, start + delta);
    const int first = std::max(0, static_cast<int>(std::ceil((lo - origin) / cs)));
    const int last = std::min(count - 1, static_cast<int>(std::floor((hi - origin) / cs)));
    for (int i = first; i <= last; ++i) {
      const double t = (origin + i * cs - start) / delta;
      if (t > t_lo && t < t_hi) ts.push_back(t);
    }
  };
  add_crossings(a.x, dx, grid.origin_x(), grid.ncols());
  add_crossings(a.y, dy, grid.origin_y(), grid.nrows());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  auto clearance = [&](double t) {
    return a.z + dz * t - elevation_at(grid, a.x + dx * t, a.y + dy * t);
  };

  for (double t : ts) {
    if (clearance(t) < -options.tolerance) return false;
  }

  // Inside one cell the surface along the ray is quadratic in t; check the
  // clearance minimum when it falls strictly between two breakpoints.
  const double cs = grid.cellsize();
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double t0 = ts[k];
    const double t1 = ts[k + 1];
    const double tm = 0.5 * (t0 + t1);
    const auto c = locate(grid, a.x + dx * tm, a.y + dy * tm);
    const double z00 = grid.corner(c.col, c.row);
    const double z10 = grid.corner(c.col + 1, c.row);
    const double z01 = grid.corner(c.col, c.row + 1);
    const double z11 = grid.corner(c.col + 1, c.row + 1);
    const double twist = z00 - z10 - z01 + z11;
    const double u0 = (a.x - (grid.origin_x() + c.col * cs)) / cs;
    const double v0 = (a.y - (grid.origin_y() + c.row * cs)) / cs;
    const double pu = dx / cs;
    const double pv = dy / cs;
    const double quad = twist * pu * pv;
    if (quad >= 0.0) continue;  // clearance is concave or linear here
    const double lin = (z10 - z00) * pu + (z01 - z00) * pv + twist * (u0 * pv + v0 * pu);
    const double t_star = (dz - lin) / (2.0 * quad);
    if (t_star > t0 && t_star < t1 && clearance(t_star) < -options.tolerance) return false;
  }
  return true;
}

std::string terrain_hash(std::string_view file_contents) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int size = 0;
  if (EVP_Digest(file_contents.data(), file_contents.size(), digest.data(), &size, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(size * 2);
  for (unsigned int i = 0; i < size; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace slopelink
