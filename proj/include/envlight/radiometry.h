// Copyright 2026 The envlight Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Spherical-domain representations shared by the whole pipeline.
//
// Lat-long convention (used everywhere in the library):
//   phi   = 2*pi*(u + 0.5) / width    azimuth, from +X toward +Y
//   theta = pi*(v + 0.5) / height     polar angle from +Z (world up)
//   d     = (sin(theta) cos(phi), sin(theta) sin(phi), cos(theta))
// Row 0 is the zenith row.

#ifndef ENVLIGHT_RADIOMETRY_H_
#define ENVLIGHT_RADIOMETRY_H_

#include <array>
#include <optional>
#include <vector>

#include "envlight/core.h"

namespace envlight {

using Rgb = std::array<float, 3>;

// HDR radiance over the full sphere in equirectangular layout.
class LatLongMap {
 public:
  static constexpr int kDefaultWidth = 256;
  static constexpr int kDefaultHeight = 128;

  LatLongMap() : LatLongMap(kDefaultWidth, kDefaultHeight) {}
  // Throws ContractError unless width == 2 * height and height >= 1.
  LatLongMap(int width, int height, float fill = 0.0f);
  // Adopts a 3-channel image; same shape requirement.
  explicit LatLongMap(Image image);

  int width() const { return image_.width(); }
  int height() const { return image_.height(); }

  float& at(int u, int v, int c) { return image_.at(u, v, c); }
  float at(int u, int v, int c) const { return image_.at(u, v, c); }
  Rgb rgb(int u, int v) const { return {at(u, v, 0), at(u, v, 1), at(u, v, 2)}; }

  const Image& image() const { return image_; }
  Image& image() { return image_; }

  bool SameShape(const LatLongMap& o) const { return image_.SameShape(o.image_); }
  // Throws ContractError if any value is negative or non-finite.
  void Validate() const;

  // Bilinear lookup with azimuthal wrap and polar clamp.
  Rgb Sample(const Direction& d) const;

  bool operator==(const LatLongMap&) const = default;

 private:
  Image image_;
};

// Pixel-center direction. Throws ContractError for out-of-range indices.
Direction LatLongToDir(int u, int v, int width, int height);

struct LatLongCoord {
  double u = 0;  // continuous column in [-0.5, width - 0.5)
  double v = 0;  // continuous row in [-0.5, height - 0.5]
};

// Inverse of LatLongToDir on continuous coordinates. Poles map to u = -0.5
// (phi = 0).
LatLongCoord DirToLatLong(const Direction& d, int width, int height);

// Integer bin containing `d`.
struct LatLongBin {
  int u = 0;
  int v = 0;
};
LatLongBin DirToBin(const Direction& d, int width, int height);

// ---------------------------------------------------------------------------
// Cube grid

enum class CubeFace : int { kPosX = 0, kNegX, kPosY, kNegY, kPosZ, kNegZ };

// Texel-center directions of a cube map with faces +X, -X, +Y, -Y, +Z, -Z,
// face-major then row-major. `values` is optional per-direction RGB.
struct CubeGrid {
  int face_res = 8;
  std::vector<Direction> dirs;
  std::vector<double> solid_angles;  // exact texel solid angles, sum 4*pi
  std::optional<std::vector<Rgb>> values;

  std::size_t size() const { return dirs.size(); }
  std::size_t Index(int face, int row, int col) const {
    return (static_cast<std::size_t>(face) * face_res + row) * face_res + col;
  }
};

// Throws ContractError if face_res < 1.
CubeGrid CubeDirs(int face_res);

struct CubeCoord {
  int face = 0;
  double col = 0;  // continuous texel coordinates, centers at integers
  double row = 0;
};
CubeCoord DirToCube(const Direction& d, int face_res);

// Resamples grid values onto a lat-long map with per-face bilinear
// interpolation between texel centers. Throws ContractError if values are
// missing or the wrong size.
LatLongMap CubeToLatLong(const CubeGrid& grid, int width = LatLongMap::kDefaultWidth,
                         int height = LatLongMap::kDefaultHeight);

// Averages a lat-long map over each cube texel (solid-angle weighted). Used to
// build reference light vectors from environment maps.
std::vector<Rgb> LatLongToCube(const LatLongMap& map, const CubeGrid& grid);

// ---------------------------------------------------------------------------
// Rotation and quadrature

// Rotates the radiance field about +Z by `yaw` radians: a light at azimuth
// phi moves to phi + yaw. Shift-exact yaws (multiples of 2*pi/width) are pure
// column shifts; otherwise columns are linearly interpolated.
LatLongMap RotateEnv(const LatLongMap& map, double yaw);

// Per-row solid angles of a lat-long map.
struct SolidAngleTable {
  int width = 0;
  int height = 0;
  std::vector<double> row_weights;  // steradians per pixel in row v

  double at(int v) const { return row_weights[v]; }
  double Total() const;
};

// Exact per-pixel band areas (2*pi/width) * (cos theta_top - cos theta_bottom).
// Throws ContractError unless width == 2 * height.
SolidAngleTable SolidAngles(int width, int height);

// Integral of radiance over the sphere, per channel.
std::array<double, 3> Energy(const LatLongMap& map);

// Area-averages an environment map to a coarser lat-long resolution. The
// factor must divide both dimensions. Preserves per-channel energy.
LatLongMap DownsampleEnv(const LatLongMap& map, int width, int height);

}  // namespace envlight

#endif  // ENVLIGHT_RADIOMETRY_H_
