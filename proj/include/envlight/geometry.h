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

// Depth-image processing. All 3D quantities are in camera space: +X right,
// +Y down, +Z forward (into the scene), metres.

#ifndef ENVLIGHT_GEOMETRY_H_
#define ENVLIGHT_GEOMETRY_H_

#include <cstdint>
#include <limits>
#include <vector>

#include "envlight/core.h"

namespace envlight {

struct Intrinsics {
  double fx = 1, fy = 1;
  double cx = 0, cy = 0;
  int width = 1, height = 1;

  // Throws ContractError unless fx, fy > 0 and the principal point is inside
  // the image.
  void Validate() const;
  // Intrinsics of the sub-image starting at (x0, y0).
  Intrinsics Cropped(int x0, int y0, int w, int h) const;
  // Intrinsics after area-downsampling by integer factors.
  Intrinsics Downsampled(int w, int h) const;
  // Symmetric pinhole with the given horizontal field of view.
  static Intrinsics FromFov(int width, int height, double fov_x_rad);
  bool operator==(const Intrinsics&) const = default;
};

// Metric depth along +Z, 0 marks an invalid pixel.
struct DepthFrame {
  Intrinsics intrinsics;
  Image depth;  // 1 channel

  DepthFrame() = default;
  // Throws ContractError on a shape mismatch or a negative/non-finite value.
  DepthFrame(Intrinsics k, Image d);

  int width() const { return depth.width(); }
  int height() const { return depth.height(); }
  float at(int u, int v) const { return depth.at(u, v); }
  bool valid(int u, int v) const { return depth.at(u, v) > 0.0f; }
};

struct NormalMap {
  Image normals;               // 3 channels, camera space
  std::vector<uint8_t> valid;  // 1 = valid, row-major

  NormalMap() = default;
  NormalMap(int width, int height) : normals(width, height, 3), valid(static_cast<std::size_t>(width) * height, 0) {}

  int width() const { return normals.width(); }
  int height() const { return normals.height(); }
  bool is_valid(int u, int v) const { return valid[static_cast<std::size_t>(v) * width() + u] != 0; }
  Vec3 at(int u, int v) const { return {normals.at(u, v, 0), normals.at(u, v, 1), normals.at(u, v, 2)}; }
  void set(int u, int v, const Vec3& n) {
    normals.at(u, v, 0) = static_cast<float>(n.x);
    normals.at(u, v, 1) = static_cast<float>(n.y);
    normals.at(u, v, 2) = static_cast<float>(n.z);
    valid[static_cast<std::size_t>(v) * width() + u] = 1;
  }
};

// Edge-preserving depth smoothing; invalid pixels are excluded from every
// kernel and stay invalid. Kernel radius is ceil(2 * sigma_space).
DepthFrame BilateralDepth(const DepthFrame& frame, double sigma_space, double sigma_range);

// Camera-space point of pixel (u, v). Throws ContractError on invalid depth.
Vec3 Unproject(double u, double v, double depth, const Intrinsics& k);
Vec3 Unproject(int u, int v, const DepthFrame& frame);

struct PixelCoord {
  double u = 0, v = 0;
};
PixelCoord Project(const Vec3& p, const Intrinsics& k);

// Central-difference normals oriented toward the camera. Border pixels and
// pixels with an invalid 4-neighbour are marked invalid.
NormalMap NormalsFromDepth(const DepthFrame& frame);

// o = 2 (n . view) n - view, `view` pointing from the surface to the camera.
// Throws BackFacingError when n . view <= 0.
Direction MirrorDirection(const Direction& n, const Direction& view);

struct VisibilityParams {
  double step_pixels = 0.5;
  double normal_offset = 1e-3;  // metres along the normal
  double depth_bias = 1e-3;     // metres
  // Relative depth jump between neighbouring pixels treated as a silhouette.
  double discontinuity = 0.05;
  // A sample behind the surface by more than this is treated as passing
  // behind a finite-thickness occluder.
  double thickness = 0.4;
};

// Screen-space ray marcher against the height field described by a depth
// frame. Holds per-frame statistics so repeated queries are cheap.
class DepthMarcher {
 public:
  explicit DepthMarcher(const DepthFrame& frame, VisibilityParams params = {});

  // 1 if a ray from pixel (u, v) toward camera-space direction `l` leaves the
  // image without passing behind the surface, 0 otherwise. `normal` is the
  // camera-space surface normal used for the start offset.
  int Visible(int u, int v, const Direction& l, const Direction& normal) const;

 private:
  // Scene depth at a continuous pixel position, interpolating inverse depth.
  // Returns 0 when no valid neighbour exists.
  double DepthAt(double x, double y) const;

  const DepthFrame& frame_;
  VisibilityParams params_;
  double min_depth_ = 0;
  double max_depth_ = 0;
  // Nearest valid depth per kTile x kTile tile, dilated by two pixels; lets
  // the march skip tiles the ray crosses entirely in front of the surface.
  static constexpr int kTile = 8;
  int tiles_x_ = 0;
  int tiles_y_ = 0;
  std::vector<float> tile_min_;
};

// Convenience single query; see DepthMarcher::Visible. Rays below the local
// tangent plane are not special-cased here: callers clamp max(n . l, 0).
int Visibility(int u, int v, const Direction& l, const DepthFrame& frame, const Direction& normal,
               const VisibilityParams& params = {});

}  // namespace envlight

#endif  // ENVLIGHT_GEOMETRY_H_
