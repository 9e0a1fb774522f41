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

#include "envlight/geometry.h"

#include <algorithm>
#include <string>

namespace envlight {

void Intrinsics::Validate() const {
  if (!(fx > 0) || !(fy > 0)) throw ContractError("intrinsics: focal lengths must be positive");
  if (width < 1 || height < 1) throw ContractError("intrinsics: empty image");
  if (!(cx >= 0 && cx < width && cy >= 0 && cy < height)) {
    throw ContractError("intrinsics: principal point (" + std::to_string(cx) + ", " +
                        std::to_string(cy) + ") outside the image");
  }
}

Intrinsics Intrinsics::Cropped(int x0, int y0, int w, int h) const {
  Intrinsics k = *this;
  k.cx -= x0;
  k.cy -= y0;
  k.width = w;
  k.height = h;
  return k;
}

Intrinsics Intrinsics::Downsampled(int w, int h) const {
  if (w < 1 || h < 1 || width % w != 0 || height % h != 0) {
    throw ContractError("intrinsics: cannot downsample " + std::to_string(width) + "x" +
                        std::to_string(height) + " to " + std::to_string(w) + "x" + std::to_string(h));
  }
  const double sx = static_cast<double>(width) / w;
  const double sy = static_cast<double>(height) / h;
  Intrinsics k = *this;
  k.fx = fx / sx;
  k.fy = fy / sy;
  k.cx = (cx - (sx - 1) / 2) / sx;
  k.cy = (cy - (sy - 1) / 2) / sy;
  k.width = w;
  k.height = h;
  return k;
}

Intrinsics Intrinsics::FromFov(int width, int height, double fov_x_rad) {
  Intrinsics k;
  k.width = width;
  k.height = height;
  k.fx = k.fy = 0.5 * width / std::tan(0.5 * fov_x_rad);
  k.cx = 0.5 * (width - 1);
  k.cy = 0.5 * (height - 1);
  return k;
}

DepthFrame::DepthFrame(Intrinsics k, Image d) : intrinsics(k), depth(std::move(d)) {
  intrinsics.Validate();
  if (depth.channels() != 1 || depth.width() != intrinsics.width || depth.height() != intrinsics.height) {
    throw ContractError("depth frame: image " + ShapeString(depth) + " does not match intrinsics " +
                        std::to_string(intrinsics.width) + "x" + std::to_string(intrinsics.height));
  }
  for (float z : depth.data()) {
    if (!std::isfinite(z) || z < 0.0f) throw ContractError("depth frame: negative or non-finite depth");
  }
}

DepthFrame BilateralDepth(const DepthFrame& frame, double sigma_space, double sigma_range) {
  if (!(sigma_space > 0) || !(sigma_range > 0)) {
    throw ContractError("BilateralDepth: sigmas must be positive");
  }
  const int w = frame.width(), h = frame.height();
  const int radius = static_cast<int>(std::ceil(2.0 * sigma_space));
  std::vector<double> spatial((2 * radius + 1) * (2 * radius + 1));
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      spatial[(dy + radius) * (2 * radius + 1) + dx + radius] =
          std::exp(-(dx * dx + dy * dy) / (2 * sigma_space * sigma_space));
  const double inv_range = 1.0 / (2 * sigma_range * sigma_range);

  Image out(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double z0 = frame.at(x, y);
      if (z0 <= 0) continue;
      double sum = 0, wsum = 0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= h) continue;
        for (int dx = -radius; dx <= radius; ++dx) {
          const int xx = x + dx;
          if (xx < 0 || xx >= w) continue;
          const double z = frame.at(xx, yy);
          if (z <= 0) continue;
          const double dz = z - z0;
          const double wgt = spatial[(dy + radius) * (2 * radius + 1) + dx + radius] * std::exp(-dz * dz * inv_range);
          sum += wgt * z;
          wsum += wgt;
        }
      }
      out.at(x, y) = static_cast<float>(sum / wsum);
    }
  }
  return DepthFrame(frame.intrinsics, std::move(out));
}

Vec3 Unproject(double u, double v, double depth, const Intrinsics& k) {
  if (!(depth > 0)) throw ContractError("Unproject: invalid depth at pixel");
  return {depth * (u - k.cx) / k.fx, depth * (v - k.cy) / k.fy, depth};
}

Vec3 Unproject(int u, int v, const DepthFrame& frame) {
  if (u < 0 || v < 0 || u >= frame.width() || v >= frame.height()) {
    throw ContractError("Unproject: pixel outside the frame");
  }
  return Unproject(static_cast<double>(u), static_cast<double>(v), frame.at(u, v), frame.intrinsics);
}

PixelCoord Project(const Vec3& p, const Intrinsics& k) {
  return {k.fx * p.x / p.z + k.cx, k.fy * p.y / p.z + k.cy};
}

NormalMap NormalsFromDepth(const DepthFrame& frame) {
  const int w = frame.width(), h = frame.height();
  const Intrinsics& k = frame.intrinsics;
  NormalMap normals(w, h);
  for (int v = 1; v + 1 < h; ++v) {
    for (int u = 1; u + 1 < w; ++u) {
      if (!frame.valid(u, v) || !frame.valid(u - 1, v) || !frame.valid(u + 1, v) ||
          !frame.valid(u, v - 1) || !frame.valid(u, v + 1)) {
        continue;
      }
      const Vec3 du = Unproject(u + 1.0, v, frame.at(u + 1, v), k) - Unproject(u - 1.0, v, frame.at(u - 1, v), k);
      const Vec3 dv = Unproject(u, v + 1.0, frame.at(u, v + 1), k) - Unproject(u, v - 1.0, frame.at(u, v - 1), k);
      Vec3 n = Cross(du, dv);
      const double len = Length(n);
      if (!(len > 0)) continue;
      n = n / len;
      const Vec3 p = Unproject(u, v, frame);
      if (Dot(n, p) > 0) n = -n;
      normals.set(u, v, n);
    }
  }
  return normals;
}

Direction MirrorDirection(const Direction& n, const Direction& view) {
  const double c = Dot(n, view);
  if (!(c > 0)) throw BackFacingError("MirrorDirection: view is behind the surface");
  return Normalize(2.0 * c * n - view);
}

DepthMarcher::DepthMarcher(const DepthFrame& frame, VisibilityParams params)
    : frame_(frame), params_(params) {
  min_depth_ = std::numeric_limits<double>::infinity();
  max_depth_ = 0;
  for (float z : frame.depth.data()) {
    if (z <= 0) continue;
    min_depth_ = std::min(min_depth_, static_cast<double>(z));
    max_depth_ = std::max(max_depth_, static_cast<double>(z));
  }
  const int w = frame.width(), h = frame.height();
  tiles_x_ = (w + kTile - 1) / kTile;
  tiles_y_ = (h + kTile - 1) / kTile;
  tile_min_.assign(static_cast<std::size_t>(tiles_x_) * tiles_y_, std::numeric_limits<float>::infinity());
  for (int ty = 0; ty < tiles_y_; ++ty) {
    for (int tx = 0; tx < tiles_x_; ++tx) {
      float m = std::numeric_limits<float>::infinity();
      for (int y = std::max(0, ty * kTile - 2); y < std::min(h, (ty + 1) * kTile + 2); ++y)
        for (int x = std::max(0, tx * kTile - 2); x < std::min(w, (tx + 1) * kTile + 2); ++x)
          if (frame.at(x, y) > 0) m = std::min(m, frame.at(x, y));
      tile_min_[static_cast<std::size_t>(ty) * tiles_x_ + tx] = m;
    }
  }
}

double DepthMarcher::DepthAt(double x, double y) const {
  const int w = frame_.width(), h = frame_.height();
  const int x0 = std::clamp(static_cast<int>(std::floor(x)), 0, w - 1);
  const int y0 = std::clamp(static_cast<int>(std::floor(y)), 0, h - 1);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double fx = std::clamp(x - x0, 0.0, 1.0), fy = std::clamp(y - y0, 0.0, 1.0);
  const float z[4] = {frame_.at(x0, y0), frame_.at(x1, y0), frame_.at(x0, y1), frame_.at(x1, y1)};
  const double wgt[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
  double zmin = std::numeric_limits<double>::infinity(), zmax = 0;
  for (float zi : z) {
    if (zi <= 0) continue;
    zmin = std::min(zmin, static_cast<double>(zi));
    zmax = std::max(zmax, static_cast<double>(zi));
  }
  // Across a depth discontinuity the far side is taken, so no surface is
  // interpolated between an occluder and its background.
  if (zmax > 0 && zmax > zmin * (1.0 + params_.discontinuity)) return zmax;
  double inv = 0, wsum = 0;
  for (int i = 0; i < 4; ++i) {
    if (z[i] <= 0) continue;
    inv += wgt[i] / z[i];
    wsum += wgt[i];
  }
  if (wsum <= 1e-12) return 0;
  return wsum / inv;
}

int DepthMarcher::Visible(int u, int v, const Direction& l, const Direction& normal) const {
  const Intrinsics& k = frame_.intrinsics;
  const Vec3 s = Unproject(u, v, frame_) + params_.normal_offset * normal;
  const PixelCoord q0 = Project(s, k);
  const double dxdt = k.fx * (l.x * s.z - s.x * l.z) / (s.z * s.z);
  const double dydt = k.fy * (l.y * s.z - s.y * l.z) / (s.z * s.z);
  const double len = std::hypot(dxdt, dydt);
  if (len < 1e-12) return 1;  // ray along the line of sight
  const double ddx = dxdt / len, ddy = dydt / len;
  const bool use_x = std::abs(ddx) >= std::abs(ddy);
  const int w = frame_.width(), h = frame_.height();
  const double step = params_.step_pixels;
  const int max_steps = static_cast<int>(std::ceil(std::hypot(w, h) / step)) + 2;
  const auto ray_t = [&](double x, double y) {
    if (use_x) {
      const double a = (x - k.cx) / k.fx;
      const double den = a * l.z - l.x;
      return std::abs(den) < 1e-15 ? -1.0 : (s.x - a * s.z) / den;
    }
    const double a = (y - k.cy) / k.fy;
    const double den = a * l.z - l.y;
    return std::abs(den) < 1e-15 ? -1.0 : (s.y - a * s.z) / den;
  };
  double t_prev = 0;
  int failed_tile = -1;
  for (int i = 1; i <= max_steps;) {
    const double x = q0.u + i * step * ddx;
    const double y = q0.v + i * step * ddy;
    if (x < 0 || y < 0 || x > w - 1 || y > h - 1) return 1;
    // Ray parameter whose projection lands on (x, y).
    const double t = ray_t(x, y);
    if (t <= t_prev) return 1;  // passed the vanishing point
    t_prev = t;
    const double zr = s.z + t * l.z;
    if (zr <= 1e-6) return 1;
    if (l.z <= 0 && zr < min_depth_ - params_.depth_bias) return 1;
    if (l.z > 0 && zr > max_depth_ + params_.thickness) return 1;

    // Samples up to the tile exit cannot be behind the surface when the
    // farther ray end is in front of the tile's nearest depth (depth along
    // the ray is monotone).
    const int tx = static_cast<int>(x) / kTile, ty = static_cast<int>(y) / kTile;
    const int tile = ty * tiles_x_ + tx;
    if (tile != failed_tile) {
      double exit = std::numeric_limits<double>::infinity();
      if (ddx > 0) exit = std::min(exit, ((tx + 1) * kTile - q0.u) / (step * ddx));
      if (ddx < 0) exit = std::min(exit, (tx * kTile - q0.u) / (step * ddx));
      if (ddy > 0) exit = std::min(exit, ((ty + 1) * kTile - q0.v) / (step * ddy));
      if (ddy < 0) exit = std::min(exit, (ty * kTile - q0.v) / (step * ddy));
      const int i_exit = static_cast<int>(std::min(std::ceil(exit), static_cast<double>(max_steps + 1)));
      if (i_exit > i + 1) {
        const int j = i_exit - 1;
        const double xj = q0.u + j * step * ddx, yj = q0.v + j * step * ddy;
        const double tj = ray_t(xj, yj);
        if (tj > t && std::max(zr, s.z + tj * l.z) <= tile_min_[tile] + params_.depth_bias) {
          t_prev = tj;
          i = i_exit;
          continue;
        }
      }
      failed_tile = tile;
    }

    const double zs = DepthAt(x, y);
    ++i;
    if (zs <= 0) continue;
    const double behind = zr - zs;
    if (behind > params_.depth_bias && behind < params_.thickness) return 0;
  }
  return 1;
}

int Visibility(int u, int v, const Direction& l, const DepthFrame& frame, const Direction& normal,
               const VisibilityParams& params) {
  if (!frame.valid(u, v)) throw ContractError("Visibility: invalid depth at query pixel");
  return DepthMarcher(frame, params).Visible(u, v, l, normal);
}

}  // namespace envlight
