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

#include "envlight/radiometry.h"

#include <algorithm>
#include <string>

namespace envlight {

namespace {

void CheckLatLongShape(int width, int height) {
  if (height < 1 || width != 2 * height) {
    throw ContractError("lat-long map must satisfy width == 2*height, got " +
                        std::to_string(width) + "x" + std::to_string(height));
  }
}

struct FaceBasis {
  Vec3 normal, u_axis, v_axis;
};

// OpenGL cube-map orientation.
constexpr std::array<FaceBasis, 6> kFaces = {{
    {{1, 0, 0}, {0, 0, -1}, {0, -1, 0}},
    {{-1, 0, 0}, {0, 0, 1}, {0, -1, 0}},
    {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}},
    {{0, -1, 0}, {1, 0, 0}, {0, 0, -1}},
    {{0, 0, 1}, {1, 0, 0}, {0, -1, 0}},
    {{0, 0, -1}, {-1, 0, 0}, {0, -1, 0}},
}};

// Solid angle subtended by the face-plane rectangle [-1, x] x [-1, y] seen
// from the cube center, up to a constant.
double AreaElement(double x, double y) { return std::atan2(x * y, std::sqrt(x * x + y * y + 1.0)); }

double WrapIndex(double u, int n) {
  double r = std::fmod(u, static_cast<double>(n));
  return r < 0 ? r + n : r;
}

}  // namespace

LatLongMap::LatLongMap(int width, int height, float fill) {
  CheckLatLongShape(width, height);
  image_ = Image(width, height, 3, fill);
}

LatLongMap::LatLongMap(Image image) {
  CheckLatLongShape(image.width(), image.height());
  if (image.channels() != 3) throw ContractError("lat-long map must have 3 channels");
  image_ = std::move(image);
}

void LatLongMap::Validate() const {
  const auto data = image_.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i]) || data[i] < 0.0f) {
      throw ContractError("lat-long map has invalid radiance " + std::to_string(data[i]) +
                          " at element " + std::to_string(i));
    }
  }
}

Rgb LatLongMap::Sample(const Direction& d) const {
  const int w = width(), h = height();
  const LatLongCoord c = DirToLatLong(d, w, h);
  const double u = WrapIndex(c.u, w);
  const double v = std::clamp(c.v, 0.0, static_cast<double>(h - 1));
  const int u0 = static_cast<int>(std::floor(u));
  const int v0 = std::min(static_cast<int>(std::floor(v)), h - 1);
  const int u1 = (u0 + 1) % w;
  const int v1 = std::min(v0 + 1, h - 1);
  const double fu = u - u0, fv = v - v0;
  Rgb out;
  for (int ch = 0; ch < 3; ++ch) {
    const double top = (1 - fu) * at(u0 % w, v0, ch) + fu * at(u1, v0, ch);
    const double bottom = (1 - fu) * at(u0 % w, v1, ch) + fu * at(u1, v1, ch);
    out[ch] = static_cast<float>((1 - fv) * top + fv * bottom);
  }
  return out;
}

Direction LatLongToDir(int u, int v, int width, int height) {
  if (u < 0 || u >= width || v < 0 || v >= height) {
    throw ContractError("LatLongToDir: pixel (" + std::to_string(u) + ", " + std::to_string(v) +
                        ") outside " + std::to_string(width) + "x" + std::to_string(height));
  }
  const double phi = 2.0 * kPi * (u + 0.5) / width;
  const double theta = kPi * (v + 0.5) / height;
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

LatLongCoord DirToLatLong(const Direction& d, int width, int height) {
  double phi = std::atan2(d.y, d.x);
  if (phi < 0) phi += 2.0 * kPi;
  if (phi >= 2.0 * kPi) phi = 0.0;
  const double theta = std::acos(std::clamp(d.z, -1.0, 1.0));
  return {phi * width / (2.0 * kPi) - 0.5, theta * height / kPi - 0.5};
}

LatLongBin DirToBin(const Direction& d, int width, int height) {
  const LatLongCoord c = DirToLatLong(d, width, height);
  int u = static_cast<int>(std::floor(c.u + 0.5));
  int v = static_cast<int>(std::floor(c.v + 0.5));
  u = ((u % width) + width) % width;
  v = std::clamp(v, 0, height - 1);
  return {u, v};
}

CubeGrid CubeDirs(int face_res) {
  if (face_res < 1) throw ContractError("CubeDirs: face_res must be >= 1");
  CubeGrid grid;
  grid.face_res = face_res;
  const std::size_t count = 6u * face_res * face_res;
  grid.dirs.reserve(count);
  grid.solid_angles.reserve(count);
  const double n = face_res;
  for (int f = 0; f < 6; ++f) {
    const FaceBasis& b = kFaces[f];
    for (int row = 0; row < face_res; ++row) {
      const double t = 2.0 * (row + 0.5) / n - 1.0;
      const double y0 = 2.0 * row / n - 1.0, y1 = 2.0 * (row + 1) / n - 1.0;
      for (int col = 0; col < face_res; ++col) {
        const double s = 2.0 * (col + 0.5) / n - 1.0;
        const double x0 = 2.0 * col / n - 1.0, x1 = 2.0 * (col + 1) / n - 1.0;
        grid.dirs.push_back(Normalize(b.normal + s * b.u_axis + t * b.v_axis));
        grid.solid_angles.push_back(AreaElement(x0, y0) - AreaElement(x0, y1) -
                                    AreaElement(x1, y0) + AreaElement(x1, y1));
      }
    }
  }
  return grid;
}

CubeCoord DirToCube(const Direction& d, int face_res) {
  const double ax = std::abs(d.x), ay = std::abs(d.y), az = std::abs(d.z);
  int face;
  double major;
  if (ax >= ay && ax >= az) {
    face = d.x >= 0 ? 0 : 1;
    major = ax;
  } else if (ay >= az) {
    face = d.y >= 0 ? 2 : 3;
    major = ay;
  } else {
    face = d.z >= 0 ? 4 : 5;
    major = az;
  }
  const FaceBasis& b = kFaces[face];
  const double s = Dot(d, b.u_axis) / major;
  const double t = Dot(d, b.v_axis) / major;
  return {face, (s + 1.0) * 0.5 * face_res - 0.5, (t + 1.0) * 0.5 * face_res - 0.5};
}

LatLongMap CubeToLatLong(const CubeGrid& grid, int width, int height) {
  if (!grid.values || grid.values->size() != grid.dirs.size()) {
    throw ContractError("CubeToLatLong: grid is missing per-direction values");
  }
  const auto& values = *grid.values;
  const int n = grid.face_res;
  LatLongMap out(width, height);
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      const CubeCoord c = DirToCube(LatLongToDir(u, v, width, height), n);
      const double col = std::clamp(c.col, 0.0, n - 1.0);
      const double row = std::clamp(c.row, 0.0, n - 1.0);
      const int c0 = std::min(static_cast<int>(col), n - 1);
      const int r0 = std::min(static_cast<int>(row), n - 1);
      const int c1 = std::min(c0 + 1, n - 1);
      const int r1 = std::min(r0 + 1, n - 1);
      const double fc = col - c0, fr = row - r0;
      const Rgb& a = values[grid.Index(c.face, r0, c0)];
      const Rgb& b = values[grid.Index(c.face, r0, c1)];
      const Rgb& cc = values[grid.Index(c.face, r1, c0)];
      const Rgb& d = values[grid.Index(c.face, r1, c1)];
      for (int ch = 0; ch < 3; ++ch) {
        const double top = (1 - fc) * a[ch] + fc * b[ch];
        const double bottom = (1 - fc) * cc[ch] + fc * d[ch];
        out.at(u, v, ch) = static_cast<float>((1 - fr) * top + fr * bottom);
      }
    }
  }
  return out;
}

std::vector<Rgb> LatLongToCube(const LatLongMap& map, const CubeGrid& grid) {
  const int w = map.width(), h = map.height();
  const SolidAngleTable table = SolidAngles(w, h);
  std::vector<std::array<double, 4>> acc(grid.size(), {0, 0, 0, 0});
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const CubeCoord c = DirToCube(LatLongToDir(u, v, w, h), grid.face_res);
      const int col = std::clamp(static_cast<int>(std::floor(c.col + 0.5)), 0, grid.face_res - 1);
      const int row = std::clamp(static_cast<int>(std::floor(c.row + 0.5)), 0, grid.face_res - 1);
      auto& a = acc[grid.Index(c.face, row, col)];
      const double dw = table.at(v);
      for (int ch = 0; ch < 3; ++ch) a[ch] += map.at(u, v, ch) * dw;
      a[3] += dw;
    }
  }
  std::vector<Rgb> out(grid.size(), Rgb{0, 0, 0});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (acc[k][3] <= 0) continue;
    for (int ch = 0; ch < 3; ++ch) out[k][ch] = static_cast<float>(acc[k][ch] / acc[k][3]);
  }
  return out;
}

LatLongMap RotateEnv(const LatLongMap& map, double yaw) {
  const int w = map.width(), h = map.height();
  const double shift = WrapIndex(yaw * w / (2.0 * kPi), w);
  const double nearest = std::round(shift);
  LatLongMap out(w, h);
  if (std::abs(shift - nearest) < 1e-6) {
    const int k = static_cast<int>(nearest) % w;
    for (int v = 0; v < h; ++v)
      for (int u = 0; u < w; ++u)
        for (int c = 0; c < 3; ++c) out.at((u + k) % w, v, c) = map.at(u, v, c);
    return out;
  }
  // out(u) = in(u - shift), linear in u.
  const int k = static_cast<int>(std::floor(shift));
  const double f = shift - k;
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const int a = ((u - k) % w + w) % w;
      const int b = ((u - k - 1) % w + w) % w;
      for (int c = 0; c < 3; ++c) {
        out.at(u, v, c) = static_cast<float>((1 - f) * map.at(a, v, c) + f * map.at(b, v, c));
      }
    }
  }
  return out;
}

double SolidAngleTable::Total() const {
  double sum = 0;
  for (double wgt : row_weights) sum += wgt * width;
  return sum;
}

SolidAngleTable SolidAngles(int width, int height) {
  CheckLatLongShape(width, height);
  SolidAngleTable table;
  table.width = width;
  table.height = height;
  table.row_weights.resize(height);
  const double dphi = 2.0 * kPi / width;
  for (int v = 0; v < height; ++v) {
    const double t0 = kPi * v / height, t1 = kPi * (v + 1) / height;
    table.row_weights[v] = dphi * (std::cos(t0) - std::cos(t1));
  }
  return table;
}

std::array<double, 3> Energy(const LatLongMap& map) {
  const SolidAngleTable table = SolidAngles(map.width(), map.height());
  std::array<double, 3> e{0, 0, 0};
  for (int v = 0; v < map.height(); ++v)
    for (int u = 0; u < map.width(); ++u)
      for (int c = 0; c < 3; ++c) e[c] += map.at(u, v, c) * table.at(v);
  return e;
}

LatLongMap DownsampleEnv(const LatLongMap& map, int width, int height) {
  CheckLatLongShape(width, height);
  if (map.width() % width != 0 || map.height() % height != 0) {
    throw ContractError("DownsampleEnv: " + ShapeString(map.image()) +
                        " is not a multiple of the target resolution");
  }
  const int fx = map.width() / width, fy = map.height() / height;
  const SolidAngleTable fine = SolidAngles(map.width(), map.height());
  LatLongMap out(width, height);
  for (int v = 0; v < height; ++v) {
    double wsum = 0;
    for (int j = 0; j < fy; ++j) wsum += fine.at(v * fy + j) * fx;
    for (int u = 0; u < width; ++u) {
      for (int c = 0; c < 3; ++c) {
        double sum = 0;
        for (int j = 0; j < fy; ++j)
          for (int i = 0; i < fx; ++i) sum += map.at(u * fx + i, v * fy + j, c) * fine.at(v * fy + j);
        out.at(u, v, c) = static_cast<float>(sum / wsum);
      }
    }
  }
  return out;
}

}  // namespace envlight
