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

#include "envlight/metrics.h"

#include <algorithm>
#include <cmath>

namespace envlight {

namespace {

void CheckShapes(const char* what, const LatLongMap& est, const LatLongMap& gt) {
  if (!est.SameShape(gt)) {
    throw ContractError(std::string(what) + ": resolution mismatch, est " + ShapeString(est.image()) + " vs gt " +
                        ShapeString(gt.image()));
  }
}

// Associated Legendre P_l^m(x) for 0 <= m <= l <= order, without the
// Condon-Shortley phase, stored at l * (order + 1) + m.
std::vector<double> Legendre(double x, int order) {
  const int n = order + 1;
  std::vector<double> p(static_cast<std::size_t>(n) * n, 0.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  p[0] = 1.0;
  for (int m = 1; m <= order; ++m) p[m * n + m] = p[(m - 1) * n + (m - 1)] * (2 * m - 1) * s;
  for (int m = 0; m < order; ++m) p[(m + 1) * n + m] = x * (2 * m + 1) * p[m * n + m];
  for (int m = 0; m <= order; ++m) {
    for (int l = m + 2; l <= order; ++l) {
      p[l * n + m] = ((2 * l - 1) * x * p[(l - 1) * n + m] - (l + m - 1) * p[(l - 2) * n + m]) / (l - m);
    }
  }
  return p;
}

// K_l^m, with the sqrt(2) of m != 0 folded in.
std::vector<double> Normalization(int order) {
  const int n = order + 1;
  std::vector<double> k(static_cast<std::size_t>(n) * n, 0.0);
  for (int l = 0; l <= order; ++l) {
    for (int m = 0; m <= l; ++m) {
      double ratio = 1.0;  // (l - m)! / (l + m)!
      for (int i = l - m + 1; i <= l + m; ++i) ratio /= i;
      k[l * n + m] = std::sqrt((2 * l + 1) / (4 * kPi) * ratio) * (m == 0 ? 1.0 : std::sqrt(2.0));
    }
  }
  return k;
}

void CheckOrder(int order) {
  if (order < 0 || order > kMaxShOrder) throw ContractError("SH order must be within [0, 10]");
}

}  // namespace

double LightRmse(const LatLongMap& est, const LatLongMap& gt, bool solid_angle_weighted) {
  CheckShapes("LightRmse", est, gt);
  const int w = est.width(), h = est.height();
  const SolidAngleTable sa = SolidAngles(w, h);
  double sum = 0, norm = 0;
  for (int v = 0; v < h; ++v) {
    const double wt = solid_angle_weighted ? sa.at(v) : 1.0;
    for (int u = 0; u < w; ++u) {
      for (int c = 0; c < 3; ++c) {
        const double d = static_cast<double>(est.at(u, v, c)) - gt.at(u, v, c);
        sum += wt * d * d;
        norm += wt;
      }
    }
  }
  return std::sqrt(sum / norm);
}

double Huber(const LatLongMap& est, const LatLongMap& gt, double delta) {
  if (!(delta > 0)) throw ContractError("Huber: delta must be positive");
  CheckShapes("Huber", est, gt);
  const auto& a = est.image().data();
  const auto& b = gt.image().data();
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(static_cast<double>(a[i]) - b[i]);
    sum += d <= delta ? 0.5 * d * d : delta * (d - 0.5 * delta);
  }
  return sum / static_cast<double>(a.size());
}

namespace {

Camera ProbeCamera(int resolution) {
  const double az = 0.6, el = 35.0 * kPi / 180.0, dist = 3.0;
  const Vec3 target{0, 0, 0.4};
  const Vec3 eye = target + dist * Vec3{std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
  return Camera::LookAt(eye, target, Intrinsics::FromFov(resolution, resolution, 50.0 * kPi / 180.0));
}

Primitive SphereProbe(const Material& m) { return {Sphere{{0, 0, 0.5}, 0.5}, m, std::nullopt}; }

std::vector<Primitive> BoxCluster(const Material& m) {
  return {{Box{{-0.3, -0.25, 0.3}, {0.3, 0.3, 0.3}, 0.4}, m, std::nullopt},
          {Box{{0.45, 0.35, 0.2}, {0.2, 0.25, 0.2}, -0.3}, m, std::nullopt}};
}

SceneDesc Probe(std::vector<Primitive> objects, int resolution) {
  SceneDesc s;
  s.primitives = std::move(objects);
  s.camera = ProbeCamera(resolution);
  return s;
}

const Material kDiffuse{{0.7f, 0.7f, 0.7f}, 0.0, 0.5};
const Material kGlossy{{0.5f, 0.5f, 0.5f}, 0.5, 0.05};
const Material kMirror{{0.0f, 0.0f, 0.0f}, 1.0, 0.01};

}  // namespace

ProbeSet::ProbeSet(std::vector<SceneDesc> scenes, const RenderOptions& options) {
  if (scenes.empty()) throw ContractError("ProbeSet: no probe scenes");
  for (const SceneDesc& s : scenes) transports_.push_back(std::make_shared<const SceneTransport>(s, options));
}

ProbeSet ProbeSet::Default(int resolution) {
  return ProbeSet({Probe({SphereProbe(kDiffuse)}, resolution), Probe({SphereProbe(kGlossy)}, resolution),
                   Probe({SphereProbe(kMirror)}, resolution), Probe(BoxCluster(kDiffuse), resolution)});
}

ProbeSet ProbeSet::DiffuseOnly(int resolution) {
  return ProbeSet({Probe({SphereProbe(kDiffuse)}, resolution), Probe(BoxCluster(kDiffuse), resolution)});
}

double RenderRmse(const LatLongMap& est, const LatLongMap& gt, const ProbeSet& probes) {
  double total = 0;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const RenderResult a = probes.transport(p).Render(est);
    const RenderResult b = probes.transport(p).Render(gt);
    double sum = 0;
    std::size_t n = 0;
    for (int y = 0; y < a.rgb.height(); ++y) {
      for (int x = 0; x < a.rgb.width(); ++x) {
        if (!b.gt.mask[static_cast<std::size_t>(y) * a.rgb.width() + x]) continue;
        for (int c = 0; c < 3; ++c) {
          const double d = static_cast<double>(a.rgb.at(x, y, c)) - b.rgb.at(x, y, c);
          sum += d * d;
          ++n;
        }
      }
    }
    total += n ? std::sqrt(sum / n) : 0.0;
  }
  return total / probes.size();
}

std::vector<double> ShBasis(const Direction& d, int order) {
  CheckOrder(order);
  const int n = order + 1;
  const std::vector<double> p = Legendre(std::clamp(d.z, -1.0, 1.0), order);
  const std::vector<double> k = Normalization(order);
  const double phi = std::atan2(d.y, d.x);
  std::vector<double> y(static_cast<std::size_t>(n) * n);
  for (int l = 0; l <= order; ++l) {
    y[l * (l + 1)] = k[l * n] * p[l * n];
    for (int m = 1; m <= l; ++m) {
      const double base = k[l * n + m] * p[l * n + m];
      y[l * (l + 1) + m] = base * std::cos(m * phi);
      y[l * (l + 1) - m] = base * std::sin(m * phi);
    }
  }
  return y;
}

ShCoeffs ShFit(const LatLongMap& env, int order) {
  CheckOrder(order);
  const int w = env.width(), h = env.height();
  const int n = order + 1;
  const std::vector<double> k = Normalization(order);

  // Azimuthal integrals of cos(m phi) and sin(m phi) over each column.
  const double dphi = 2 * kPi / w;
  std::vector<double> col_cos(static_cast<std::size_t>(w) * n), col_sin(static_cast<std::size_t>(w) * n);
  for (int u = 0; u < w; ++u) {
    const double a = dphi * u, b = dphi * (u + 1);
    col_cos[u * n] = dphi;
    col_sin[u * n] = 0;
    for (int m = 1; m <= order; ++m) {
      col_cos[u * n + m] = (std::sin(m * b) - std::sin(m * a)) / m;
      col_sin[u * n + m] = (std::cos(m * a) - std::cos(m * b)) / m;
    }
  }

  // Polar integrals per band: 8-node Gauss-Legendre in cos(theta).
  static constexpr std::array<double, 8> kNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                                   -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                                   0.7966664774136267,  0.9602898564975363};
  static constexpr std::array<double, 8> kWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066278778366,
                                                     0.3626837833783620, 0.3626837833783620, 0.3137066278778366,
                                                     0.2223810344533745, 0.1012285362903763};

  ShCoeffs out;
  out.order = order;
  out.c.assign(static_cast<std::size_t>(n) * n, {0, 0, 0});
  std::vector<double> band(static_cast<std::size_t>(n) * n);
  std::vector<std::array<double, 3>> tc(n), ts(n);
  for (int v = 0; v < h; ++v) {
    const double x0 = std::cos(kPi * (v + 1) / h), x1 = std::cos(kPi * v / h);
    std::fill(band.begin(), band.end(), 0.0);
    for (std::size_t q = 0; q < kNodes.size(); ++q) {
      const double x = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * kNodes[q];
      const std::vector<double> p = Legendre(x, order);
      for (std::size_t i = 0; i < band.size(); ++i) band[i] += 0.5 * (x1 - x0) * kWeights[q] * p[i];
    }
    for (int m = 0; m <= order; ++m) {
      tc[m] = {0, 0, 0};
      ts[m] = {0, 0, 0};
      for (int u = 0; u < w; ++u) {
        for (int c = 0; c < 3; ++c) {
          const double val = env.at(u, v, c);
          tc[m][c] += val * col_cos[u * n + m];
          ts[m][c] += val * col_sin[u * n + m];
        }
      }
    }
    for (int l = 0; l <= order; ++l) {
      for (int m = 0; m <= l; ++m) {
        const double f = k[l * n + m] * band[l * n + m];
        for (int c = 0; c < 3; ++c) {
          out.c[l * (l + 1) + m][c] += f * tc[m][c];
          if (m > 0) out.c[l * (l + 1) - m][c] += f * ts[m][c];
        }
      }
    }
  }
  return out;
}

LatLongMap ShRender(const ShCoeffs& coeffs, int width, int height, bool clamp_negative) {
  CheckOrder(coeffs.order);
  if (coeffs.c.size() != static_cast<std::size_t>(coeffs.order + 1) * (coeffs.order + 1)) {
    throw ContractError("ShRender: coefficient count does not match the order");
  }
  LatLongMap out(width, height);
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      const std::vector<double> y = ShBasis(LatLongToDir(u, v, width, height), coeffs.order);
      for (int c = 0; c < 3; ++c) {
        double s = 0;
        for (std::size_t i = 0; i < y.size(); ++i) s += coeffs.c[i][c] * y[i];
        out.at(u, v, c) = static_cast<float>(clamp_negative ? std::max(0.0, s) : s);
      }
    }
  }
  return out;
}

}  // namespace envlight
