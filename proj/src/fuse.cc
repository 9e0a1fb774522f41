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

#include "envlight/fuse.h"

#include <algorithm>

namespace envlight {

namespace {

constexpr double kDeg = kPi / 180.0;

std::vector<Direction> BinDirections(int w, int h) {
  std::vector<Direction> dirs;
  dirs.reserve(static_cast<std::size_t>(w) * h);
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) dirs.push_back(LatLongToDir(u, v, w, h));
  return dirs;
}

// Per-channel least-squares gain of the specular evidence against the
// diffuse estimate, both low-passed over the valid bins. The fit runs on a
// grid of at most 64 x 32 bins (block means over valid bins).
std::array<double, 3> FitGain(const LatLongMap& diffuse, const SparseAngularMap& spec, double sigma_rad) {
  const int w = diffuse.width(), h = diffuse.height();
  int f = 1;
  while (w / (2 * f) >= 64 && w % (2 * f) == 0 && h % (2 * f) == 0) f *= 2;
  const int cw = w / f, ch = h / f;
  const std::size_t cn = static_cast<std::size_t>(cw) * ch;
  LatLongMap s_coarse(cw, ch), d_coarse(cw, ch);
  std::vector<double> weight(cn, 0.0);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!spec.valid(u, v)) continue;
      const std::size_t i = static_cast<std::size_t>(v / f) * cw + u / f;
      weight[i] += 1;
      for (int c = 0; c < 3; ++c) {
        s_coarse.at(u / f, v / f, c) += spec.values.at(u, v, c);
        d_coarse.at(u / f, v / f, c) += diffuse.at(u, v, c);
      }
    }
  }
  for (std::size_t i = 0; i < cn; ++i) {
    if (weight[i] <= 0) continue;
    const int u = static_cast<int>(i % cw), v = static_cast<int>(i / cw);
    for (int c = 0; c < 3; ++c) {
      s_coarse.at(u, v, c) = static_cast<float>(s_coarse.at(u, v, c) / weight[i]);
      d_coarse.at(u, v, c) = static_cast<float>(d_coarse.at(u, v, c) / weight[i]);
    }
  }
  const LatLongMap s_low = AngularSplat(s_coarse, weight, sigma_rad, nullptr);
  const LatLongMap d_low = AngularSplat(d_coarse, weight, sigma_rad, nullptr);
  std::array<double, 3> gain{1, 1, 1};
  for (int c = 0; c < 3; ++c) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < cn; ++i) {
      if (weight[i] <= 0) continue;
      const int u = static_cast<int>(i % cw), v = static_cast<int>(i / cw);
      const double sv = s_low.at(u, v, c);
      num += weight[i] * sv * d_low.at(u, v, c);
      den += weight[i] * sv * sv;
    }
    gain[c] = den > 0 ? std::max(0.0, num / den) : 1.0;
  }
  return gain;
}

}  // namespace

void FusionConfig::Validate() const {
  if (!(spec_weight_at_full_count >= 0 && spec_weight_at_full_count <= 1)) {
    throw ContractError("FusionConfig: spec_weight_at_full_count outside [0, 1]");
  }
  if (!(count_saturation > 0)) throw ContractError("FusionConfig: count_saturation must be positive");
  if (!(splat_sigma_deg >= 0) || !(gain_fit_sigma_deg >= 0)) {
    throw ContractError("FusionConfig: angular radii must be >= 0");
  }
}

LatLongMap AngularSplat(const LatLongMap& values, const std::vector<double>& weights, double sigma_rad,
                        std::vector<double>* support) {
  const int w = values.width(), h = values.height();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (weights.size() != n) throw ContractError("AngularSplat: weight count does not match the map");
  std::vector<std::array<double, 3>> acc(n, {0, 0, 0});
  std::vector<double> wsum(n, 0.0);

  if (sigma_rad <= 0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (weights[i] <= 0) continue;
      wsum[i] = weights[i];
      for (int c = 0; c < 3; ++c) acc[i][c] = weights[i] * values.at(static_cast<int>(i % w), static_cast<int>(i / w), c);
    }
  } else {
    const std::vector<Direction> dirs = BinDirections(w, h);
    const double reach = 3.0 * sigma_rad;
    const double cos_reach = std::cos(std::min(reach, kPi));
    const double inv2s2 = 1.0 / (2.0 * sigma_rad * sigma_rad);
    const double row_step = kPi / h, col_step = 2.0 * kPi / w;
    const int dv = static_cast<int>(std::ceil(reach / row_step)) + 1;
    for (int vj = 0; vj < h; ++vj) {
      for (int uj = 0; uj < w; ++uj) {
        const std::size_t j = static_cast<std::size_t>(vj) * w + uj;
        const double wj = weights[j];
        if (wj <= 0) continue;
        const Rgb val = values.rgb(uj, vj);
        const Direction& dj = dirs[j];
        for (int v = std::max(0, vj - dv); v <= std::min(h - 1, vj + dv); ++v) {
          // Narrowest column width within the row bounds the azimuthal reach.
          const double s = std::min(std::sin(kPi * v / h), std::sin(kPi * (v + 1) / h));
          const double cols = s > 0 ? std::ceil(reach / (col_step * s)) + 1 : w;
          const int du = static_cast<int>(std::min(cols, static_cast<double>(w)));
          const bool full = 2 * du + 1 >= w;
          const int u_lo = full ? 0 : uj - du;
          const int u_hi = full ? w - 1 : uj + du;
          for (int uu = u_lo; uu <= u_hi; ++uu) {
            const int u = ((uu % w) + w) % w;
            const std::size_t b = static_cast<std::size_t>(v) * w + u;
            const double cosang = Dot(dirs[b], dj);
            if (cosang < cos_reach) continue;
            const double ang = std::acos(std::clamp(cosang, -1.0, 1.0));
            const double g = wj * std::exp(-ang * ang * inv2s2);
            wsum[b] += g;
            for (int c = 0; c < 3; ++c) acc[b][c] += g * val[c];
          }
        }
      }
    }
  }

  LatLongMap out(w, h);
  for (std::size_t i = 0; i < n; ++i) {
    if (wsum[i] <= 0) continue;
    for (int c = 0; c < 3; ++c)
      out.at(static_cast<int>(i % w), static_cast<int>(i / w), c) = static_cast<float>(acc[i][c] / wsum[i]);
  }
  if (support) *support = std::move(wsum);
  return out;
}

FusionResult Fuse(const LatLongMap& diffuse, const SparseAngularMap& spec, const FusionConfig& config) {
  config.Validate();
  if (!diffuse.SameShape(spec.values)) {
    throw ContractError("Fuse: diffuse map " + ShapeString(diffuse.image()) + " does not match specular map " +
                        ShapeString(spec.values.image()));
  }
  const int w = diffuse.width(), h = diffuse.height();
  const std::size_t n = static_cast<std::size_t>(w) * h;

  FusionResult result{diffuse, {1, 1, 1}, LatLongMap(w, h), std::vector<double>(n, 0.0)};
  if (spec.ValidCount() == 0) return result;

  // Hole filling: valid bins keep their own value and count.
  std::vector<double> counts(n);
  for (std::size_t i = 0; i < n; ++i) counts[i] = spec.counts[i];
  std::vector<double> support;
  LatLongMap splat = AngularSplat(spec.values, counts, config.splat_sigma_deg * kDeg, &support);
  for (std::size_t i = 0; i < n; ++i) {
    if (!spec.mask[i]) continue;
    support[i] = counts[i];
    const int u = static_cast<int>(i % w), v = static_cast<int>(i / w);
    for (int c = 0; c < 3; ++c) splat.at(u, v, c) = spec.values.at(u, v, c);
  }

  if (config.gain_fit) result.gain = FitGain(diffuse, spec, config.gain_fit_sigma_deg * kDeg);

  for (std::size_t i = 0; i < n; ++i) {
    if (support[i] <= 0) continue;
    const double wgt = config.spec_weight_at_full_count * std::min(support[i] / config.count_saturation, 1.0);
    result.confidence[i] = wgt;
    const int u = static_cast<int>(i % w), v = static_cast<int>(i / w);
    for (int c = 0; c < 3; ++c) {
      const double mixed = (1.0 - wgt) * diffuse.at(u, v, c) + wgt * result.gain[c] * splat.at(u, v, c);
      result.env.at(u, v, c) = static_cast<float>(std::max(0.0, mixed));
    }
  }
  result.spec_splat = std::move(splat);
  return result;
}

}  // namespace envlight
