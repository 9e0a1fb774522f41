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

// Evaluation metrics: environment-map RMSE and Huber distance, re-render
// RMSE over a fixed probe set, and real spherical-harmonic fitting.

#ifndef ENVLIGHT_METRICS_H_
#define ENVLIGHT_METRICS_H_

#include <array>
#include <memory>
#include <vector>

#include "envlight/forward.h"
#include "envlight/radiometry.h"

namespace envlight {

// Root mean square difference over bins and channels. `solid_angle_weighted`
// weights each bin by its solid angle instead. Throws ContractError on a
// resolution mismatch.
double LightRmse(const LatLongMap& est, const LatLongMap& gt, bool solid_angle_weighted = false);

// Mean Huber penalty over bins and channels. Throws ContractError if
// delta <= 0 or on a resolution mismatch.
double Huber(const LatLongMap& est, const LatLongMap& gt, double delta);

// Fixed probe scenes sharing one camera. Transports are built once, so
// repeated evaluations only re-shade.
class ProbeSet {
 public:
  // Diffuse sphere, glossy sphere (sigma 0.05), mirror sphere and a box
  // cluster, without a supporting plane.
  static ProbeSet Default(int resolution = 64);
  // Diffuse sphere and diffuse box cluster only.
  static ProbeSet DiffuseOnly(int resolution = 64);

  explicit ProbeSet(std::vector<SceneDesc> scenes, const RenderOptions& options = {});

  std::size_t size() const { return transports_.size(); }
  const SceneTransport& transport(std::size_t i) const { return *transports_[i]; }

 private:
  std::vector<std::shared_ptr<const SceneTransport>> transports_;
};

// Mean over probes of the RMSE between renders under `est` and `gt`, over
// covered pixels and channels, linear radiance units.
double RenderRmse(const LatLongMap& est, const LatLongMap& gt, const ProbeSet& probes);

// Real spherical harmonics up to degree `order` inclusive, (order + 1)^2
// coefficients per channel, index l * (l + 1) + m.
struct ShCoeffs {
  int order = 0;
  std::vector<std::array<double, 3>> c;
};

constexpr int kMaxShOrder = 10;

// Orthonormal real SH basis at `d`, all (l, m) with l <= order.
std::vector<double> ShBasis(const Direction& d, int order);

// Projection of the piecewise-constant map: every bin integrates the basis
// exactly over its area. Throws ContractError unless order in [0, 10].
ShCoeffs ShFit(const LatLongMap& env, int order);

// Series evaluated at bin centres; `clamp_negative` zeroes negative lobes.
LatLongMap ShRender(const ShCoeffs& coeffs, int width, int height, bool clamp_negative = false);

}  // namespace envlight

#endif  // ENVLIGHT_METRICS_H_
