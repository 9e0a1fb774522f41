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

// Angular fusion of the low-frequency diffuse estimate with sparse specular
// observations.

#ifndef ENVLIGHT_FUSE_H_
#define ENVLIGHT_FUSE_H_

#include <array>
#include <vector>

#include "envlight/radiometry.h"
#include "envlight/translate.h"

namespace envlight {

struct FusionConfig {
  double spec_weight_at_full_count = 0.8;
  double count_saturation = 16;
  double splat_sigma_deg = 2.0;
  bool gain_fit = true;
  // Both sides of the gain fit are low-passed with this angular Gaussian
  // (over valid bins only) before the per-channel least squares, so the
  // sharp specular evidence is compared with the blurred diffuse estimate at
  // a common bandwidth. 0 fits the raw values.
  double gain_fit_sigma_deg = 8.0;

  void Validate() const;
};

struct FusionResult {
  LatLongMap env;
  std::array<double, 3> gain{1, 1, 1};
  LatLongMap spec_splat;          // hole-filled specular values
  std::vector<double> confidence; // per-bin blend weight w
};

// out = (1 - w) * diffuse + w * gain * splat(spec), w = ceiling *
// min(count_eff / count_saturation, 1), clamped >= 0. Bins with no specular
// evidence within the splat support keep the diffuse value exactly.
FusionResult Fuse(const LatLongMap& diffuse, const SparseAngularMap& spec, const FusionConfig& config = {});

// Normalized angular Gaussian filter over a lat-long grid: out(b) =
// sum_j g(b, j) weight_j value_j / sum_j g(b, j) weight_j, restricted to
// sources with weight > 0; `support` receives sum_j g(b, j) weight_j.
// Support radius is 3 sigma.
LatLongMap AngularSplat(const LatLongMap& values, const std::vector<double>& weights, double sigma_rad,
                        std::vector<double>* support);

}  // namespace envlight

#endif  // ENVLIGHT_FUSE_H_
