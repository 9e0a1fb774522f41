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

// Reflectance decomposition: rgb = albedo * diffuse_shading + specular_shading.

#ifndef ENVLIGHT_DECOMPOSE_H_
#define ENVLIGHT_DECOMPOSE_H_

#include <cstdint>
#include <vector>

#include "envlight/core.h"
#include "envlight/geometry.h"

namespace envlight {

struct RenderResult;

struct Decomposition {
  Image albedo;    // RGB in [0, 1]
  Image diffuse;   // RGB diffuse shading, >= 0
  Image specular;  // RGB specular shading, >= 0
  NormalMap normals;
  std::vector<uint8_t> mask;  // 1 where the factors carry evidence

  int width() const { return albedo.width(); }
  int height() const { return albedo.height(); }
  bool valid(int u, int v) const { return mask[static_cast<std::size_t>(v) * width() + u] != 0; }

  // albedo * diffuse + specular.
  Image Reconstruct() const;
  // Crops every factor to the given window.
  Decomposition Cropped(int x0, int y0, int w, int h) const;
};

// Ground-truth factors of a synthetic render, repackaged unchanged.
Decomposition DecomposeGt(const RenderResult& render);

struct DichromaticOptions {
  // Albedo channels below this produce zero diffuse shading and an invalid
  // mask entry.
  double albedo_guard = 0.02;
  // Pixels whose specular-free colour rgb - min(rgb) peaks below this
  // fraction of the median pixel maximum join the neutral cluster.
  double neutral_chroma = 0.04;
  int hue_bins = 12;
};

struct DichromaticResult {
  Decomposition decomposition;
  // Sum of |albedo * diffuse + specular - rgb| over unguarded channels,
  // divided by the sum of rgb.
  double relative_residual = 0;
};

// Classical white-specular separation. Pixels are clustered by the hue of
// their specular-free colour (rgb - min(rgb)); each cluster's diffuse
// chromaticity is the median rgb chromaticity of its members; each pixel is
// then split into a diffuse part along that chromaticity and a white part.
// `normals` are passed through. Throws ContractError on an all-black input.
DichromaticResult DecomposeDichromatic(const Image& rgb, const NormalMap& normals,
                                       const DichromaticOptions& options = {});

}  // namespace envlight

#endif  // ENVLIGHT_DECOMPOSE_H_
