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

// Spatial to angular translation.
//
// Diffuse: the shading image is a non-negative combination of irradiance
// basis images, s = A L with A[:, k] = R_k * dw_k. SolveDiffuse recovers L by
// Tikhonov-regularized NNLS,
//
//   min_{L >= 0} ||A L - s||^2 + lambda * c * ||L||^2,
//
// where c is the mean squared column norm of A, so lambda is relative to
// unit-normalized columns. The solver is monotone FISTA (Beck & Teboulle)
// with adaptive restart on the K x K normal equations after symmetric Jacobi
// scaling, step 1 / Lipschitz estimated by power iteration.
//
// Specular: each pixel's specular colour is binned at its mirror direction.

#ifndef ENVLIGHT_TRANSLATE_H_
#define ENVLIGHT_TRANSLATE_H_

#include <array>
#include <cstdint>
#include <vector>

#include "envlight/decompose.h"
#include "envlight/forward.h"
#include "envlight/geometry.h"
#include "envlight/radiometry.h"

namespace envlight {

struct DiffuseSolveConfig {
  double lambda = 1e-3;
  int max_iter = 500;
  double tol = 1e-6;  // relative change of the iterate
  bool nonneg = true;
  bool record_trace = false;

  void Validate() const;
};

struct DiffuseSolution {
  std::vector<Rgb> values;           // one per stack direction
  std::array<double, 3> residual{};  // ||A L - s|| per channel
  std::array<double, 3> shading_norm{};  // ||s|| per channel
  std::array<int, 3> iterations{};
  // Objective per accepted iterate, per channel (only with record_trace).
  std::array<std::vector<double>, 3> trace;
};

// `shading` must already be at the stack resolution. Throws
// DegenerateSystemError if every basis image is zero.
DiffuseSolution SolveDiffuse(const Image& shading, const IrradianceStack& stack,
                             const DiffuseSolveConfig& config = {});

// Single-channel solver over an explicit column-major design matrix. Exposed
// for tests; SolveDiffuse builds on the same routine.
struct NnlsProblem {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;  // column-major rows x cols
  std::vector<double> b;  // rows
};
struct NnlsResult {
  std::vector<double> x;
  double residual = 0;  // ||A x - b||
  double objective = 0;
  int iterations = 0;
  std::vector<double> trace;
};
NnlsResult SolveNnls(const NnlsProblem& problem, const DiffuseSolveConfig& config = {});

// Lat-long accumulation of specular evidence.
struct SparseAngularMap {
  LatLongMap values;            // mean contribution per bin, 0 where invalid
  std::vector<uint8_t> mask;    // 1 = valid
  std::vector<uint32_t> counts;

  SparseAngularMap() = default;
  SparseAngularMap(int width, int height)
      : values(width, height), mask(static_cast<std::size_t>(width) * height, 0),
        counts(static_cast<std::size_t>(width) * height, 0) {}

  int width() const { return values.width(); }
  int height() const { return values.height(); }
  std::size_t index(int u, int v) const { return static_cast<std::size_t>(v) * width() + u; }
  bool valid(int u, int v) const { return mask[index(u, v)] != 0; }
  std::size_t ValidCount() const;
};

// Pixels with a valid decomposition mask, valid normal, valid depth and any
// non-zero specular channel contribute to the bin holding their world-space
// mirror direction. Pixels with n . view <= 1e-4 are skipped.
SparseAngularMap ProjectSpecular(const Decomposition& decomp, const DepthFrame& frame, const Mat3& cam_to_world,
                                 int out_width = LatLongMap::kDefaultWidth,
                                 int out_height = LatLongMap::kDefaultHeight);

}  // namespace envlight

#endif  // ENVLIGHT_TRANSLATE_H_
