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

// End-to-end estimation: crop, decomposition, diffuse translation, specular
// projection and fusion, plus the sequence variant with temporal smoothing.

#ifndef ENVLIGHT_PIPELINE_H_
#define ENVLIGHT_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "envlight/decompose.h"
#include "envlight/forward.h"
#include "envlight/fuse.h"
#include "envlight/geometry.h"
#include "envlight/radiometry.h"
#include "envlight/temporal.h"
#include "envlight/translate.h"

namespace envlight {

struct RunConfig {
  uint64_t seed = 0;
  int crop = 384;  // central square; must fit in the frame
  int cube_face_res = 8;
  int irradiance_res = 32;
  int env_width = 256;
  int env_height = 128;
  // Visibility and normals for the irradiance stack are evaluated at
  // irradiance_res * stack_supersample before area averaging.
  int stack_supersample = 2;
  double bilateral_sigma_space = 1.5;  // pixels
  double bilateral_sigma_range = 0.02; // metres
  VisibilityParams visibility;
  DiffuseSolveConfig solver;
  FusionConfig fusion;
  double alpha = 0.3;

  // Throws ContractError on non-positive resolutions, crop not divisible by
  // the stack working resolution, or invalid nested configs.
  void Validate() const;
  bool operator==(const RunConfig&) const;
};

struct EstimateInput {
  Image rgb;
  DepthFrame depth;
  Mat3 cam_to_world = Mat3::Identity();
  // When present, used instead of the dichromatic decomposition.
  std::optional<Decomposition> decomposition;
};

struct EstimateResult {
  LatLongMap env;          // fused estimate, world frame
  LatLongMap diffuse_env;  // diffuse-only estimate
  CubeGrid grid;           // solved cube-grid intensities
  SparseAngularMap specular;
  FusionResult fusion;
  DiffuseSolution solution;
  double seconds = 0;
};

// Throws ContractError if the crop does not fit the frame or inputs disagree
// in shape.
EstimateResult Estimate(const EstimateInput& input, const RunConfig& config);

struct SequenceFrame {
  int index = 0;
  EstimateInput input;
  double yaw_to_world = 0;
};

struct SequenceResult {
  std::vector<FrameEstimate> raw;
  std::vector<FrameEstimate> smoothed;
  std::vector<double> raw_loss;       // consecutive TemporalLoss
  std::vector<double> smoothed_loss;
};

SequenceResult EstimateSequence(const std::vector<SequenceFrame>& frames, const RunConfig& config);

}  // namespace envlight

#endif  // ENVLIGHT_PIPELINE_H_
