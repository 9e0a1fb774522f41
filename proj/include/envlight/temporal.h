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

// Sequence smoothing of per-frame estimates and the consecutive-frame
// consistency loss. Frame-to-frame warps are yaw rotations.

#ifndef ENVLIGHT_TEMPORAL_H_
#define ENVLIGHT_TEMPORAL_H_

#include <vector>

#include "envlight/radiometry.h"

namespace envlight {

struct FrameEstimate {
  int index = 0;
  LatLongMap env;
  // Rotation about +Z taking this frame's environment into the world frame:
  // world = RotateEnv(env, yaw_to_world).
  double yaw_to_world = 0;
};

// Mean over bins and channels of (a - W(b))^2, where W rotates b into a's
// frame. Throws ContractError on a resolution mismatch.
double TemporalLoss(const FrameEstimate& a, const FrameEstimate& b);

// Exponential moving average in the world frame, each output rotated back
// into its own frame. alpha = 1 returns the input. Throws ContractError on an
// empty list, alpha outside [0, 1], non-increasing indices or mixed
// resolutions.
std::vector<FrameEstimate> SmoothSequence(const std::vector<FrameEstimate>& estimates, double alpha);

// TemporalLoss over consecutive pairs.
std::vector<double> TemporalLossTrace(const std::vector<FrameEstimate>& estimates);

}  // namespace envlight

#endif  // ENVLIGHT_TEMPORAL_H_
