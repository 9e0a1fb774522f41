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

#include "envlight/temporal.h"

#include <cmath>

namespace envlight {

double TemporalLoss(const FrameEstimate& a, const FrameEstimate& b) {
  if (!a.env.SameShape(b.env)) {
    throw ContractError("TemporalLoss: resolution mismatch " + ShapeString(a.env.image()) + " vs " +
                        ShapeString(b.env.image()));
  }
  const double dyaw = b.yaw_to_world - a.yaw_to_world;
  const LatLongMap warped = dyaw == 0 ? b.env : RotateEnv(b.env, dyaw);
  const auto& x = a.env.image().data();
  const auto& y = warped.image().data();
  double sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(x[i]) - y[i];
    sum += d * d;
  }
  return sum / static_cast<double>(x.size());
}

std::vector<FrameEstimate> SmoothSequence(const std::vector<FrameEstimate>& estimates, double alpha) {
  if (estimates.empty()) throw ContractError("SmoothSequence: empty sequence");
  if (!(alpha >= 0 && alpha <= 1)) throw ContractError("SmoothSequence: alpha outside [0, 1]");
  for (std::size_t i = 1; i < estimates.size(); ++i) {
    if (estimates[i].index <= estimates[i - 1].index) {
      throw ContractError("SmoothSequence: frame indices must be strictly increasing");
    }
    if (!estimates[i].env.SameShape(estimates[0].env)) {
      throw ContractError("SmoothSequence: resolution mismatch at frame " + std::to_string(estimates[i].index));
    }
  }
  if (alpha == 1) return estimates;

  std::vector<FrameEstimate> out;
  out.reserve(estimates.size());
  out.push_back(estimates[0]);
  LatLongMap state = RotateEnv(estimates[0].env, estimates[0].yaw_to_world);
  for (std::size_t i = 1; i < estimates.size(); ++i) {
    const FrameEstimate& f = estimates[i];
    const LatLongMap world = RotateEnv(f.env, f.yaw_to_world);
    auto& s = state.image().storage();
    const auto& x = world.image().data();
    for (std::size_t k = 0; k < s.size(); ++k) {
      s[k] = static_cast<float>(alpha * x[k] + (1.0 - alpha) * s[k]);
    }
    out.push_back({f.index, RotateEnv(state, -f.yaw_to_world), f.yaw_to_world});
  }
  return out;
}

std::vector<double> TemporalLossTrace(const std::vector<FrameEstimate>& estimates) {
  std::vector<double> trace;
  for (std::size_t i = 1; i < estimates.size(); ++i) trace.push_back(TemporalLoss(estimates[i - 1], estimates[i]));
  return trace;
}

}  // namespace envlight
