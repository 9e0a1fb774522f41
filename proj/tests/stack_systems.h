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


// Irradiance-stack systems with a known full-rank design matrix, checked
// with an SVD that shares no code with the solver under test.

#ifndef ENVLIGHT_TESTS_STACK_SYSTEMS_H_
#define ENVLIGHT_TESTS_STACK_SYSTEMS_H_

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "envlight/forward.h"

namespace envlight::testing {

struct StackSystem {
  IrradianceStack stack;
  std::vector<std::size_t> live;  // directions with a non-zero basis image
  double condition = 0;           // of A restricted to `live`
};

inline Eigen::MatrixXd DesignMatrix(const IrradianceStack& stack, const std::vector<std::size_t>& cols) {
  const int rows = stack.width * stack.height;
  Eigen::MatrixXd a(rows, static_cast<int>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const auto map = stack.map(cols[j]);
    for (int i = 0; i < rows; ++i) a(i, static_cast<int>(j)) = map[i] * stack.solid_angles[cols[j]];
  }
  return a;
}

// Stack of a seeded 64x64 scene at 32x32 over a face_res grid.
inline StackSystem BuildStackSystem(ScenePreset preset, uint64_t seed, int face_res) {
  SceneGenOptions so;
  so.width = so.height = 64;
  const SceneDesc scene = GenTestScene(preset, Material{{0.7f, 0.7f, 0.7f}, 0.0, 0.5}, seed, so);
  const RenderResult r = RenderFull(scene, LatLongMap(16, 8, 1.0f));
  StackSystem out;
  out.stack = RenderIrradianceStack(r.depth, r.gt.normals, CubeDirs(face_res), scene.camera.world_to_cam());
  for (std::size_t k = 0; k < out.stack.size(); ++k) {
    double sum = 0;
    for (float x : out.stack.map(k)) sum += x;
    if (sum > 0) out.live.push_back(k);
  }
  if (out.live.empty()) return out;
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(DesignMatrix(out.stack, out.live)).singularValues();
  out.condition = s(s.size() - 1) > 0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
  return out;
}

// Shading image A L* for a per-direction grey light.
inline Image SynthesizeShading(const IrradianceStack& stack, const std::vector<double>& light) {
  Image s(stack.width, stack.height, 3);
  for (int y = 0; y < stack.height; ++y)
    for (int x = 0; x < stack.width; ++x) {
      double v = 0;
      for (std::size_t k = 0; k < stack.size(); ++k) v += stack.at(k, x, y) * stack.solid_angles[k] * light[k];
      for (int c = 0; c < 3; ++c) s.at(x, y, c) = static_cast<float>(v);
    }
  return s;
}

}  // namespace envlight::testing

#endif  // ENVLIGHT_TESTS_STACK_SYSTEMS_H_
