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


// Shared helpers for the test binaries: seeded generators for maps,
// directions and small scenes.

#ifndef ENVLIGHT_TESTS_TEST_SUPPORT_H_
#define ENVLIGHT_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <cstdint>

#include "envlight/forward.h"
#include "envlight/radiometry.h"

namespace envlight::testing {

inline Direction RandomUnit(SplitMix64& rng) {
  const double z = rng.Uniform(-1.0, 1.0);
  const double phi = rng.Uniform(0.0, 2.0 * kPi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

inline LatLongMap RandomMap(SplitMix64& rng, int width, int height, double scale = 1.0) {
  LatLongMap m(width, height);
  for (float& x : m.image().data()) x = static_cast<float>(rng.Uniform(0.0, scale));
  return m;
}

inline Image RandomImage(SplitMix64& rng, int width, int height, int channels, double lo = 0.0, double hi = 1.0) {
  Image im(width, height, channels);
  for (float& x : im.data()) x = static_cast<float>(rng.Uniform(lo, hi));
  return im;
}

inline double MaxAbsDiff(const Image& a, const Image& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(static_cast<double>(a.data()[i]) - b.data()[i]));
  return m;
}

inline double Degrees(double rad) { return rad * 180.0 / kPi; }

// Flat plane z = depth facing the camera.
inline DepthFrame PlaneFrame(int w, int h, double depth, double fov = 1.0) {
  const Intrinsics k = Intrinsics::FromFov(w, h, fov);
  return DepthFrame(k, Image(w, h, 1, static_cast<float>(depth)));
}

}  // namespace envlight::testing

#endif  // ENVLIGHT_TESTS_TEST_SUPPORT_H_
