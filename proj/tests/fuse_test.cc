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


#include <gtest/gtest.h>

#include "envlight/fuse.h"
#include "envlight/pipeline.h"
#include "test_support.h"

namespace envlight {
namespace {

using testing::RandomMap;

SparseAngularMap FullMap(const LatLongMap& values, uint32_t count) {
  SparseAngularMap m(values.width(), values.height());
  m.values = values;
  std::fill(m.mask.begin(), m.mask.end(), 1);
  std::fill(m.counts.begin(), m.counts.end(), count);
  return m;
}

TEST(Fuse, EmptySpecularKeepsDiffuse) {
  SplitMix64 rng(1);
  const LatLongMap d = RandomMap(rng, 64, 32);
  const FusionResult r = Fuse(d, SparseAngularMap(64, 32));
  EXPECT_EQ(r.env, d);
  for (double w : r.confidence) EXPECT_EQ(w, 0.0);
}

TEST(Fuse, ConsistentInputsAreAFixedPoint) {
  SplitMix64 rng(2);
  const LatLongMap gt = RandomMap(rng, 64, 32, 3.0);
  const FusionResult r = Fuse(gt, FullMap(gt, 40));
  EXPECT_LE(testing::MaxAbsDiff(r.env.image(), gt.image()), 1e-6 * 3.0);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(r.gain[c], 1.0, 1e-6);
}

TEST(Fuse, BinsOutsideSplatSupportKeepDiffuse) {
  LatLongMap d(64, 32, 0.3f);
  SparseAngularMap s(64, 32);
  s.mask[s.index(10, 10)] = 1;
  s.counts[s.index(10, 10)] = 20;
  for (int c = 0; c < 3; ++c) s.values.at(10, 10, c) = 5.0f;
  FusionConfig cfg;
  cfg.gain_fit = false;
  const FusionResult r = Fuse(d, s, cfg);
  EXPECT_EQ(r.env.at(40, 20, 0), 0.3f);
  EXPECT_NEAR(r.env.at(10, 10, 0), 0.2 * 0.3 + 0.8 * 5.0, 1e-5);
  EXPECT_GT(r.env.at(11, 10, 0), 0.3f);
}

TEST(Fuse, ConfidenceSaturates) {
  LatLongMap d(16, 8, 1.0f);
  SparseAngularMap s(16, 8);
  FusionConfig cfg;
  cfg.gain_fit = false;
  cfg.splat_sigma_deg = 0;
  s.mask[s.index(3, 3)] = 1;
  s.counts[s.index(3, 3)] = 4;
  s.mask[s.index(9, 5)] = 1;
  s.counts[s.index(9, 5)] = 400;
  const FusionResult r = Fuse(d, s, cfg);
  EXPECT_DOUBLE_EQ(r.confidence[s.index(3, 3)], 0.8 * 4 / 16);
  EXPECT_DOUBLE_EQ(r.confidence[s.index(9, 5)], 0.8);
}

TEST(Fuse, GainTracksScaledEvidence) {
  SplitMix64 rng(3);
  const LatLongMap gt = RandomMap(rng, 64, 32, 2.0);
  LatLongMap half = gt;
  for (float& x : half.image().data()) x *= 0.5f;
  const FusionResult r = Fuse(gt, FullMap(half, 16));
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(r.gain[c], 2.0, 1e-5);
}

TEST(Fuse, Contracts) {
  EXPECT_THROW(Fuse(LatLongMap(64, 32), SparseAngularMap(32, 16)), ContractError);
  FusionConfig c;
  c.spec_weight_at_full_count = 1.5;
  EXPECT_THROW(Fuse(LatLongMap(16, 8), SparseAngularMap(16, 8), c), ContractError);
  c = {};
  c.count_saturation = 0;
  EXPECT_THROW(c.Validate(), ContractError);
}

TEST(AngularSplat, ZeroSigmaPassesThrough) {
  SplitMix64 rng(4);
  const LatLongMap v = RandomMap(rng, 16, 8);
  std::vector<double> w(16 * 8, 0.0);
  w[5] = 2.0;
  std::vector<double> support;
  const LatLongMap out = AngularSplat(v, w, 0.0, &support);
  EXPECT_EQ(out.at(5, 0, 1), v.at(5, 0, 1));
  EXPECT_EQ(out.at(6, 0, 1), 0.0f);
  EXPECT_EQ(support[5], 2.0);
}

TEST(AngularSplat, NormalizedAverageOfConstants) {
  LatLongMap v(64, 32, 0.7f);
  std::vector<double> w(64 * 32, 0.0);
  for (std::size_t i = 0; i < w.size(); i += 7) w[i] = 1.0 + (i % 3);
  const LatLongMap out = AngularSplat(v, w, 0.1, nullptr);
  for (float x : out.image().data())
    if (x != 0.0f) EXPECT_NEAR(x, 0.7f, 1e-6);
}

TEST(AngularSplat, SupportWrapsInAzimuth) {
  LatLongMap v(64, 32, 1.0f);
  std::vector<double> w(64 * 32, 0.0);
  w[16 * 64 + 0] = 1.0;
  std::vector<double> support;
  AngularSplat(v, w, 4.0 * kPi / 180, &support);
  EXPECT_GT(support[16 * 64 + 63], 0.0);
  EXPECT_EQ(support[16 * 64 + 32], 0.0);
}

// A glossy sphere under one small light at the default 384 x 384 frame:
// fusion moves the peak toward the ground-truth peak without displacing it.
TEST(Fuse, SharpensSingleLightPeak) {
  SceneGenOptions so;
  so.width = so.height = 384;
  const SceneDesc scene =
      GenTestScene(ScenePreset::kSphereOnPlane, Material{{0.5f, 0.5f, 0.5f}, 0.5, 0.05}, 21, so);
  EnvGenOptions o;
  o.seed = 21;
  o.size_min = o.size_max = 0.01;
  const GeneratedEnv g = GenRandomEnv(o);
  const RenderResult r = RenderFull(scene, g.env);
  const EstimateResult e = Estimate({r.rgb, r.depth, r.camera.cam_to_world, r.gt}, RunConfig{});
  auto argmax = [](const LatLongMap& m) {
    int bu = 0, bv = 0;
    for (int v = 0; v < m.height(); ++v)
      for (int u = 0; u < m.width(); ++u)
        if (m.at(u, v, 0) > m.at(bu, bv, 0)) {
          bu = u;
          bv = v;
        }
    return std::pair{bu, bv};
  };
  const auto [gu, gv] = argmax(g.env);
  const auto [fu, fv] = argmax(e.env);
  const auto [du, dv] = argmax(e.diffuse_env);
  EXPECT_LE(std::abs(fv - gv), 1);
  EXPECT_LE(std::min(std::abs(fu - gu), 256 - std::abs(fu - gu)), 1);
  const double peak = g.env.at(gu, gv, 0);
  EXPECT_LT(std::abs(e.env.at(fu, fv, 0) - peak), std::abs(e.diffuse_env.at(du, dv, 0) - peak));
}

TEST(AngularSplat, PolarSourcesReachTheWholeCap) {
  for (int w : {64, 128, 256}) {
    const int h = w / 2;
    LatLongMap values(w, h);
    std::vector<double> weights(static_cast<std::size_t>(w) * h, 0.0);
    weights[3] = 1.0;
    for (int c = 0; c < 3; ++c) values.at(3, 0, c) = 2.0f;
    std::vector<double> support;
    const LatLongMap out = AngularSplat(values, weights, 2.0 * kPi / 180.0, &support);
    for (int u = 0; u < w; ++u) EXPECT_FLOAT_EQ(out.at(u, 0, 1), 2.0f) << w << " " << u;
    EXPECT_EQ(support[static_cast<std::size_t>(h - 1) * w], 0.0);
  }
}

}  // namespace
}  // namespace envlight
