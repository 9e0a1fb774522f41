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

#include "envlight/metrics.h"
#include "envlight/pipeline.h"

namespace envlight {
namespace {

struct Fixture {
  RenderResult render;
  LatLongMap gt;
};

const Fixture& Shared() {
  static const Fixture f = [] {
    EnvGenOptions o;
    o.seed = 12;
    Fixture x;
    x.gt = GenRandomEnv(o).env;
    x.render = RenderFull(GenTestScene(ScenePreset::kSphereOnPlane, Material{{0.6f, 0.5f, 0.4f}, 0.4, 0.05}, 12), x.gt);
    return x;
  }();
  return f;
}

RunConfig Small() {
  RunConfig c;
  c.crop = 128;
  return c;
}

EstimateInput Input(bool with_gt) {
  const RenderResult& r = Shared().render;
  EstimateInput in{r.rgb, r.depth, r.camera.cam_to_world, std::nullopt};
  if (with_gt) in.decomposition = r.gt;
  return in;
}

TEST(RunConfig, DefaultsValidate) {
  EXPECT_NO_THROW(RunConfig{}.Validate());
  EXPECT_EQ(RunConfig{}, RunConfig{});
}

TEST(RunConfig, RejectsBadValues) {
  RunConfig c;
  c.env_width = 100;
  EXPECT_THROW(c.Validate(), ContractError);
  c = {};
  c.crop = 100;  // not a multiple of 64
  EXPECT_THROW(c.Validate(), ContractError);
  c = {};
  c.alpha = -0.1;
  EXPECT_THROW(c.Validate(), ContractError);
  c = {};
  c.bilateral_sigma_range = 0;
  EXPECT_THROW(c.Validate(), ContractError);
  c = {};
  c.solver.lambda = -1;
  EXPECT_THROW(c.Validate(), ContractError);
  c = {};
  c.fusion.count_saturation = 0;
  EXPECT_THROW(c.Validate(), ContractError);
}

TEST(Estimate, IsDeterministic) {
  const EstimateResult a = Estimate(Input(false), Small());
  const EstimateResult b = Estimate(Input(false), Small());
  EXPECT_EQ(a.env, b.env);
  EXPECT_EQ(a.diffuse_env, b.diffuse_env);
  EXPECT_EQ(a.specular.counts, b.specular.counts);
}

TEST(Estimate, OutputShapeAndRange) {
  RunConfig c = Small();
  c.env_width = 128;
  c.env_height = 64;
  const EstimateResult r = Estimate(Input(true), c);
  EXPECT_EQ(r.env.width(), 128);
  EXPECT_EQ(r.env.height(), 64);
  ASSERT_TRUE(r.grid.values.has_value());
  EXPECT_EQ(r.grid.values->size(), 6u * 8 * 8);
  double sum = 0;
  for (float x : r.env.image().data()) {
    ASSERT_TRUE(std::isfinite(x));
    ASSERT_GE(x, 0.0f);
    sum += x;
  }
  EXPECT_GT(sum, 0.0);
  EXPECT_GE(r.seconds, 0.0);
}

TEST(Estimate, BeatsBlackAndConstantGuesses) {
  const EstimateResult r = Estimate(Input(true), Small());
  const LatLongMap& gt = Shared().gt;
  double mean = 0;
  for (float x : gt.image().data()) mean += x;
  mean /= static_cast<double>(gt.image().data().size());
  EXPECT_LT(LightRmse(r.env, gt), LightRmse(LatLongMap(256, 128), gt));
  const ProbeSet probes = ProbeSet::DiffuseOnly(48);
  EXPECT_LT(RenderRmse(r.env, gt, probes), RenderRmse(LatLongMap(256, 128), gt, probes));
}

TEST(Estimate, Contracts) {
  RunConfig big = Small();
  big.crop = 192;
  EXPECT_THROW(Estimate(Input(false), big), ContractError);
  EstimateInput bad = Input(false);
  bad.rgb = Image(64, 64, 3);
  EXPECT_THROW(Estimate(bad, Small()), ContractError);
  bad = Input(true);
  bad.decomposition = bad.decomposition->Cropped(0, 0, 64, 64);
  EXPECT_THROW(Estimate(bad, Small()), ContractError);
}

TEST(EstimateSequence, Structure) {
  std::vector<SequenceFrame> frames;
  for (int i = 0; i < 3; ++i) frames.push_back({i, Input(true), 0.0});
  RunConfig c = Small();
  c.env_width = 64;
  c.env_height = 32;
  const SequenceResult s = EstimateSequence(frames, c);
  ASSERT_EQ(s.raw.size(), 3u);
  ASSERT_EQ(s.smoothed.size(), 3u);
  ASSERT_EQ(s.raw_loss.size(), 2u);
  ASSERT_EQ(s.smoothed_loss.size(), 2u);
  EXPECT_EQ(s.smoothed[0].env, s.raw[0].env);
  // Identical frames: nothing to smooth.
  for (double l : s.raw_loss) EXPECT_EQ(l, 0.0);
  for (double l : s.smoothed_loss) EXPECT_NEAR(l, 0.0, 1e-12);
  EXPECT_THROW(EstimateSequence({}, c), ContractError);
}

}  // namespace
}  // namespace envlight
