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

#include "envlight/decompose.h"
#include "envlight/forward.h"
#include "test_support.h"

namespace envlight {
namespace {

double Sum(const Image& im) {
  double s = 0;
  for (float x : im.data()) s += x;
  return s;
}

RenderResult Render(const Material& m, ScenePreset preset, uint64_t seed, int lights = 2) {
  EnvGenOptions o;
  o.seed = seed;
  o.num_lights = lights;
  return RenderFull(GenTestScene(preset, m, seed), GenRandomEnv(o).env);
}

TEST(DecomposeGt, PassesFactorsThrough) {
  const RenderResult r = Render(Material{{0.6f, 0.3f, 0.2f}, 0.3, 0.05}, ScenePreset::kSphereOnPlane, 1);
  const Decomposition d = DecomposeGt(r);
  EXPECT_EQ(d.albedo, r.gt.albedo);
  EXPECT_EQ(d.diffuse, r.gt.diffuse);
  EXPECT_EQ(d.specular, r.gt.specular);
  EXPECT_EQ(d.mask, r.gt.mask);
  EXPECT_EQ(d.Reconstruct(), r.rgb);
}

TEST(DecomposeGt, BlackEnvironmentHasNoShading) {
  const SceneDesc scene = GenTestScene(ScenePreset::kBoxOnPlane, Material{{0.5f, 0.5f, 0.5f}, 0.3, 0.1}, 2);
  const Decomposition d = DecomposeGt(RenderFull(scene, LatLongMap(64, 32)));
  EXPECT_EQ(Sum(d.diffuse), 0.0);
  EXPECT_EQ(Sum(d.specular), 0.0);
}

TEST(Decomposition, CropKeepsFactors) {
  const RenderResult r = Render(Material{}, ScenePreset::kSphereOnPlane, 3);
  const Decomposition c = r.gt.Cropped(10, 20, 30, 40);
  EXPECT_EQ(c.width(), 30);
  EXPECT_EQ(c.height(), 40);
  EXPECT_EQ(c.diffuse.at(5, 7, 1), r.gt.diffuse.at(15, 27, 1));
  EXPECT_EQ(c.valid(5, 7), r.gt.valid(15, 27));
  EXPECT_THROW(r.gt.Cropped(100, 100, 40, 40), ContractError);
}

TEST(Dichromatic, DiffuseRenderHasLittleSpecular) {
  const RenderResult r = Render(Material{{0.7f, 0.4f, 0.2f}, 0.0, 0.5}, ScenePreset::kSphereOnPlane, 4);
  const DichromaticResult d = DecomposeDichromatic(r.rgb, r.gt.normals);
  EXPECT_LT(Sum(d.decomposition.specular), 0.05 * Sum(r.rgb));
}

TEST(Dichromatic, WhiteHighlightOnRedSphere) {
  const RenderResult r = Render(Material{{0.5f, 0.05f, 0.05f}, 0.5, 0.05}, ScenePreset::kSphereOnPlane, 5, 3);
  const DichromaticResult d = DecomposeDichromatic(r.rgb, r.gt.normals);
  const double gt = Sum(r.gt.specular);
  ASSERT_GT(gt, 0);
  EXPECT_GE(Sum(d.decomposition.specular) / gt, 0.7);
}

TEST(Dichromatic, GreyInputIsNeutral) {
  SplitMix64 rng(6);
  Image rgb(16, 16, 3);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) {
      const float g = static_cast<float>(rng.Uniform(0.1, 1.0));
      for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = g;
    }
  const DichromaticResult d = DecomposeDichromatic(rgb, NormalMap(16, 16));
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) {
      const double s = d.decomposition.albedo.at(x, y, 0) + d.decomposition.albedo.at(x, y, 1) +
                       d.decomposition.albedo.at(x, y, 2);
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(d.decomposition.albedo.at(x, y, c) / s, 1.0 / 3, 1e-6);
      EXPECT_EQ(d.decomposition.specular.at(x, y, 0), 0.0f);
    }
  EXPECT_NEAR(d.relative_residual, 0.0, 1e-6);
}

TEST(Dichromatic, ResidualSmallOnSyntheticScenes) {
  const Material mats[] = {{{0.6f, 0.5f, 0.4f}, 0.4, 0.05}, {{0.2f, 0.6f, 0.3f}, 0.3, 0.1}, {{0.7f, 0.7f, 0.7f}, 0.0, 0.5}};
  uint64_t seed = 10;
  for (const Material& m : mats) {
    for (ScenePreset p : {ScenePreset::kSphereOnPlane, ScenePreset::kBoxOnPlane, ScenePreset::kCluster}) {
      const RenderResult r = Render(m, p, ++seed);
      const DichromaticResult d = DecomposeDichromatic(r.rgb, r.gt.normals);
      EXPECT_LE(d.relative_residual, 0.02) << seed;
      for (const Image* im : {&d.decomposition.albedo, &d.decomposition.diffuse, &d.decomposition.specular})
        for (float x : im->data()) EXPECT_GE(x, 0.0f);
    }
  }
}

TEST(Dichromatic, GuardedChannelsAreMasked) {
  Image rgb(2, 1, 3);
  rgb.at(0, 0, 0) = 0.8f;  // pure red: green and blue albedo fall below the guard
  rgb.at(1, 0, 0) = 0.4f;
  rgb.at(1, 0, 1) = 0.4f;
  rgb.at(1, 0, 2) = 0.4f;
  const DichromaticResult d = DecomposeDichromatic(rgb, NormalMap(2, 1));
  EXPECT_FALSE(d.decomposition.valid(0, 0));
  EXPECT_EQ(d.decomposition.diffuse.at(0, 0, 1), 0.0f);
  EXPECT_TRUE(d.decomposition.valid(1, 0));
}

TEST(Dichromatic, Contracts) {
  EXPECT_THROW(DecomposeDichromatic(Image(4, 4, 3), NormalMap(4, 4)), ContractError);
  EXPECT_THROW(DecomposeDichromatic(Image(4, 4, 3, 1.0f), NormalMap(3, 4)), ContractError);
  EXPECT_THROW(DecomposeDichromatic(Image(4, 4, 1, 1.0f), NormalMap(4, 4)), ContractError);
}

}  // namespace
}  // namespace envlight
