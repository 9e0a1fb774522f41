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

#include <algorithm>
#include <limits>

#include "envlight/radiometry.h"
#include "test_support.h"

namespace envlight {
namespace {

using testing::RandomMap;
using testing::RandomUnit;

TEST(LatLong, ShapeContract) {
  EXPECT_THROW(LatLongMap(100, 100), ContractError);
  EXPECT_THROW(LatLongMap(0, 0), ContractError);
  EXPECT_THROW(LatLongMap(Image(8, 4, 1)), ContractError);
  const LatLongMap m;
  EXPECT_EQ(m.width(), 256);
  EXPECT_EQ(m.height(), 128);
}

TEST(LatLong, ValidateRejectsNegativeAndNan) {
  LatLongMap m(8, 4);
  m.Validate();
  m.at(1, 1, 2) = -1e-3f;
  EXPECT_THROW(m.Validate(), ContractError);
  m.at(1, 1, 2) = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(m.Validate(), ContractError);
}

TEST(LatLong, TopRowIsNearZenith) {
  const Direction d = LatLongToDir(0, 0, 256, 128);
  const double theta = kPi * 0.5 / 128, phi = 2 * kPi * 0.5 / 256;
  EXPECT_NEAR(d.z, std::cos(theta), 1e-12);
  EXPECT_NEAR(d.z, 0.9999, 1e-4);
  EXPECT_NEAR(d.x, std::sin(theta) * std::cos(phi), 1e-12);
  EXPECT_NEAR(d.y, std::sin(theta) * std::sin(phi), 1e-12);
}

TEST(LatLong, RowNearEquator) {
  const Direction d = LatLongToDir(0, 63, 256, 128);
  EXPECT_NEAR(d.z, std::cos(kPi * 63.5 / 128), 1e-12);
  EXPECT_NEAR(d.z, 0.0123, 1e-4);
}

TEST(LatLong, PixelCentersRoundTripExactly) {
  for (int v = 0; v < 16; ++v) {
    for (int u = 0; u < 32; ++u) {
      const LatLongCoord c = DirToLatLong(LatLongToDir(u, v, 32, 16), 32, 16);
      EXPECT_NEAR(c.u, u, 1e-9);
      EXPECT_NEAR(c.v, v, 1e-9);
      const LatLongBin b = DirToBin(LatLongToDir(u, v, 32, 16), 32, 16);
      EXPECT_EQ(b.u, u);
      EXPECT_EQ(b.v, v);
    }
  }
}

TEST(LatLong, AxisDirections) {
  // Azimuth is measured from +X, so +X sits on the seam between the last and
  // first columns and -X at the centre column boundary.
  const LatLongCoord px = DirToLatLong({1, 0, 0}, 256, 128);
  EXPECT_NEAR(px.u, -0.5, 1e-12);
  EXPECT_NEAR(px.v, 63.5, 1e-12);
  const LatLongCoord nx = DirToLatLong({-1, 0, 0}, 256, 128);
  EXPECT_NEAR(nx.u, 127.5, 1e-12);
  const LatLongCoord py = DirToLatLong({0, 1, 0}, 256, 128);
  EXPECT_NEAR(py.u, 63.5, 1e-12);
  EXPECT_LT(DirToLatLong({0, 0, 1}, 256, 128).v, 0.5);
  EXPECT_GT(DirToLatLong({0, 0, -1}, 256, 128).v, 126.5);
}

TEST(LatLong, RandomDirectionsLandInTheirBin) {
  SplitMix64 rng(11);
  const int w = 256, h = 128;
  const double half_diag = 0.5 * std::hypot(kPi / h, 2 * kPi / w);
  for (int i = 0; i < 10000; ++i) {
    const Direction d = RandomUnit(rng);
    const LatLongBin b = DirToBin(d, w, h);
    EXPECT_LE(AngleBetween(d, LatLongToDir(b.u, b.v, w, h)), half_diag + 1e-12);
  }
}

TEST(LatLong, LookupOutsideThrows) { EXPECT_THROW(LatLongToDir(8, 0, 8, 4), ContractError); }

TEST(LatLong, SampleAtBinCentreReturnsBin) {
  SplitMix64 rng(3);
  const LatLongMap m = RandomMap(rng, 16, 8);
  for (int v = 0; v < 8; ++v)
    for (int u = 0; u < 16; ++u) {
      const Rgb s = m.Sample(LatLongToDir(u, v, 16, 8));
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(s[c], m.at(u, v, c), 1e-5);
    }
}

TEST(CubeDirs, FaceRes1IsTheAxes) {
  const CubeGrid g = CubeDirs(1);
  ASSERT_EQ(g.size(), 6u);
  const Vec3 axes[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (int f = 0; f < 6; ++f) {
    EXPECT_NEAR(AngleBetween(g.dirs[f], axes[f]), 0.0, 1e-12) << f;
    EXPECT_NEAR(g.solid_angles[f], 4 * kPi / 6, 1e-12);
  }
}

TEST(CubeDirs, DefaultGrid) {
  const CubeGrid g = CubeDirs(8);
  ASSERT_EQ(g.size(), 384u);
  Vec3 mean;
  double total = 0, min_angle = kPi;
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_TRUE(IsUnit(g.dirs[i]));
    mean += g.dirs[i];
    total += g.solid_angles[i];
    for (std::size_t j = i + 1; j < g.size(); ++j) min_angle = std::min(min_angle, AngleBetween(g.dirs[i], g.dirs[j]));
  }
  mean = mean / static_cast<double>(g.size());
  EXPECT_LT(Length(mean), 1e-6);
  EXPECT_GT(min_angle, 0.0);
  EXPECT_NEAR(total, 4 * kPi, 1e-9);
}

TEST(CubeDirs, DirToCubeInvertsTexelCentres) {
  const CubeGrid g = CubeDirs(8);
  for (int f = 0; f < 6; ++f)
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 8; ++c) {
        const CubeCoord cc = DirToCube(g.dirs[g.Index(f, r, c)], 8);
        EXPECT_EQ(cc.face, f);
        EXPECT_NEAR(cc.col, c, 1e-9);
        EXPECT_NEAR(cc.row, r, 1e-9);
      }
}

TEST(CubeToLatLong, ConstantGridGivesConstantMap) {
  CubeGrid g = CubeDirs(8);
  g.values = std::vector<Rgb>(g.size(), Rgb{0.25f, 0.5f, 2.0f});
  const LatLongMap m = CubeToLatLong(g, 64, 32);
  for (int v = 0; v < 32; ++v)
    for (int u = 0; u < 64; ++u) {
      EXPECT_FLOAT_EQ(m.at(u, v, 0), 0.25f);
      EXPECT_FLOAT_EQ(m.at(u, v, 2), 2.0f);
    }
}

TEST(CubeToLatLong, ZenithTexelPeaksInTopRow) {
  CubeGrid g = CubeDirs(3);
  g.values = std::vector<Rgb>(g.size(), Rgb{0, 0, 0});
  (*g.values)[g.Index(static_cast<int>(CubeFace::kPosZ), 1, 1)] = Rgb{1, 1, 1};
  const LatLongMap m = CubeToLatLong(g, 64, 32);
  float best = -1;
  int best_v = -1;
  for (int v = 0; v < 32; ++v)
    for (int u = 0; u < 64; ++u)
      if (m.at(u, v, 0) > best) {
        best = m.at(u, v, 0);
        best_v = v;
      }
  EXPECT_EQ(best_v, 0);
}

TEST(CubeToLatLong, MissingValuesThrow) { EXPECT_THROW(CubeToLatLong(CubeDirs(2)), ContractError); }

TEST(CubeToLatLong, SmoothGridEnergyWithinTwoPercent) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec3 a = RandomUnit(rng);
    CubeGrid g = CubeDirs(8);
    std::vector<Rgb> vals(g.size());
    double quad = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const float x = static_cast<float>(1.0 + 0.6 * Dot(a, g.dirs[k]) + 0.2 * g.dirs[k].z * g.dirs[k].z);
      vals[k] = {x, x, x};
      quad += x * g.solid_angles[k];
    }
    g.values = vals;
    const double e = Energy(CubeToLatLong(g))[0];
    EXPECT_NEAR(e / quad, 1.0, 0.02);
  }
}

TEST(LatLongToCube, ConstantMapGivesConstantGrid) {
  const CubeGrid g = CubeDirs(8);
  const auto vals = LatLongToCube(LatLongMap(256, 128, 3.0f), g);
  for (const Rgb& v : vals) EXPECT_NEAR(v[1], 3.0f, 1e-5);
}

TEST(RotateEnv, IdentityAndPeriodicity) {
  SplitMix64 rng(9);
  const LatLongMap m = RandomMap(rng, 64, 32);
  EXPECT_EQ(RotateEnv(m, 0.0), m);
  EXPECT_EQ(RotateEnv(m, 2 * kPi), m);
  EXPECT_EQ(RotateEnv(RotateEnv(m, kPi), kPi), RotateEnv(m, 2 * kPi));
}

TEST(RotateEnv, RotatesDirectionsAboutZ) {
  LatLongMap m(64, 32);
  m.at(5, 10, 0) = 1;
  const double yaw = 2 * kPi * 7 / 64;
  const LatLongMap r = RotateEnv(m, yaw);
  EXPECT_EQ(r.at(12, 10, 0), 1.0f);
  const Direction moved = Mat3::RotationZ(yaw) * LatLongToDir(5, 10, 64, 32);
  const LatLongBin b = DirToBin(moved, 64, 32);
  EXPECT_EQ(b.u, 12);
  EXPECT_EQ(b.v, 10);
}

TEST(RotateEnv, FractionalShiftInterpolates) {
  LatLongMap m(8, 4);
  m.at(0, 0, 0) = 1;
  const LatLongMap r = RotateEnv(m, 2 * kPi * 0.25 / 8);
  EXPECT_NEAR(r.at(0, 0, 0), 0.75, 1e-6);
  EXPECT_NEAR(r.at(1, 0, 0), 0.25, 1e-6);
}

TEST(SolidAngles, SumsToSphere) {
  const SolidAngleTable t = SolidAngles(256, 128);
  EXPECT_GE(t.Total(), 4 * kPi * 0.999);
  EXPECT_LE(t.Total(), 4 * kPi * 1.001);
  EXPECT_LT(std::abs(SolidAngles(32, 16).Total() - 4 * kPi) / (4 * kPi), 1e-3);
}

TEST(SolidAngles, PoleRowsAreSmallest) {
  const SolidAngleTable t = SolidAngles(256, 128);
  const double mn = *std::min_element(t.row_weights.begin(), t.row_weights.end());
  EXPECT_DOUBLE_EQ(t.at(0), mn);
  EXPECT_NEAR(t.at(127), mn, 1e-15);
  EXPECT_GT(t.at(64), 10 * mn);
}

TEST(DownsampleEnv, PreservesEnergy) {
  SplitMix64 rng(21);
  const LatLongMap m = RandomMap(rng, 64, 32);
  const LatLongMap d = DownsampleEnv(m, 16, 8);
  const auto e0 = Energy(m), e1 = Energy(d);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(e1[c] / e0[c], 1.0, 1e-5);
  EXPECT_THROW(DownsampleEnv(m, 24, 12), ContractError);
}

}  // namespace
}  // namespace envlight
