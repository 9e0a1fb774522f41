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

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "envlight/io.h"
#include "test_support.h"

namespace envlight {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::RandomImage;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("envlight_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string Le(float v) {
  uint32_t bits = std::bit_cast<uint32_t>(v);
  if constexpr (std::endian::native == std::endian::big) {
    bits = (bits >> 24) | ((bits >> 8) & 0xFF00u) | ((bits << 8) & 0xFF0000u) | (bits << 24);
  }
  std::string s(4, '\0');
  std::memcpy(s.data(), &bits, 4);
  return s;
}

std::string Be(float v) {
  std::string s = Le(v);
  return {s[3], s[2], s[1], s[0]};
}

TEST(Pfm, HeaderBytes) {
  const std::string bytes = EncodePfm(Image(256, 128, 3));
  EXPECT_EQ(bytes.substr(0, 16), "PF\n256 128\n-1.0\n");
  EXPECT_EQ(bytes.size(), 16u + 256u * 128u * 3u * 4u);
  EXPECT_EQ(EncodePfm(Image(4, 2, 1)).substr(0, 3), "Pf\n");
}

TEST(Pfm, RowsAreStoredBottomUp) {
  Image im(2, 2, 1);
  im.at(0, 0) = 1;  // top-left
  im.at(0, 1) = 2;  // bottom-left
  const std::string bytes = EncodePfm(im);
  const std::size_t start = bytes.size() - 16;
  EXPECT_EQ(bytes.substr(start, 4), Le(2.0f));
  EXPECT_EQ(bytes.substr(start + 8, 4), Le(1.0f));
}

TEST(Pfm, DecodesBigEndian) {
  const std::string bytes = "Pf\n2 1\n1.0\n" + Be(0.5f) + Be(-3.0f);
  const Image im = DecodePfm(bytes);
  ASSERT_EQ(im.channels(), 1);
  EXPECT_EQ(im.at(0, 0), 0.5f);
  EXPECT_EQ(im.at(1, 0), -3.0f);
}

TEST(Pfm, RoundTrip) {
  SplitMix64 rng(3);
  for (int channels : {1, 3}) {
    const Image im = RandomImage(rng, 17, 9, channels, -2.0, 5.0);
    EXPECT_EQ(DecodePfm(EncodePfm(im)), im);
  }
}

TEST(Pfm, FileRoundTrip) {
  TempDir dir;
  SplitMix64 rng(4);
  const Image im = RandomImage(rng, 64, 32, 3, 0.0, 10.0);
  WritePfm(dir / "a.pfm", im);
  EXPECT_EQ(ReadPfm(dir / "a.pfm"), im);
  EXPECT_EQ(ReadEnv(dir / "a.pfm").image(), im);
  WritePfm(dir / "b.pfm", Image(30, 20, 3));
  EXPECT_THROW(ReadEnv(dir / "b.pfm"), ContractError);
  EXPECT_THROW(ReadPfm(dir / "missing.pfm"), IoError);
}

TEST(Pfm, RejectsMalformedInput) {
  const std::string one = Le(1.0f);
  EXPECT_THROW(DecodePfm("P6\n1 1\n-1.0\n" + one), ParseError);
  EXPECT_THROW(DecodePfm("Pf\n0 1\n-1.0\n"), ParseError);
  EXPECT_THROW(DecodePfm("Pf\n1 1\n0\n" + one), ParseError);
  EXPECT_THROW(DecodePfm("Pf\n1 1\n-1.0"), ParseError);
  EXPECT_THROW(DecodePfm("Pf\n2 1\n-1.0\n" + one), ParseError);
  EXPECT_THROW(DecodePfm("Pf\n1 1\n-1.0\n" + one + one), ParseError);
  try {
    DecodePfm("Pf\n2 1\n-1.0\n" + one);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 16u);
  }
}

TEST(Pfm, RejectsNonFinite) {
  const std::string nan = Le(std::numeric_limits<float>::quiet_NaN());
  const std::string inf = Le(std::numeric_limits<float>::infinity());
  EXPECT_THROW(DecodePfm("Pf\n1 1\n-1.0\n" + nan), ParseError);
  EXPECT_THROW(DecodePfm("Pf\n1 1\n-1.0\n" + inf), ParseError);
  TempDir dir;
  Image im(2, 2, 1);
  im.at(1, 1) = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(WritePfm(dir / "nan.pfm", im), ContractError);
  EXPECT_THROW(EncodePfm(Image(2, 2, 2)), ContractError);
}

TEST(Png, GammaExamples) {
  EXPECT_EQ(EncodeGamma(0.5f), 186);
  EXPECT_EQ(EncodeGamma(0.0f), 0);
  EXPECT_EQ(EncodeGamma(1.0f), 255);
  EXPECT_EQ(EncodeGamma(7.0f), 255);
  EXPECT_EQ(EncodeGamma(-1.0f), 0);
  EXPECT_EQ(EncodeGamma(0.25f, 1.0), 64);
  for (int b = 0; b < 256; ++b) EXPECT_EQ(EncodeGamma(DecodeGamma(static_cast<uint8_t>(b))), b);
}

TEST(Png, FileRoundTripIsQuantized) {
  TempDir dir;
  SplitMix64 rng(5);
  const Image im = RandomImage(rng, 13, 7, 3, 0.0, 1.0);
  WritePng(dir / "a.png", im);
  const Image back = ReadPng(dir / "a.png");
  ASSERT_EQ(back.width(), 13);
  ASSERT_EQ(back.channels(), 3);
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 13; ++x)
      for (int c = 0; c < 3; ++c) EXPECT_EQ(EncodeGamma(back.at(x, y, c)), EncodeGamma(im.at(x, y, c)));
  EXPECT_THROW(ReadPng(dir / "missing.png"), IoError);
}

TEST(Json, CameraRoundTrip) {
  const Camera cam = Camera::LookAt({1.5, -3.0, 2.0}, {0, 0, 0.4}, Intrinsics::FromFov(320, 240, 0.9));
  const json j = CameraToJson(cam);
  EXPECT_EQ(j["schema"], std::string(kCameraSchema));
  EXPECT_EQ(CameraFromJson(json::parse(j.dump())), cam);
}

TEST(Json, SceneRoundTrip) {
  for (ScenePreset p : {ScenePreset::kSphereOnPlane, ScenePreset::kBoxOnPlane, ScenePreset::kCluster}) {
    const SceneDesc s = GenTestScene(p, Material{{0.3f, 0.6f, 0.2f}, 0.25, 0.1}, 9);
    EXPECT_EQ(SceneFromJson(json::parse(SceneToJson(s).dump())), s);
  }
}

TEST(Json, ConfigRoundTripAndDefaults) {
  RunConfig c;
  c.seed = 42;
  c.crop = 256;
  c.alpha = 0.5;
  c.solver.lambda = 1e-6;
  c.fusion.gain_fit = false;
  c.visibility.thickness = 0.25;
  EXPECT_EQ(ConfigFromJson(json::parse(ConfigToJson(c).dump())), c);
  const RunConfig partial = ConfigFromJson({{"schema", kConfigSchema}, {"alpha", 0.1}});
  RunConfig expect;
  expect.alpha = 0.1;
  EXPECT_EQ(partial, expect);
}

TEST(Json, RejectsWrongSchemaAndUnknownKeys) {
  json j = CameraToJson(Camera{});
  j["schema"] = "envlight.camera/2";
  EXPECT_THROW(CameraFromJson(j), ParseError);
  j = CameraToJson(Camera{});
  j["extra"] = 1;
  EXPECT_THROW(CameraFromJson(j), ParseError);
  EXPECT_THROW(ConfigFromJson({{"schema", kConfigSchema}, {"crop", "big"}}), ParseError);
  EXPECT_THROW(ConfigFromJson(json::array()), ParseError);
  EXPECT_THROW(SceneFromJson({{"schema", kSceneSchema}}), ParseError);
}

TEST(Json, InvalidConfigValuesAreRejected) {
  try {
    ConfigFromJson({{"schema", kConfigSchema}, {"alpha", 2.0}});
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("alpha"), std::string::npos);
  }
}

TEST(Manifest, RoundTripResolvesRelativePaths) {
  TempDir dir;
  std::vector<ManifestFrame> frames(2);
  frames[0] = {0, "f0_rgb.pfm", "f0_depth.pfm", "f0_cam.json", 0.0, "f0_gt_"};
  frames[1] = {1, "f1_rgb.pfm", "f1_depth.pfm", "f1_cam.json", 0.25, ""};
  WriteManifest(dir / "frames.json", frames);
  const auto back = ReadManifest(dir / "frames.json");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].rgb, dir / "f0_rgb.pfm");
  EXPECT_EQ(back[0].gt_prefix, dir / "f0_gt_");
  EXPECT_EQ(back[1].index, 1);
  EXPECT_DOUBLE_EQ(back[1].yaw_to_world, 0.25);
  EXPECT_TRUE(back[1].gt_prefix.empty());
}

TEST(Decomposition, FileRoundTrip) {
  TempDir dir;
  const SceneDesc s = GenTestScene(ScenePreset::kSphereOnPlane, Material{{0.5f, 0.4f, 0.3f}, 0.3, 0.1}, 2);
  SceneDesc small = s;
  small.camera.intrinsics = Intrinsics::FromFov(48, 32, 1.0);
  const RenderResult r = RenderFull(small, LatLongMap(64, 32, 0.5f));
  const std::string prefix = (dir / "gt_").string();
  WriteDecomposition(prefix, r.gt);
  const Decomposition d = ReadDecomposition(prefix);
  EXPECT_EQ(d.albedo, r.gt.albedo);
  EXPECT_EQ(d.diffuse, r.gt.diffuse);
  EXPECT_EQ(d.specular, r.gt.specular);
  EXPECT_EQ(d.mask, r.gt.mask);
  EXPECT_EQ(d.normals.valid, r.gt.normals.valid);
}

TEST(DepthFrame, ReadChecksShape) {
  TempDir dir;
  const Camera cam = Camera::LookAt({0, -3, 1}, {0, 0, 0}, Intrinsics::FromFov(8, 6, 1.0));
  WritePfm(dir / "d.pfm", Image(8, 6, 1, 2.0f));
  EXPECT_EQ(ReadDepthFrame(dir / "d.pfm", cam).depth.at(3, 3), 2.0f);
  WritePfm(dir / "bad.pfm", Image(8, 5, 1, 2.0f));
  EXPECT_THROW(ReadDepthFrame(dir / "bad.pfm", cam), ContractError);
}

}  // namespace
}  // namespace envlight
