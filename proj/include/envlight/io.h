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

// File formats: PFM for HDR data, gamma-encoded PNG for previews, and
// versioned JSON documents for scenes, cameras, run configs and frame
// manifests.

#ifndef ENVLIGHT_IO_H_
#define ENVLIGHT_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "envlight/core.h"
#include "envlight/forward.h"
#include "envlight/pipeline.h"
#include "json.hpp"

namespace envlight {

// PFM: "PF" (RGB) or "Pf" (grey), width height, scale whose sign gives the
// byte order, then rows bottom to top. Writing always emits little endian.
// Non-finite payload values are rejected.
std::string EncodePfm(const Image& image);
Image DecodePfm(std::string_view bytes);
void WritePfm(const std::filesystem::path& path, const Image& image);
Image ReadPfm(const std::filesystem::path& path);
// Throws ContractError unless the file holds a 2:1 RGB map.
LatLongMap ReadEnv(const std::filesystem::path& path);

// 8-bit sRGB-free gamma encoding: byte = round(255 * clamp(v, 0, 1)^(1/gamma)).
uint8_t EncodeGamma(float linear, double gamma = 2.2);
float DecodeGamma(uint8_t byte, double gamma = 2.2);
void WritePng(const std::filesystem::path& path, const Image& image, double gamma = 2.2);
// Returns a linear 3-channel image.
Image ReadPng(const std::filesystem::path& path, double gamma = 2.2);

// JSON documents. Each carries a "schema" field; readers reject other
// schemas and unknown keys.
inline constexpr std::string_view kSceneSchema = "envlight.scene/1";
inline constexpr std::string_view kCameraSchema = "envlight.camera/1";
inline constexpr std::string_view kConfigSchema = "envlight.config/1";
inline constexpr std::string_view kFramesSchema = "envlight.frames/1";
inline constexpr std::string_view kStackSchema = "envlight.stack/1";

nlohmann::json CameraToJson(const Camera& camera);
Camera CameraFromJson(const nlohmann::json& j);
nlohmann::json SceneToJson(const SceneDesc& scene);
SceneDesc SceneFromJson(const nlohmann::json& j);
nlohmann::json ConfigToJson(const RunConfig& config);
// Missing keys keep their defaults.
RunConfig ConfigFromJson(const nlohmann::json& j);

nlohmann::json ReadJson(const std::filesystem::path& path);
void WriteJson(const std::filesystem::path& path, const nlohmann::json& j);

// Frame manifest: {"schema", "frames": [{"index", "rgb", "depth", "camera",
// "yaw_to_world"?, "gt_prefix"?}]}; paths relative to the manifest.
struct ManifestFrame {
  int index = 0;
  std::filesystem::path rgb;
  std::filesystem::path depth;
  std::filesystem::path camera;
  double yaw_to_world = 0;
  std::filesystem::path gt_prefix;  // empty: no ground-truth decomposition
};
std::vector<ManifestFrame> ReadManifest(const std::filesystem::path& path);
void WriteManifest(const std::filesystem::path& path, const std::vector<ManifestFrame>& frames);

// Ground-truth factors as <prefix>{albedo,diffuse,specular,normals,mask}.pfm.
// Invalid normals are stored as zero vectors.
void WriteDecomposition(const std::string& prefix, const Decomposition& d);
Decomposition ReadDecomposition(const std::string& prefix);

// Depth PFM plus camera document into a frame.
DepthFrame ReadDepthFrame(const std::filesystem::path& depth, const Camera& camera);

}  // namespace envlight

#endif  // ENVLIGHT_IO_H_
