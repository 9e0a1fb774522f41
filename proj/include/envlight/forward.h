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

// Forward renderer: single-bounce direct lighting of analytic scenes under a
// lat-long environment, irradiance bases for the inverse problem, and the
// synthetic environment and scene generators.
//
// Shading conventions:
//   diffuse shading  S_d(x) = integral L(w) V(x, w) max(n . w, 0) dw
//   specular shading S_s(x) = rho_s * integral L(w) V(x, w) D(o, w) dw
//   image            I(x)   = albedo(x) * S_d(x) + S_s(x)
// where D is the normalized Phong lobe (p + 1) / (2 pi) max(o . w, 0)^p about
// the mirror direction o with p = 2 / sigma^2 - 2.

#ifndef ENVLIGHT_FORWARD_H_
#define ENVLIGHT_FORWARD_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "envlight/core.h"
#include "envlight/decompose.h"
#include "envlight/geometry.h"
#include "envlight/radiometry.h"

namespace envlight {

struct Material {
  Rgb rho_d{0.5f, 0.5f, 0.5f};
  double rho_s = 0.0;
  double sigma = 0.1;

  // Throws ContractError unless rho_d, rho_s in [0, 1], rho_d + rho_s <= 1
  // per channel and sigma in (0, 1].
  void Validate() const;
  double PhongExponent() const { return 2.0 / (sigma * sigma) - 2.0; }
  bool operator==(const Material&) const = default;
};

struct Sphere {
  Vec3 center;
  double radius = 0.5;
  bool operator==(const Sphere&) const = default;
};

// Box resting in world space, rotated about +Z by `yaw`.
struct Box {
  Vec3 center;
  Vec3 half_extents{0.3, 0.3, 0.3};
  double yaw = 0;
  bool operator==(const Box&) const = default;
};

// Infinite horizontal plane z = height, facing +Z.
struct GroundPlane {
  double height = 0;
  bool operator==(const GroundPlane&) const = default;
};

// Optional two-colour checker modulating rho_d (world-space xy cells).
struct Checker {
  Rgb alt_rho_d{0.2f, 0.2f, 0.2f};
  double cell = 0.25;
  bool operator==(const Checker&) const = default;
};

struct Primitive {
  std::variant<Sphere, Box, GroundPlane> shape;
  Material material;
  std::optional<Checker> checker;
  bool operator==(const Primitive&) const = default;
};

// Pinhole camera. `cam_to_world` maps camera axes (+X right, +Y down,
// +Z forward) into world space.
struct Camera {
  Intrinsics intrinsics;
  Vec3 position;
  Mat3 cam_to_world;

  static Camera LookAt(const Vec3& eye, const Vec3& target, const Intrinsics& k);
  Mat3 world_to_cam() const { return cam_to_world.Transposed(); }
  bool operator==(const Camera&) const = default;
};

struct SceneDesc {
  std::vector<Primitive> primitives;
  Camera camera;

  // Throws ContractError on an empty scene or an invalid material.
  void Validate() const;
  bool operator==(const SceneDesc&) const = default;
};

struct Hit {
  double t = 0;
  Vec3 point;
  Vec3 normal;  // world space, facing the incoming ray
  int primitive = -1;
};

// Nearest intersection along origin + t * dir for t in (t_min, t_max).
std::optional<Hit> IntersectScene(const SceneDesc& scene, const Vec3& origin, const Vec3& dir,
                                  double t_min = 1e-6,
                                  double t_max = std::numeric_limits<double>::infinity());
bool Occluded(const SceneDesc& scene, const Vec3& origin, const Vec3& dir);

// ---------------------------------------------------------------------------
// Irradiance bases

// maps[k] is the area-downsampled response v * max(n . l_k, 0) to a unit
// light from dirs[k] (world space).
struct IrradianceStack {
  std::vector<Direction> dirs;
  std::vector<double> solid_angles;
  int width = 32;
  int height = 32;
  std::vector<float> maps;  // K * height * width, map-major

  std::size_t size() const { return dirs.size(); }
  float at(std::size_t k, int x, int y) const {
    return maps[(k * height + y) * width + x];
  }
  std::span<const float> map(std::size_t k) const {
    return std::span<const float>(maps).subspan(k * width * height, static_cast<std::size_t>(width) * height);
  }
};

struct StackOptions {
  int out_width = 32;
  int out_height = 32;
  VisibilityParams visibility;
};

// `world_to_cam` rotates the grid directions into the frame's camera space.
// Throws ContractError if the frame is not an integer multiple of the output
// resolution, or if `normals` does not match the frame.
IrradianceStack RenderIrradianceStack(const DepthFrame& frame, const NormalMap& normals,
                                      const CubeGrid& dirs, const Mat3& world_to_cam,
                                      const StackOptions& options = {});

// S_d = sum_k L_k R_k dw_k per channel, at the stack resolution.
Image RenderDiffuse(const IrradianceStack& stack, std::span<const Rgb> light);

// ---------------------------------------------------------------------------
// Scene rendering

struct RenderOptions {
  int diffuse_env_width = 64;  // lat-long quadrature for diffuse shading
  int diffuse_env_height = 32;
  int specular_samples = 64;   // stratified, rounded down to a square
  uint64_t seed = 1;
};

// Everything produced by a synthetic render. `gt` carries camera-space
// normals and the exact factors of `rgb`.
struct RenderResult {
  Image rgb;
  DepthFrame depth;
  Decomposition gt;
  Camera camera;
};

// Precomputed light transport of a scene for its camera: per-pixel hit
// records, visibility bits over the diffuse quadrature directions and over
// the specular lobe samples (directions are regenerated from the seed at
// render time). Rendering the same scene under many environments only
// re-evaluates the environment.
class SceneTransport {
 public:
  explicit SceneTransport(const SceneDesc& scene, const RenderOptions& options = {});

  RenderResult Render(const LatLongMap& env) const;

  const SceneDesc& scene() const { return scene_; }

 private:
  struct PixelRecord {
    Vec3 normal_world;
    Vec3 normal_cam;
    Rgb albedo;
    float depth = 0;
    float rho_s = 0;
    Vec3 mirror;               // world space
    double exponent = 0;
    uint64_t spec_bits = 0;    // visible, above-surface lobe samples
    uint16_t spec_total = 0;   // samples drawn
    bool hit = false;
    bool diffuse = false;
  };

  LatLongMap QuadratureEnv(const LatLongMap& env) const;

  SceneDesc scene_;
  RenderOptions options_;
  std::vector<Direction> quad_dirs_;
  std::vector<double> quad_solid_angles_;
  std::size_t words_per_pixel_ = 0;
  std::vector<PixelRecord> pixels_;
  std::vector<uint64_t> visibility_;  // words_per_pixel_ per pixel
};

// Renders the scene; see SceneTransport. Throws ContractError on an empty
// scene.
RenderResult RenderFull(const SceneDesc& scene, const LatLongMap& env, const RenderOptions& options = {});

// Specular shading from a depth-derived surface without occlusion: each pixel
// integrates the lobe about its mirror direction. `cam_to_world` rotates
// camera-space normals into the environment's frame.
Image RenderSpecular(const DepthFrame& frame, const NormalMap& normals, const Material& material,
                     const LatLongMap& env, const Mat3& cam_to_world, const RenderOptions& options = {});

// ---------------------------------------------------------------------------
// Generators

struct EnvGenOptions {
  int num_lights = 1;
  // Solid angle of each disk light, steradians.
  double size_min = 0.005;
  double size_max = 0.05;
  // Integrated radiance of each light (its irradiance at normal incidence).
  double intensity_min = 0.5;
  double intensity_max = 2.0;
  double ambient = 0.05;
  // Lights are placed at least this far above the horizon.
  double min_elevation = 10.0 * kPi / 180.0;
  int width = LatLongMap::kDefaultWidth;
  int height = LatLongMap::kDefaultHeight;
  uint64_t seed = 0;
};

struct AreaLight {
  Direction center;
  double angular_radius = 0;
  double peak_radiance = 0;
};

struct GeneratedEnv {
  LatLongMap env;
  std::vector<AreaLight> lights;
};

// Ambient floor plus non-overlapping disk lights with a parabolic radial
// profile (peak at the centre, zero at the rim). Bit-identical per seed.
GeneratedEnv GenRandomEnv(const EnvGenOptions& options);

enum class ScenePreset { kSphereOnPlane, kBoxOnPlane, kCluster };

ScenePreset ParseScenePreset(const std::string& name);
std::string ScenePresetName(ScenePreset preset);

struct SceneGenOptions {
  int width = 128;
  int height = 128;
  double fov_x = 50.0 * kPi / 180.0;
  Material ground{{0.6f, 0.6f, 0.6f}, 0.0, 0.5};
};

// Deterministic scene per (preset, seed): objects on a ground plane viewed
// from a seeded azimuth and elevation. `cluster` places 1-5 objects, so the
// primitive count including the ground is within [2, 6].
SceneDesc GenTestScene(ScenePreset preset, const Material& material, uint64_t seed,
                       const SceneGenOptions& options = {});

// Counter-based generator: a deterministic stream per (seed, stream).
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed, uint64_t stream = 0)
      : state_(seed * 0x9E3779B97F4A7C15ull + stream * 0xD1B54A32D192ED03ull + 0x2545F4914F6CDD1Dull) {}
  uint64_t Next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  // Uniform in [0, 1).
  double Uniform() { return (Next() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

 private:
  uint64_t state_;
};

// Orthonormal basis with `n` as the third axis.
void BuildFrame(const Vec3& n, Vec3* t, Vec3* b);

}  // namespace envlight

#endif  // ENVLIGHT_FORWARD_H_
