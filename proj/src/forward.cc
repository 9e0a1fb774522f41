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

#include "envlight/forward.h"

#include <algorithm>
#include <bit>

namespace envlight {

namespace {

constexpr double kShadowEpsilon = 1e-4;

std::optional<double> IntersectSphere(const Sphere& s, const Vec3& o, const Vec3& d, double t_min) {
  const Vec3 oc = o - s.center;
  const double b = Dot(oc, d);
  const double c = Dot(oc, oc) - s.radius * s.radius;
  const double disc = b * b - c;
  if (disc < 0) return std::nullopt;
  const double sq = std::sqrt(disc);
  double t = -b - sq;
  if (t <= t_min) t = -b + sq;
  if (t <= t_min) return std::nullopt;
  return t;
}

// Returns t and the local axis (0..2, sign in `sign`) of the face hit.
std::optional<double> IntersectBox(const Box& box, const Vec3& o, const Vec3& d, double t_min,
                                   Vec3* normal) {
  const Mat3 to_local = Mat3::RotationZ(-box.yaw);
  const Vec3 lo = to_local * (o - box.center);
  const Vec3 ld = to_local * d;
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  int axis0 = -1, axis1 = -1;
  for (int a = 0; a < 3; ++a) {
    const double h = box.half_extents[a];
    const double oa = lo[a], da = ld[a];
    if (std::abs(da) < 1e-15) {
      if (oa < -h || oa > h) return std::nullopt;
      continue;
    }
    double ta = (-h - oa) / da, tb = (h - oa) / da;
    if (ta > tb) std::swap(ta, tb);
    if (ta > t0) {
      t0 = ta;
      axis0 = a;
    }
    if (tb < t1) {
      t1 = tb;
      axis1 = a;
    }
    if (t0 > t1) return std::nullopt;
  }
  double t;
  int axis;
  if (t0 > t_min) {
    t = t0;
    axis = axis0;
  } else if (t1 > t_min) {
    t = t1;
    axis = axis1;
  } else {
    return std::nullopt;
  }
  if (normal && axis >= 0) {
    const Vec3 p = lo + t * ld;
    Vec3 n;
    const double sign = p[axis] >= 0 ? 1.0 : -1.0;
    if (axis == 0) n = {sign, 0, 0};
    if (axis == 1) n = {0, sign, 0};
    if (axis == 2) n = {0, 0, sign};
    *normal = Mat3::RotationZ(box.yaw) * n;
  }
  return t;
}

std::optional<double> IntersectPlane(const GroundPlane& g, const Vec3& o, const Vec3& d, double t_min) {
  if (std::abs(d.z) < 1e-15) return std::nullopt;
  const double t = (g.height - o.z) / d.z;
  if (t <= t_min) return std::nullopt;
  return t;
}

Rgb AlbedoAt(const Primitive& prim, const Vec3& p) {
  if (!prim.checker) return prim.material.rho_d;
  const auto cell = [&](double x) { return static_cast<long long>(std::floor(x / prim.checker->cell)); };
  return ((cell(p.x) + cell(p.y)) & 1) ? prim.checker->alt_rho_d : prim.material.rho_d;
}

// Stratified Phong-lobe sample `index` of `per_side`^2 about `axis`.
Direction SampleLobe(const Vec3& axis, const Vec3& t, const Vec3& b, double exponent, int per_side, int index,
                     SplitMix64& rng) {
  const int i = index / per_side, j = index % per_side;
  const double u1 = std::max((i + rng.Uniform()) / per_side, 1e-300);
  const double u2 = (j + rng.Uniform()) / per_side;
  const double cos_a = std::pow(u1, 1.0 / (exponent + 1.0));
  const double sin_a = std::sqrt(std::max(0.0, 1.0 - cos_a * cos_a));
  const double phi = 2.0 * kPi * u2;
  return Normalize(cos_a * axis + sin_a * (std::cos(phi) * t + std::sin(phi) * b));
}

int SamplesPerSide(int requested) {
  const int n = std::clamp(requested, 1, 64);
  return std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)) + 1e-9)));
}

}  // namespace

void BuildFrame(const Vec3& n, Vec3* t, Vec3* b) {
  const Vec3 helper = std::abs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  *t = Normalize(Cross(helper, n));
  *b = Cross(n, *t);
}

void Material::Validate() const {
  for (int c = 0; c < 3; ++c) {
    if (!(rho_d[c] >= 0 && rho_d[c] <= 1)) throw ContractError("material: rho_d outside [0, 1]");
    if (rho_d[c] + rho_s > 1.0 + 1e-6) throw ContractError("material: rho_d + rho_s exceeds 1");
  }
  if (!(rho_s >= 0 && rho_s <= 1)) throw ContractError("material: rho_s outside [0, 1]");
  if (!(sigma > 0 && sigma <= 1)) throw ContractError("material: sigma outside (0, 1]");
}

Camera Camera::LookAt(const Vec3& eye, const Vec3& target, const Intrinsics& k) {
  const Vec3 forward = Normalize(target - eye);
  Vec3 right = Cross(forward, Vec3{0, 0, 1});
  if (Length(right) < 1e-9) right = Vec3{1, 0, 0};
  right = Normalize(right);
  const Vec3 down = Cross(forward, right);
  Camera cam;
  cam.intrinsics = k;
  cam.position = eye;
  cam.cam_to_world = Mat3::FromColumns(right, down, forward);
  return cam;
}

void SceneDesc::Validate() const {
  if (primitives.empty()) throw ContractError("scene has no primitives");
  for (const auto& p : primitives) p.material.Validate();
  camera.intrinsics.Validate();
}

std::optional<Hit> IntersectScene(const SceneDesc& scene, const Vec3& origin, const Vec3& dir, double t_min,
                                  double t_max) {
  std::optional<Hit> best;
  for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
    const Primitive& prim = scene.primitives[i];
    Vec3 n;
    std::optional<double> t;
    if (const auto* s = std::get_if<Sphere>(&prim.shape)) {
      t = IntersectSphere(*s, origin, dir, t_min);
      if (t) n = Normalize(origin + *t * dir - s->center);
    } else if (const auto* b = std::get_if<Box>(&prim.shape)) {
      t = IntersectBox(*b, origin, dir, t_min, &n);
    } else if (const auto* g = std::get_if<GroundPlane>(&prim.shape)) {
      t = IntersectPlane(*g, origin, dir, t_min);
      n = origin.z >= g->height ? Vec3{0, 0, 1} : Vec3{0, 0, -1};
    }
    if (!t || *t >= t_max) continue;
    if (!best || *t < best->t) {
      if (Dot(n, dir) > 0) n = -n;
      best = Hit{*t, origin + *t * dir, n, static_cast<int>(i)};
    }
  }
  return best;
}

bool Occluded(const SceneDesc& scene, const Vec3& origin, const Vec3& dir) {
  for (const Primitive& prim : scene.primitives) {
    if (const auto* s = std::get_if<Sphere>(&prim.shape)) {
      if (IntersectSphere(*s, origin, dir, 1e-9)) return true;
    } else if (const auto* b = std::get_if<Box>(&prim.shape)) {
      if (IntersectBox(*b, origin, dir, 1e-9, nullptr)) return true;
    } else if (const auto* g = std::get_if<GroundPlane>(&prim.shape)) {
      if (IntersectPlane(*g, origin, dir, 1e-9)) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------

IrradianceStack RenderIrradianceStack(const DepthFrame& frame, const NormalMap& normals, const CubeGrid& dirs,
                                      const Mat3& world_to_cam, const StackOptions& options) {
  const int w = frame.width(), h = frame.height();
  if (normals.width() != w || normals.height() != h) {
    throw ContractError("RenderIrradianceStack: normal map " + ShapeString(normals.normals) +
                        " does not match depth " + ShapeString(frame.depth));
  }
  if (options.out_width < 1 || options.out_height < 1 || w % options.out_width != 0 ||
      h % options.out_height != 0) {
    throw ContractError("RenderIrradianceStack: frame " + ShapeString(frame.depth) +
                        " is not a multiple of the stack resolution " + std::to_string(options.out_width) + "x" +
                        std::to_string(options.out_height));
  }
  if (dirs.dirs.empty()) throw ContractError("RenderIrradianceStack: no light directions");

  IrradianceStack stack;
  stack.dirs = dirs.dirs;
  stack.solid_angles = dirs.solid_angles;
  stack.width = options.out_width;
  stack.height = options.out_height;
  const int fx = w / stack.width, fy = h / stack.height;
  const double inv_area = 1.0 / (fx * fy);
  const std::size_t cells = static_cast<std::size_t>(stack.width) * stack.height;
  stack.maps.assign(dirs.size() * cells, 0.0f);

  const DepthMarcher marcher(frame, options.visibility);
  std::vector<double> acc(cells);
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const Direction l = world_to_cam * dirs.dirs[k];
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int v = 0; v < h; ++v) {
      for (int u = 0; u < w; ++u) {
        if (!normals.is_valid(u, v) || !frame.valid(u, v)) continue;
        const Vec3 n = normals.at(u, v);
        const double c = Dot(n, l);
        if (c <= 0) continue;
        if (!marcher.Visible(u, v, l, n)) continue;
        acc[static_cast<std::size_t>(v / fy) * stack.width + u / fx] += c;
      }
    }
    for (std::size_t i = 0; i < cells; ++i) {
      stack.maps[k * cells + i] = static_cast<float>(std::min(1.0, acc[i] * inv_area));
    }
  }
  return stack;
}

Image RenderDiffuse(const IrradianceStack& stack, std::span<const Rgb> light) {
  if (light.size() != stack.size()) {
    throw ContractError("RenderDiffuse: " + std::to_string(light.size()) + " light values for " +
                        std::to_string(stack.size()) + " stack directions");
  }
  const std::size_t cells = static_cast<std::size_t>(stack.width) * stack.height;
  std::vector<double> acc(cells * 3, 0.0);
  for (std::size_t k = 0; k < stack.size(); ++k) {
    const double dw = stack.solid_angles[k];
    const auto map = stack.map(k);
    for (int c = 0; c < 3; ++c) {
      const double wgt = light[k][c] * dw;
      if (wgt == 0) continue;
      for (std::size_t i = 0; i < cells; ++i) acc[i * 3 + c] += wgt * map[i];
    }
  }
  Image out(stack.width, stack.height, 3);
  auto data = out.data();
  for (std::size_t i = 0; i < acc.size(); ++i) data[i] = static_cast<float>(acc[i]);
  return out;
}

// ---------------------------------------------------------------------------

SceneTransport::SceneTransport(const SceneDesc& scene, const RenderOptions& options)
    : scene_(scene), options_(options) {
  scene_.Validate();
  const int qw = options_.diffuse_env_width, qh = options_.diffuse_env_height;
  const SolidAngleTable table = SolidAngles(qw, qh);
  for (int v = 0; v < qh; ++v) {
    for (int u = 0; u < qw; ++u) {
      quad_dirs_.push_back(LatLongToDir(u, v, qw, qh));
      quad_solid_angles_.push_back(table.at(v));
    }
  }
  words_per_pixel_ = (quad_dirs_.size() + 63) / 64;

  const Camera& cam = scene_.camera;
  const Intrinsics& k = cam.intrinsics;
  const Mat3 to_cam = cam.world_to_cam();
  const int w = k.width, h = k.height;
  const int per_side = SamplesPerSide(options_.specular_samples);
  const int spec_total = per_side * per_side;
  pixels_.resize(static_cast<std::size_t>(w) * h);
  visibility_.assign(pixels_.size() * words_per_pixel_, 0);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      PixelRecord& rec = pixels_[idx];
      const Vec3 dir_cam = Normalize(Vec3{(x - k.cx) / k.fx, (y - k.cy) / k.fy, 1.0});
      const Vec3 dir = cam.cam_to_world * dir_cam;
      const auto hit = IntersectScene(scene_, cam.position, dir);
      if (!hit) continue;
      const Primitive& prim = scene_.primitives[hit->primitive];
      rec.hit = true;
      rec.depth = static_cast<float>(hit->t * dir_cam.z);
      rec.normal_world = hit->normal;
      rec.normal_cam = to_cam * hit->normal;
      rec.albedo = AlbedoAt(prim, hit->point);
      rec.rho_s = static_cast<float>(prim.material.rho_s);
      rec.diffuse = rec.albedo[0] > 0 || rec.albedo[1] > 0 || rec.albedo[2] > 0;
      const Vec3 origin = hit->point + kShadowEpsilon * hit->normal;

      if (rec.diffuse) {
        uint64_t* bits = &visibility_[idx * words_per_pixel_];
        for (std::size_t q = 0; q < quad_dirs_.size(); ++q) {
          if (Dot(hit->normal, quad_dirs_[q]) <= 0) continue;
          if (Occluded(scene_, origin, quad_dirs_[q])) continue;
          bits[q / 64] |= uint64_t{1} << (q % 64);
        }
      }
      if (rec.rho_s > 0) {
        const Vec3 view = -dir;
        const Vec3 mirror = Normalize(2.0 * Dot(hit->normal, view) * hit->normal - view);
        Vec3 t, b;
        BuildFrame(mirror, &t, &b);
        SplitMix64 rng(options_.seed, idx);
        rec.mirror = mirror;
        rec.exponent = prim.material.PhongExponent();
        rec.spec_total = static_cast<uint16_t>(spec_total);
        for (int s = 0; s < spec_total; ++s) {
          const Direction wi = SampleLobe(mirror, t, b, rec.exponent, per_side, s, rng);
          if (Dot(wi, hit->normal) <= 0) continue;
          if (Occluded(scene_, origin, wi)) continue;
          rec.spec_bits |= uint64_t{1} << s;
        }
      }
    }
  }
}

LatLongMap SceneTransport::QuadratureEnv(const LatLongMap& env) const {
  const int qw = options_.diffuse_env_width, qh = options_.diffuse_env_height;
  if (env.width() % qw == 0 && env.height() % qh == 0) return DownsampleEnv(env, qw, qh);
  LatLongMap out(qw, qh);
  for (int v = 0; v < qh; ++v)
    for (int u = 0; u < qw; ++u) {
      const Rgb c = env.Sample(LatLongToDir(u, v, qw, qh));
      for (int ch = 0; ch < 3; ++ch) out.at(u, v, ch) = c[ch];
    }
  return out;
}

RenderResult SceneTransport::Render(const LatLongMap& env) const {
  const Camera& cam = scene_.camera;
  const int w = cam.intrinsics.width, h = cam.intrinsics.height;
  const LatLongMap quad = QuadratureEnv(env);
  const int qw = quad.width();
  const int per_side = SamplesPerSide(options_.specular_samples);
  std::vector<std::array<double, 3>> weighted(quad_dirs_.size());
  for (std::size_t q = 0; q < quad_dirs_.size(); ++q) {
    const int u = static_cast<int>(q % qw), v = static_cast<int>(q / qw);
    for (int c = 0; c < 3; ++c) weighted[q][c] = quad.at(u, v, c) * quad_solid_angles_[q];
  }

  RenderResult result;
  result.camera = cam;
  result.rgb = Image(w, h, 3);
  Image depth(w, h, 1);
  Decomposition& gt = result.gt;
  gt.albedo = Image(w, h, 3);
  gt.diffuse = Image(w, h, 3);
  gt.specular = Image(w, h, 3);
  gt.normals = NormalMap(w, h);
  gt.mask.assign(static_cast<std::size_t>(w) * h, 0);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      const PixelRecord& rec = pixels_[idx];
      if (!rec.hit) continue;
      depth.at(x, y) = rec.depth;
      gt.mask[idx] = 1;
      gt.normals.set(x, y, rec.normal_cam);
      std::array<double, 3> sd{0, 0, 0};
      if (rec.diffuse) {
        const uint64_t* bits = &visibility_[idx * words_per_pixel_];
        for (std::size_t word = 0; word < words_per_pixel_; ++word) {
          uint64_t m = bits[word];
          while (m) {
            const int bit = std::countr_zero(m);
            m &= m - 1;
            const std::size_t q = word * 64 + bit;
            const double c = Dot(rec.normal_world, quad_dirs_[q]);
            for (int ch = 0; ch < 3; ++ch) sd[ch] += weighted[q][ch] * c;
          }
        }
      }
      std::array<double, 3> ss{0, 0, 0};
      if (rec.spec_total > 0) {
        Vec3 t, b;
        BuildFrame(rec.mirror, &t, &b);
        SplitMix64 rng(options_.seed, idx);
        for (int s = 0; s < rec.spec_total; ++s) {
          const Direction wi = SampleLobe(rec.mirror, t, b, rec.exponent, per_side, s, rng);
          if (!(rec.spec_bits >> s & 1)) continue;
          const Rgb l = env.Sample(wi);
          for (int ch = 0; ch < 3; ++ch) ss[ch] += l[ch];
        }
        for (int ch = 0; ch < 3; ++ch) ss[ch] *= rec.rho_s / rec.spec_total;
      }
      for (int ch = 0; ch < 3; ++ch) {
        const float a = rec.albedo[ch];
        const float d = static_cast<float>(sd[ch]);
        const float s = static_cast<float>(ss[ch]);
        gt.albedo.at(x, y, ch) = a;
        gt.diffuse.at(x, y, ch) = d;
        gt.specular.at(x, y, ch) = s;
        result.rgb.at(x, y, ch) = a * d + s;
      }
    }
  }
  result.depth = DepthFrame(cam.intrinsics, std::move(depth));
  return result;
}

RenderResult RenderFull(const SceneDesc& scene, const LatLongMap& env, const RenderOptions& options) {
  return SceneTransport(scene, options).Render(env);
}

Image RenderSpecular(const DepthFrame& frame, const NormalMap& normals, const Material& material,
                     const LatLongMap& env, const Mat3& cam_to_world, const RenderOptions& options) {
  material.Validate();
  const int w = frame.width(), h = frame.height();
  Image out(w, h, 3);
  if (material.rho_s == 0) return out;
  const int per_side = SamplesPerSide(options.specular_samples);
  const int total = per_side * per_side;
  const double exponent = material.PhongExponent();
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!frame.valid(u, v) || !normals.is_valid(u, v)) continue;
      const Vec3 n = cam_to_world * normals.at(u, v);
      const Vec3 view = cam_to_world * (-Normalize(Unproject(u, v, frame)));
      const double c = Dot(n, view);
      if (c <= 0) continue;
      const Vec3 mirror = Normalize(2.0 * c * n - view);
      Vec3 t, b;
      BuildFrame(mirror, &t, &b);
      SplitMix64 rng(options.seed, static_cast<uint64_t>(v) * w + u);
      std::array<double, 3> acc{0, 0, 0};
      for (int s = 0; s < total; ++s) {
        const Direction wi = SampleLobe(mirror, t, b, exponent, per_side, s, rng);
        if (Dot(wi, n) <= 0) continue;
        const Rgb l = env.Sample(wi);
        for (int ch = 0; ch < 3; ++ch) acc[ch] += l[ch];
      }
      for (int ch = 0; ch < 3; ++ch) out.at(u, v, ch) = static_cast<float>(material.rho_s * acc[ch] / total);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

GeneratedEnv GenRandomEnv(const EnvGenOptions& options) {
  if (options.num_lights < 1) throw ContractError("GenRandomEnv: need at least one light");
  if (!(options.size_min > 0) || options.size_max < options.size_min) {
    throw ContractError("GenRandomEnv: invalid size range");
  }
  if (options.intensity_min < 0 || options.intensity_max < options.intensity_min) {
    throw ContractError("GenRandomEnv: invalid intensity range");
  }
  const int w = options.width, h = options.height;
  SplitMix64 rng(options.seed, 0x656e76);
  GeneratedEnv out{LatLongMap(w, h, static_cast<float>(options.ambient)), {}};
  const double bin = kPi / h;
  const double z_min = std::sin(options.min_elevation);
  const SolidAngleTable table = SolidAngles(w, h);

  for (int i = 0; i < options.num_lights; ++i) {
    AreaLight light;
    bool placed = false;
    for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
      const double z = rng.Uniform(z_min, 1.0);
      const double phi = rng.Uniform(0.0, 2.0 * kPi);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double omega = rng.Uniform(options.size_min, options.size_max);
      light.center = {r * std::cos(phi), r * std::sin(phi), z};
      light.angular_radius = std::acos(std::clamp(1.0 - omega / (2.0 * kPi), -1.0, 1.0));
      placed = true;
      for (const AreaLight& other : out.lights) {
        if (AngleBetween(light.center, other.center) <= light.angular_radius + other.angular_radius + 2 * bin) {
          placed = false;
          break;
        }
      }
    }
    if (!placed) throw ContractError("GenRandomEnv: could not place non-overlapping lights");
    const double intensity = rng.Uniform(options.intensity_min, options.intensity_max);

    // Rasterize a unit-peak profile, then scale to the requested integral.
    std::vector<std::pair<std::size_t, double>> texels;
    double energy = 0;
    for (int v = 0; v < h; ++v) {
      for (int u = 0; u < w; ++u) {
        const double d = AngleBetween(LatLongToDir(u, v, w, h), light.center);
        if (d >= light.angular_radius) continue;
        const double q = d / light.angular_radius;
        const double p = 1.0 - q * q;
        texels.emplace_back(static_cast<std::size_t>(v) * w + u, p);
        energy += p * table.at(v);
      }
    }
    if (texels.empty() || energy <= 0) {
      const LatLongBin b = DirToBin(light.center, w, h);
      texels = {{static_cast<std::size_t>(b.v) * w + b.u, 1.0}};
      energy = table.at(b.v);
    }
    light.peak_radiance = intensity / energy;
    for (const auto& [index, p] : texels) {
      const int u = static_cast<int>(index % w), v = static_cast<int>(index / w);
      for (int c = 0; c < 3; ++c) out.env.at(u, v, c) += static_cast<float>(light.peak_radiance * p);
    }
    out.lights.push_back(light);
  }
  return out;
}

ScenePreset ParseScenePreset(const std::string& name) {
  if (name == "sphere-on-plane") return ScenePreset::kSphereOnPlane;
  if (name == "box-on-plane") return ScenePreset::kBoxOnPlane;
  if (name == "cluster") return ScenePreset::kCluster;
  throw ContractError("unknown scene preset '" + name + "'");
}

std::string ScenePresetName(ScenePreset preset) {
  switch (preset) {
    case ScenePreset::kSphereOnPlane: return "sphere-on-plane";
    case ScenePreset::kBoxOnPlane: return "box-on-plane";
    case ScenePreset::kCluster: return "cluster";
  }
  return "unknown";
}

SceneDesc GenTestScene(ScenePreset preset, const Material& material, uint64_t seed,
                       const SceneGenOptions& options) {
  material.Validate();
  SplitMix64 rng(seed, 0x7363656e65);
  SceneDesc scene;
  scene.primitives.push_back({GroundPlane{0.0}, options.ground, std::nullopt});

  Vec3 target{0, 0, 0.35};
  switch (preset) {
    case ScenePreset::kSphereOnPlane: {
      const double r = rng.Uniform(0.4, 0.55);
      scene.primitives.push_back({Sphere{{0, 0, r}, r}, material, std::nullopt});
      target = {0, 0, 0.8 * r};
      break;
    }
    case ScenePreset::kBoxOnPlane: {
      const double hx = rng.Uniform(0.25, 0.4), hy = rng.Uniform(0.25, 0.4), hz = rng.Uniform(0.2, 0.4);
      scene.primitives.push_back({Box{{0, 0, hz}, {hx, hy, hz}, rng.Uniform(0.0, kPi / 2)}, material, std::nullopt});
      target = {0, 0, hz};
      break;
    }
    case ScenePreset::kCluster: {
      const int count = 1 + static_cast<int>(rng.Uniform() * 5.0);
      struct Footprint {
        double x, y, r;
      };
      std::vector<Footprint> placed;
      for (int i = 0; i < count; ++i) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
          const bool sphere = rng.Uniform() < 0.5;
          const double size = rng.Uniform(0.15, 0.3);
          const double rad = std::sqrt(rng.Uniform()) * 0.7, ang = rng.Uniform(0.0, 2.0 * kPi);
          const double x = rad * std::cos(ang), y = rad * std::sin(ang);
          const double foot = sphere ? size : size * std::sqrt(2.0);
          bool ok = true;
          for (const auto& f : placed) ok = ok && std::hypot(f.x - x, f.y - y) > f.r + foot + 0.02;
          if (!ok) continue;
          placed.push_back({x, y, foot});
          if (sphere) {
            scene.primitives.push_back({Sphere{{x, y, size}, size}, material, std::nullopt});
          } else {
            scene.primitives.push_back(
                {Box{{x, y, size}, {size, size, size}, rng.Uniform(0.0, kPi / 2)}, material, std::nullopt});
          }
          break;
        }
      }
      target = {0, 0, 0.2};
      break;
    }
  }

  const double azimuth = rng.Uniform(0.0, 2.0 * kPi);
  const double elevation = rng.Uniform(30.0, 50.0) * kPi / 180.0;
  const double distance = rng.Uniform(2.6, 3.2);
  const Vec3 eye = target + distance * Vec3{std::cos(elevation) * std::cos(azimuth),
                                            std::cos(elevation) * std::sin(azimuth), std::sin(elevation)};
  scene.camera = Camera::LookAt(eye, target, Intrinsics::FromFov(options.width, options.height, options.fov_x));
  return scene;
}

}  // namespace envlight
