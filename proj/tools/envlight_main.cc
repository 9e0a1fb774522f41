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

// envlight command-line tool.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "envlight/io.h"
#include "envlight/metrics.h"
#include "envlight/pipeline.h"

namespace fs = std::filesystem;
using namespace envlight;

namespace {

enum Exit : int {
  kOk = 0,
  kUsage = 2,
  kIo = 3,
  kParse = 4,
  kInvalid = 5,
  kDegenerate = 6,
  kInternal = 7,
};

constexpr const char* kExitHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  2  usage error (unknown flag, missing argument)\n"
    "  3  file missing or unreadable/unwritable\n"
    "  4  malformed input file\n"
    "  5  invalid input or violated invariant (shape mismatch, bad config)\n"
    "  6  degenerate linear system\n"
    "  7  internal error\n"
    "Failures print one line to stderr: error code=<name> exit=<n> message=\"...\"\n";

int Fail(const char* code, int exit, const std::string& message) {
  std::string m;
  for (char ch : message) m += (ch == '"' ? '\'' : (ch == '\n' ? ' ' : ch));
  std::fprintf(stderr, "error code=%s exit=%d message=\"%s\"\n", code, exit, m.c_str());
  return exit;
}

void Require(const fs::path& p) {
  if (!fs::exists(p)) throw IoError("missing file " + p.string());
}

Material NamedMaterial(const std::string& name) {
  if (name == "diffuse") return {{0.7f, 0.7f, 0.7f}, 0.0, 0.5};
  if (name == "glossy") return {{0.5f, 0.5f, 0.5f}, 0.5, 0.05};
  if (name == "mirror") return {{0.0f, 0.0f, 0.0f}, 1.0, 0.01};
  throw ContractError("unknown material '" + name + "' (diffuse, glossy, mirror)");
}

// "<dir>/<stem>rgb.pfm" -> "<dir>/<stem>"
std::string PrefixOf(const fs::path& rgb) {
  const std::string s = rgb.string();
  const std::string tail = "rgb.pfm";
  if (s.size() < tail.size() || s.compare(s.size() - tail.size(), tail.size(), tail) != 0) {
    throw ContractError("cannot derive a file prefix from " + s + " (expected <prefix>rgb.pfm)");
  }
  return s.substr(0, s.size() - tail.size());
}

EstimateInput LoadInput(const fs::path& rgb_path, const fs::path& depth_path, const fs::path& camera_path,
                        const std::string& gt_prefix) {
  Require(rgb_path);
  Require(depth_path);
  Require(camera_path);
  const Camera camera = CameraFromJson(ReadJson(camera_path));
  EstimateInput in;
  in.rgb = ReadPfm(rgb_path);
  if (in.rgb.channels() != 3) throw ContractError(rgb_path.string() + ": expected an RGB image");
  in.depth = ReadDepthFrame(depth_path, camera);
  in.cam_to_world = camera.cam_to_world;
  if (!gt_prefix.empty()) in.decomposition = ReadDecomposition(gt_prefix);
  return in;
}

RunConfig LoadConfig(const std::string& path) {
  if (path.empty()) return {};
  Require(path);
  return ConfigFromJson(ReadJson(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Environment lighting estimation from RGBD object appearance."};
  app.footer(kExitHelp);
  app.require_subcommand(1);

  // gen-scene
  std::string preset = "sphere-on-plane", material = "diffuse", out;
  uint64_t seed = 0;
  int width = 128, height = 128;
  auto* gen_scene = app.add_subcommand("gen-scene", "Write a seeded test scene (JSON).");
  gen_scene->add_option("--preset", preset, "sphere-on-plane | box-on-plane | cluster")->capture_default_str();
  gen_scene->add_option("--material", material, "diffuse | glossy | mirror")->capture_default_str();
  gen_scene->add_option("--seed", seed)->capture_default_str();
  gen_scene->add_option("--width", width)->capture_default_str();
  gen_scene->add_option("--height", height)->capture_default_str();
  gen_scene->add_option("--out", out, "output scene JSON")->required();

  // gen-env
  int lights = 1;
  auto* gen_env = app.add_subcommand("gen-env", "Write a seeded random environment map (PFM).");
  gen_env->add_option("--lights", lights, "number of area lights")->capture_default_str();
  gen_env->add_option("--seed", seed)->capture_default_str();
  gen_env->add_option("--out", out, "output PFM")->required();

  // render
  std::string scene_path, env_path, prefix;
  int stack_res = 32, face_res = 8;
  auto* render = app.add_subcommand("render", "Render a scene: rgb, depth, ground-truth factors, irradiance stack.");
  render->add_option("--scene", scene_path)->required();
  render->add_option("--env", env_path)->required();
  render->add_option("--out-prefix", prefix)->required();
  render->add_option("--stack-res", stack_res, "irradiance stack resolution")->capture_default_str();
  render->add_option("--cube-face-res", face_res)->capture_default_str();
  render->add_option("--seed", seed, "specular sampling seed")->capture_default_str();

  // estimate
  std::string rgb_path, depth_path, config_path, camera_path, out_env, gt_prefix, png_path;
  bool use_gt = false;
  auto* estimate = app.add_subcommand("estimate", "Estimate the environment map of one RGBD frame.");
  estimate->add_option("--rgb", rgb_path)->required();
  estimate->add_option("--depth", depth_path)->required();
  estimate->add_option("--config", config_path, "run config JSON (defaults if omitted)");
  estimate->add_option("--camera", camera_path, "camera JSON (default: <prefix>camera.json next to --rgb)");
  estimate->add_option("--out-env", out_env)->required();
  estimate->add_flag("--use-gt-decomposition", use_gt, "read ground-truth factors written by render");
  estimate->add_option("--gt-prefix", gt_prefix, "factor prefix (default: derived from --rgb)");
  estimate->add_option("--png", png_path, "also write a gamma-encoded preview");

  // estimate-seq
  std::string frames_path;
  double alpha = -1;
  auto* estimate_seq = app.add_subcommand("estimate-seq", "Estimate a frame sequence with temporal smoothing.");
  estimate_seq->add_option("--frames", frames_path, "frame manifest JSON")->required();
  estimate_seq->add_option("--alpha", alpha, "smoothing weight of the newest frame (default from config)");
  estimate_seq->add_option("--config", config_path);
  estimate_seq->add_option("--out-prefix", prefix, "per-frame outputs <prefix><index>.pfm")->required();

  // eval
  std::string est_path, gt_path, probes = "default";
  double delta = 1.0;
  int probe_res = 64;
  auto* eval = app.add_subcommand("eval", "Compare an estimated environment map with ground truth.");
  eval->add_option("--est", est_path)->required();
  eval->add_option("--gt", gt_path)->required();
  eval->add_option("--probes", probes, "default | diffuse | none")->capture_default_str();
  eval->add_option("--probe-res", probe_res)->capture_default_str();
  eval->add_option("--huber-delta", delta)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return Fail("usage", kUsage, e.what());
  }

  try {
    if (*gen_scene) {
      SceneGenOptions opt;
      opt.width = width;
      opt.height = height;
      const SceneDesc scene = GenTestScene(ParseScenePreset(preset), NamedMaterial(material), seed, opt);
      WriteJson(out, SceneToJson(scene));
    } else if (*gen_env) {
      EnvGenOptions opt;
      opt.num_lights = lights;
      opt.seed = seed;
      WritePfm(out, GenRandomEnv(opt).env.image());
    } else if (*render) {
      Require(scene_path);
      Require(env_path);
      const SceneDesc scene = SceneFromJson(ReadJson(scene_path));
      const LatLongMap env = ReadEnv(env_path);
      RenderOptions opt;
      opt.seed = seed;
      const RenderResult r = RenderFull(scene, env, opt);
      WritePfm(prefix + "rgb.pfm", r.rgb);
      WritePfm(prefix + "depth.pfm", r.depth.depth);
      WriteDecomposition(prefix, r.gt);
      WriteJson(prefix + "camera.json", CameraToJson(r.camera));
      const int w = r.depth.width(), h = r.depth.height();
      if (w % stack_res != 0 || h % stack_res != 0) {
        throw ContractError("frame " + ShapeString(r.depth.depth) + " is not a multiple of --stack-res " +
                            std::to_string(stack_res));
      }
      const CubeGrid grid = CubeDirs(face_res);
      StackOptions so;
      so.out_width = stack_res;
      so.out_height = stack_res;
      const IrradianceStack stack = RenderIrradianceStack(r.depth, r.gt.normals, grid, r.camera.world_to_cam(), so);
      Image maps(stack.width, stack.height * static_cast<int>(stack.size()), 1);
      std::copy(stack.maps.begin(), stack.maps.end(), maps.data().begin());
      WritePfm(prefix + "stack.pfm", maps);
      nlohmann::json dirs = nlohmann::json::array();
      for (const Direction& d : stack.dirs) dirs.push_back({d.x, d.y, d.z});
      WriteJson(prefix + "stack.json", {{"schema", kStackSchema},
                                        {"width", stack.width},
                                        {"height", stack.height},
                                        {"count", stack.size()},
                                        {"cube_face_res", face_res},
                                        {"maps", fs::path(prefix + "stack.pfm").filename().string()},
                                        {"directions", dirs},
                                        {"solid_angles", stack.solid_angles}});
    } else if (*estimate) {
      if (camera_path.empty()) camera_path = PrefixOf(rgb_path) + "camera.json";
      if (use_gt && gt_prefix.empty()) gt_prefix = PrefixOf(rgb_path);
      if (!use_gt) gt_prefix.clear();
      const RunConfig config = LoadConfig(config_path);
      const EstimateResult r = Estimate(LoadInput(rgb_path, depth_path, camera_path, gt_prefix), config);
      WritePfm(out_env, r.env.image());
      if (!png_path.empty()) WritePng(png_path, r.env.image());
      std::printf("seconds=%.4f\nspecular_bins=%zu\niterations=%d,%d,%d\ngain=%.6g,%.6g,%.6g\n", r.seconds,
                  r.specular.ValidCount(), r.solution.iterations[0], r.solution.iterations[1],
                  r.solution.iterations[2], r.fusion.gain[0], r.fusion.gain[1], r.fusion.gain[2]);
    } else if (*estimate_seq) {
      Require(frames_path);
      RunConfig config = LoadConfig(config_path);
      if (alpha >= 0) config.alpha = alpha;
      config.Validate();
      std::vector<SequenceFrame> frames;
      for (const ManifestFrame& m : ReadManifest(frames_path)) {
        frames.push_back({m.index, LoadInput(m.rgb, m.depth, m.camera, m.gt_prefix.string()), m.yaw_to_world});
      }
      const SequenceResult r = EstimateSequence(frames, config);
      for (const FrameEstimate& f : r.smoothed) WritePfm(prefix + std::to_string(f.index) + ".pfm", f.env.image());
      for (std::size_t i = 0; i < r.raw_loss.size(); ++i) {
        std::printf("temporal_loss[%zu]=%.9g raw=%.9g\n", i, r.smoothed_loss[i], r.raw_loss[i]);
      }
    } else if (*eval) {
      Require(est_path);
      Require(gt_path);
      const LatLongMap est = ReadEnv(est_path);
      const LatLongMap gt = ReadEnv(gt_path);
      std::printf("light_rmse=%.9g\n", LightRmse(est, gt));
      std::printf("light_rmse_weighted=%.9g\n", LightRmse(est, gt, true));
      std::printf("huber=%.9g\nhuber_delta=%g\n", Huber(est, gt, delta), delta);
      for (int order : {3, 5}) {
        const LatLongMap sh = ShRender(ShFit(gt, order), gt.width(), gt.height(), true);
        std::printf("sh%d_light_rmse=%.9g\n", order, LightRmse(sh, gt));
      }
      if (probes != "none") {
        if (probes != "default" && probes != "diffuse") throw ContractError("unknown probe set '" + probes + "'");
        const ProbeSet set = probes == "default" ? ProbeSet::Default(probe_res) : ProbeSet::DiffuseOnly(probe_res);
        std::printf("render_rmse=%.9g\n", RenderRmse(est, gt, set));
        for (int order : {3, 5}) {
          const LatLongMap sh = ShRender(ShFit(gt, order), gt.width(), gt.height(), true);
          std::printf("sh%d_render_rmse=%.9g\n", order, RenderRmse(sh, gt, set));
        }
        std::printf("probes=%s\n", probes.c_str());
      }
      std::printf("space=linear\n");
    }
  } catch (const IoError& e) {
    return Fail("io", kIo, e.what());
  } catch (const ParseError& e) {
    return Fail("parse", kParse, e.what());
  } catch (const DegenerateSystemError& e) {
    return Fail("degenerate", kDegenerate, e.what());
  } catch (const Error& e) {
    return Fail("invalid", kInvalid, e.what());
  } catch (const fs::filesystem_error& e) {
    return Fail("io", kIo, e.what());
  } catch (const std::exception& e) {
    return Fail("internal", kInternal, e.what());
  }
  return kOk;
}
