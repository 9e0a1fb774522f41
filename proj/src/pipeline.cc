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

#include "envlight/pipeline.h"

#include <chrono>
#include <tuple>

namespace envlight {

namespace {

Image CropImage(const Image& image, int x0, int y0, int w, int h) {
  Image out(w, h, image.channels());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < image.channels(); ++c) out.at(x, y, c) = image.at(x0 + x, y0 + y, c);
  return out;
}

// Block means over valid pixels; a block is valid when at least half of it
// is.
void DownsampleGeometry(const DepthFrame& frame, const NormalMap& normals, int w, int h, DepthFrame* out_frame,
                        NormalMap* out_normals) {
  const int fx = frame.width() / w, fy = frame.height() / h;
  Image depth(w, h, 1);
  NormalMap n(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double dsum = 0;
      Vec3 nsum;
      int count = 0;
      for (int j = 0; j < fy; ++j) {
        for (int i = 0; i < fx; ++i) {
          const int u = x * fx + i, v = y * fy + j;
          if (!frame.valid(u, v) || !normals.is_valid(u, v)) continue;
          dsum += frame.at(u, v);
          nsum = nsum + normals.at(u, v);
          ++count;
        }
      }
      if (2 * count < fx * fy || Length(nsum) == 0) continue;
      depth.at(x, y) = static_cast<float>(dsum / count);
      n.set(x, y, Normalize(nsum));
    }
  }
  *out_frame = DepthFrame(frame.intrinsics.Downsampled(w, h), std::move(depth));
  *out_normals = std::move(n);
}

}  // namespace

void RunConfig::Validate() const {
  if (crop < 1 || cube_face_res < 1 || irradiance_res < 1 || stack_supersample < 1 || env_height < 1 ||
      env_width != 2 * env_height) {
    throw ContractError("RunConfig: resolutions must be positive and env_width == 2 * env_height");
  }
  const int working = irradiance_res * stack_supersample;
  if (crop % working != 0) {
    throw ContractError("RunConfig: crop " + std::to_string(crop) + " is not a multiple of the stack working " +
                        "resolution " + std::to_string(working));
  }
  if (!(bilateral_sigma_space > 0) || !(bilateral_sigma_range > 0)) {
    throw ContractError("RunConfig: bilateral sigmas must be positive");
  }
  if (!(alpha >= 0 && alpha <= 1)) throw ContractError("RunConfig: alpha outside [0, 1]");
  solver.Validate();
  fusion.Validate();
}

bool RunConfig::operator==(const RunConfig& o) const {
  const auto vis = [](const VisibilityParams& p) {
    return std::tuple(p.step_pixels, p.normal_offset, p.depth_bias, p.thickness);
  };
  const auto sol = [](const DiffuseSolveConfig& s) {
    return std::tuple(s.lambda, s.max_iter, s.tol, s.nonneg, s.record_trace);
  };
  const auto fus = [](const FusionConfig& f) {
    return std::tuple(f.spec_weight_at_full_count, f.count_saturation, f.splat_sigma_deg, f.gain_fit,
                      f.gain_fit_sigma_deg);
  };
  return std::tuple(seed, crop, cube_face_res, irradiance_res, env_width, env_height, stack_supersample,
                    bilateral_sigma_space, bilateral_sigma_range, alpha) ==
             std::tuple(o.seed, o.crop, o.cube_face_res, o.irradiance_res, o.env_width, o.env_height,
                        o.stack_supersample, o.bilateral_sigma_space, o.bilateral_sigma_range, o.alpha) &&
         vis(visibility) == vis(o.visibility) && sol(solver) == sol(o.solver) && fus(fusion) == fus(o.fusion);
}

EstimateResult Estimate(const EstimateInput& input, const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.Validate();
  const int fw = input.depth.width(), fh = input.depth.height();
  if (input.rgb.width() != fw || input.rgb.height() != fh || input.rgb.channels() != 3) {
    throw ContractError("Estimate: rgb " + ShapeString(input.rgb) + " does not match depth " +
                        ShapeString(input.depth.depth));
  }
  if (config.crop > fw || config.crop > fh) {
    throw ContractError("Estimate: crop " + std::to_string(config.crop) + " exceeds frame " + std::to_string(fw) +
                        "x" + std::to_string(fh));
  }
  const int c = config.crop;
  const int x0 = (fw - c) / 2, y0 = (fh - c) / 2;
  const DepthFrame frame(input.depth.intrinsics.Cropped(x0, y0, c, c), CropImage(input.depth.depth, x0, y0, c, c));
  const Image rgb = CropImage(input.rgb, x0, y0, c, c);

  const DepthFrame smooth = BilateralDepth(frame, config.bilateral_sigma_space, config.bilateral_sigma_range);
  const NormalMap normals = NormalsFromDepth(smooth);

  Decomposition decomp;
  if (input.decomposition) {
    if (input.decomposition->width() != fw || input.decomposition->height() != fh) {
      throw ContractError("Estimate: decomposition " + ShapeString(input.decomposition->albedo) +
                          " does not match the frame");
    }
    decomp = input.decomposition->Cropped(x0, y0, c, c);
  } else {
    decomp = DecomposeDichromatic(rgb, normals).decomposition;
  }

  // Irradiance stack at the working resolution, averaged to irradiance_res.
  const int working = config.irradiance_res * config.stack_supersample;
  DepthFrame work_frame;
  NormalMap work_normals;
  DownsampleGeometry(smooth, decomp.normals, working, working, &work_frame, &work_normals);
  CubeGrid grid = CubeDirs(config.cube_face_res);
  StackOptions stack_options;
  stack_options.out_width = config.irradiance_res;
  stack_options.out_height = config.irradiance_res;
  stack_options.visibility = config.visibility;
  const IrradianceStack stack =
      RenderIrradianceStack(work_frame, work_normals, grid, input.cam_to_world.Transposed(), stack_options);

  // Shading restricted to the pixels the stack covers.
  Image shading(c, c, 3);
  const int f = c / working;
  for (int y = 0; y < c; ++y) {
    for (int x = 0; x < c; ++x) {
      if (!decomp.valid(x, y) || !work_normals.is_valid(x / f, y / f)) continue;
      for (int ch = 0; ch < 3; ++ch) shading.at(x, y, ch) = decomp.diffuse.at(x, y, ch);
    }
  }
  shading = DownsampleArea(shading, config.irradiance_res, config.irradiance_res);

  EstimateResult result{LatLongMap(config.env_width, config.env_height),
                        LatLongMap(config.env_width, config.env_height), {}, {}, {}, {}, 0};
  result.solution = SolveDiffuse(shading, stack, config.solver);
  grid.values = result.solution.values;
  result.diffuse_env = CubeToLatLong(grid, config.env_width, config.env_height);
  result.grid = std::move(grid);
  result.specular = ProjectSpecular(decomp, frame, input.cam_to_world, config.env_width, config.env_height);
  result.fusion = Fuse(result.diffuse_env, result.specular, config.fusion);
  result.env = result.fusion.env;
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SequenceResult EstimateSequence(const std::vector<SequenceFrame>& frames, const RunConfig& config) {
  if (frames.empty()) throw ContractError("EstimateSequence: no frames");
  SequenceResult out;
  for (const SequenceFrame& f : frames) {
    out.raw.push_back({f.index, Estimate(f.input, config).env, f.yaw_to_world});
  }
  out.smoothed = SmoothSequence(out.raw, config.alpha);
  out.raw_loss = TemporalLossTrace(out.raw);
  out.smoothed_loss = TemporalLossTrace(out.smoothed);
  return out;
}

}  // namespace envlight
