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

// Wall-clock benchmark of the single-frame estimate at the default config.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <vector>

#include "CLI11.hpp"
#include "envlight/pipeline.h"

using namespace envlight;

int main(int argc, char** argv) {
  CLI::App app{"Times envlight estimate end to end on a synthetic frame."};
  int size = 384, repeats = 5;
  uint64_t seed = 3;
  bool gt = false;
  double budget = 2.0;
  app.add_option("--size", size, "frame width and height")->capture_default_str();
  app.add_option("--repeats", repeats)->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--budget", budget, "seconds per frame")->capture_default_str();
  app.add_flag("--use-gt-decomposition", gt);
  CLI11_PARSE(app, argc, argv);

  SceneGenOptions so;
  so.width = so.height = size;
  const Material glossy{{0.6f, 0.5f, 0.4f}, 0.4, 0.05};
  const SceneDesc scene = GenTestScene(ScenePreset::kSphereOnPlane, glossy, seed, so);
  EnvGenOptions eo;
  eo.num_lights = 2;
  eo.seed = seed;
  const RenderResult r = RenderFull(scene, GenRandomEnv(eo).env);

  EstimateInput in{r.rgb, r.depth, r.camera.cam_to_world, std::nullopt};
  if (gt) in.decomposition = r.gt;
  RunConfig config;
  config.crop = std::min(config.crop, size);

  std::vector<double> seconds;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const EstimateResult e = Estimate(in, config);
    seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    (void)e;
  }
  std::sort(seconds.begin(), seconds.end());
  const double mean = std::accumulate(seconds.begin(), seconds.end(), 0.0) / seconds.size();
  std::printf("frame=%dx%d\ncrop=%d\ndecomposition=%s\nrepeats=%d\n", size, size, config.crop,
              gt ? "ground_truth" : "dichromatic", repeats);
  std::printf("seconds_min=%.4f\nseconds_median=%.4f\nseconds_mean=%.4f\nseconds_max=%.4f\n", seconds.front(),
              seconds[seconds.size() / 2], mean, seconds.back());
  std::printf("budget_seconds=%.2f\nwithin_budget=%d\n", budget, seconds[seconds.size() / 2] <= budget ? 1 : 0);
  return 0;
}
