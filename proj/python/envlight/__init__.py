# Copyright 2026 The envlight Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Environment lighting estimation from RGBD object appearance.

Images are float32 arrays shaped (height, width, channels). Scenes, cameras
and run configs are JSON documents; the helpers here accept dicts.
"""

import json

from envlight import _envlight
from envlight._envlight import (
    ContractError,
    DegenerateSystemError,
    Error,
    IoError,
    ParseError,
    gen_env,
    light_rmse,
    read_pfm,
    render_rmse,
    rotate_env,
    sh_project,
    write_pfm,
)

__all__ = [
    "ContractError",
    "DegenerateSystemError",
    "Error",
    "IoError",
    "ParseError",
    "default_config",
    "estimate",
    "gen_env",
    "gen_scene",
    "light_rmse",
    "read_pfm",
    "render",
    "render_rmse",
    "rotate_env",
    "sh_project",
    "write_pfm",
]


def _dumps(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def default_config():
    return json.loads(_envlight.default_config())


def gen_scene(preset="sphere-on-plane", rho_d=(0.5, 0.5, 0.5), rho_s=0.0, sigma=0.1, seed=0, width=128,
              height=128):
    return json.loads(_envlight.gen_scene(preset, rho_d, rho_s, sigma, seed, width, height))


def render(scene, env, seed=0):
    """Returns rgb, depth, camera (dict) and gt (ground-truth factors)."""
    out = _envlight.render(_dumps(scene), env, seed)
    out["camera"] = json.loads(out["camera"])
    return out


def estimate(rgb, depth, camera, config=None, decomposition=None):
    """Estimates the world-frame environment map of one RGBD frame.

    `config` entries override the defaults. Pass render()["gt"] as
    `decomposition` to skip the dichromatic split.
    """
    cfg = ""
    if config is not None:
        merged = default_config()
        merged.update(json.loads(config) if isinstance(config, str) else config)
        cfg = json.dumps(merged)
    return _envlight.estimate(rgb, depth, _dumps(camera), cfg, decomposition)
