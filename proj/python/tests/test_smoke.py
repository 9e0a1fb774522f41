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

import math

import numpy as np
import pytest

import envlight

SMALL = {"crop": 64, "irradiance_res": 16, "env_width": 64, "env_height": 32}


@pytest.fixture(scope="module")
def frame():
    scene = envlight.gen_scene("sphere-on-plane", rho_s=0.3, sigma=0.05, seed=3, width=64, height=64)
    env = envlight.gen_env(lights=2, seed=5)
    return env, envlight.render(scene, env)


def test_gen_env_shape(frame):
    env, _ = frame
    assert env.shape == (128, 256, 3)
    assert env.dtype == np.float32
    assert env.min() >= 0 and env.max() > 0


def test_render_outputs(frame):
    _, r = frame
    assert r["rgb"].shape == (64, 64, 3)
    assert r["depth"].shape == (64, 64)
    assert r["gt"]["mask"].shape == (64, 64)
    assert set(r["camera"]) >= {"intrinsics", "cam_to_world"}


def test_estimate_with_gt_decomposition(frame):
    env, r = frame
    out = envlight.estimate(r["rgb"], r["depth"], r["camera"], SMALL, decomposition=r["gt"])
    est = out["env"]
    assert est.shape == (32, 64, 3)
    assert np.isfinite(est).all() and est.min() >= 0
    gt = envlight.sh_project(env, 8, clamp_negative=True)
    small_gt = gt.reshape(32, 4, 64, 4, 3).mean(axis=(1, 3))
    black = np.zeros_like(est)
    assert envlight.light_rmse(est, small_gt) < envlight.light_rmse(black, small_gt)


def test_estimate_is_deterministic(frame):
    _, r = frame
    a = envlight.estimate(r["rgb"], r["depth"], r["camera"], SMALL)["env"]
    b = envlight.estimate(r["rgb"], r["depth"], r["camera"], SMALL)["env"]
    assert np.array_equal(a, b)


def test_metrics_vanish_on_identical_maps(frame):
    env, _ = frame
    assert envlight.light_rmse(env, env) == 0
    assert envlight.render_rmse(env, env, probes="diffuse", resolution=16) == 0


def test_rotation_round_trip(frame):
    env, _ = frame
    step = 2 * math.pi / env.shape[1]
    back = envlight.rotate_env(envlight.rotate_env(env, 5 * step), -5 * step)
    np.testing.assert_array_equal(back, env)


def test_pfm_round_trip(tmp_path, frame):
    env, _ = frame
    path = str(tmp_path / "env.pfm")
    envlight.write_pfm(path, env)
    np.testing.assert_array_equal(envlight.read_pfm(path), env)


def test_errors_map_to_python_exceptions(tmp_path, frame):
    env, r = frame
    with pytest.raises(envlight.ContractError):
        envlight.light_rmse(env, env[:64, :128])
    with pytest.raises(envlight.ParseError, match="alpha"):
        envlight.estimate(r["rgb"], r["depth"], r["camera"], {"alpha": 2.0})
    with pytest.raises(envlight.IoError):
        envlight.read_pfm(str(tmp_path / "missing.pfm"))
    bad = tmp_path / "bad.pfm"
    bad.write_bytes(b"PF\n4 4\n-1.0\n")
    with pytest.raises(envlight.ParseError):
        envlight.read_pfm(str(bad))
    assert issubclass(envlight.ContractError, envlight.Error)
