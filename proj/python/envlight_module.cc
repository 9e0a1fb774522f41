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


// Python bindings. Images cross the boundary as float32 arrays of shape
// (height, width, channels); JSON documents cross as strings.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "envlight/io.h"
#include "envlight/metrics.h"
#include "envlight/pipeline.h"

namespace py = pybind11;
using envlight::Image;
using envlight::LatLongMap;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

Image ToImage(const FloatArray& a, const char* what) {
  if (a.ndim() != 2 && a.ndim() != 3) {
    throw envlight::ContractError(std::string(what) + ": expected a 2-D or 3-D array");
  }
  const int h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
  const int c = a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1;
  Image out(w, h, c);
  std::copy(a.data(), a.data() + a.size(), out.data().begin());
  return out;
}

py::array_t<float> FromImage(const Image& image, bool squeeze = false) {
  std::vector<py::ssize_t> shape = {image.height(), image.width()};
  if (!(squeeze && image.channels() == 1)) shape.push_back(image.channels());
  py::array_t<float> out(shape);
  std::copy(image.data().begin(), image.data().end(), out.mutable_data());
  return out;
}

LatLongMap ToEnv(const FloatArray& a) {
  LatLongMap env(ToImage(a, "environment map"));
  env.Validate();
  return env;
}

py::array_t<uint8_t> FromMask(const std::vector<uint8_t>& mask, int w, int h) {
  py::array_t<uint8_t> out({h, w});
  std::copy(mask.begin(), mask.end(), out.mutable_data());
  return out;
}

std::vector<uint8_t> ToMask(const py::array_t<uint8_t, py::array::c_style | py::array::forcecast>& a) {
  return std::vector<uint8_t>(a.data(), a.data() + a.size());
}

py::array_t<double> FromMat3(const envlight::Mat3& m) {
  py::array_t<double> out({3, 3});
  std::copy(m.m.begin(), m.m.end(), out.mutable_data());
  return out;
}

envlight::Mat3 ToMat3(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(0) != 3 || a.shape(1) != 3) throw envlight::ContractError("expected a 3x3 matrix");
  envlight::Mat3 m;
  std::copy(a.data(), a.data() + 9, m.m.begin());
  return m;
}

py::dict FromDecomposition(const envlight::Decomposition& d) {
  py::dict out;
  out["albedo"] = FromImage(d.albedo);
  out["diffuse"] = FromImage(d.diffuse);
  out["specular"] = FromImage(d.specular);
  out["normals"] = FromImage(d.normals.normals);
  out["normals_valid"] = FromMask(d.normals.valid, d.width(), d.height());
  out["mask"] = FromMask(d.mask, d.width(), d.height());
  return out;
}

envlight::Decomposition ToDecomposition(const py::dict& d) {
  envlight::Decomposition out;
  out.albedo = ToImage(d["albedo"].cast<FloatArray>(), "albedo");
  out.diffuse = ToImage(d["diffuse"].cast<FloatArray>(), "diffuse");
  out.specular = ToImage(d["specular"].cast<FloatArray>(), "specular");
  out.normals.normals = ToImage(d["normals"].cast<FloatArray>(), "normals");
  out.normals.valid = ToMask(d["normals_valid"].cast<py::array_t<uint8_t>>());
  out.mask = ToMask(d["mask"].cast<py::array_t<uint8_t>>());
  const std::size_t n = static_cast<std::size_t>(out.width()) * out.height();
  if (out.normals.valid.size() != n || out.mask.size() != n) {
    throw envlight::ContractError("decomposition masks do not match the factor images");
  }
  return out;
}

envlight::RunConfig ParseConfig(const std::string& text) {
  if (text.empty()) return {};
  return envlight::ConfigFromJson(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_envlight, m) {
  m.doc() = "Environment lighting estimation from RGBD object appearance.";

  auto error = py::register_exception<envlight::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<envlight::ContractError>(m, "ContractError", error.ptr());
  py::register_exception<envlight::ParseError>(m, "ParseError", error.ptr());
  py::register_exception<envlight::DegenerateSystemError>(m, "DegenerateSystemError", error.ptr());
  py::register_exception<envlight::IoError>(m, "IoError", error.ptr());

  m.def("default_config", [] { return envlight::ConfigToJson({}).dump(); });

  m.def(
      "gen_env",
      [](int lights, uint64_t seed) {
        envlight::EnvGenOptions opt;
        opt.num_lights = lights;
        opt.seed = seed;
        return FromImage(envlight::GenRandomEnv(opt).env.image());
      },
      py::arg("lights") = 1, py::arg("seed") = 0);

  m.def(
      "gen_scene",
      [](const std::string& preset, std::array<float, 3> rho_d, double rho_s, double sigma, uint64_t seed,
         int width, int height) {
        envlight::Material mat;
        mat.rho_d = {rho_d[0], rho_d[1], rho_d[2]};
        mat.rho_s = rho_s;
        mat.sigma = sigma;
        envlight::SceneGenOptions opt;
        opt.width = width;
        opt.height = height;
        return envlight::SceneToJson(envlight::GenTestScene(envlight::ParseScenePreset(preset), mat, seed, opt))
            .dump();
      },
      py::arg("preset") = "sphere-on-plane", py::arg("rho_d") = std::array<float, 3>{0.5f, 0.5f, 0.5f},
      py::arg("rho_s") = 0.0, py::arg("sigma") = 0.1, py::arg("seed") = 0, py::arg("width") = 128,
      py::arg("height") = 128);

  m.def(
      "render",
      [](const std::string& scene_json, const FloatArray& env, uint64_t seed) {
        const envlight::SceneDesc scene = envlight::SceneFromJson(nlohmann::json::parse(scene_json));
        envlight::RenderOptions opt;
        opt.seed = seed;
        envlight::RenderResult r;
        {
          const LatLongMap e = ToEnv(env);
          py::gil_scoped_release release;
          r = envlight::RenderFull(scene, e, opt);
        }
        py::dict out;
        out["rgb"] = FromImage(r.rgb);
        out["depth"] = FromImage(r.depth.depth, true);
        out["camera"] = envlight::CameraToJson(r.camera).dump();
        out["gt"] = FromDecomposition(r.gt);
        return out;
      },
      py::arg("scene"), py::arg("env"), py::arg("seed") = 0);

  m.def(
      "estimate",
      [](const FloatArray& rgb, const FloatArray& depth, const std::string& camera_json, const std::string& config,
         const std::optional<py::dict>& decomposition) {
        const envlight::Camera cam = envlight::CameraFromJson(nlohmann::json::parse(camera_json));
        envlight::EstimateInput in;
        in.rgb = ToImage(rgb, "rgb");
        in.depth = envlight::DepthFrame(cam.intrinsics, ToImage(depth, "depth"));
        in.cam_to_world = cam.cam_to_world;
        if (decomposition) in.decomposition = ToDecomposition(*decomposition);
        const envlight::RunConfig cfg = ParseConfig(config);
        envlight::EstimateResult r;
        {
          py::gil_scoped_release release;
          r = envlight::Estimate(in, cfg);
        }
        py::dict out;
        out["env"] = FromImage(r.env.image());
        out["diffuse_env"] = FromImage(r.diffuse_env.image());
        out["gain"] = r.fusion.gain;
        out["specular_bins"] = r.specular.ValidCount();
        out["iterations"] = r.solution.iterations;
        out["seconds"] = r.seconds;
        return out;
      },
      py::arg("rgb"), py::arg("depth"), py::arg("camera"), py::arg("config") = "",
      py::arg("decomposition") = py::none());

  m.def(
      "light_rmse",
      [](const FloatArray& est, const FloatArray& gt, bool weighted) {
        return envlight::LightRmse(ToEnv(est), ToEnv(gt), weighted);
      },
      py::arg("est"), py::arg("gt"), py::arg("weighted") = false);

  m.def(
      "render_rmse",
      [](const FloatArray& est, const FloatArray& gt, const std::string& probes, int resolution) {
        envlight::ProbeSet set = probes == "diffuse" ? envlight::ProbeSet::DiffuseOnly(resolution)
                                                     : envlight::ProbeSet::Default(resolution);
        if (probes != "diffuse" && probes != "default") {
          throw envlight::ContractError("unknown probe set '" + probes + "'");
        }
        const LatLongMap e = ToEnv(est), g = ToEnv(gt);
        py::gil_scoped_release release;
        return envlight::RenderRmse(e, g, set);
      },
      py::arg("est"), py::arg("gt"), py::arg("probes") = "default", py::arg("resolution") = 64);

  m.def(
      "sh_project",
      [](const FloatArray& env, int order, bool clamp_negative) {
        const LatLongMap e = ToEnv(env);
        return FromImage(
            envlight::ShRender(envlight::ShFit(e, order), e.width(), e.height(), clamp_negative).image());
      },
      py::arg("env"), py::arg("order"), py::arg("clamp_negative") = false);

  m.def(
      "rotate_env", [](const FloatArray& env, double yaw) { return FromImage(envlight::RotateEnv(ToEnv(env), yaw).image()); },
      py::arg("env"), py::arg("yaw"));

  m.def(
      "read_pfm", [](const std::string& path) { return FromImage(envlight::ReadPfm(path)); }, py::arg("path"));
  m.def(
      "write_pfm", [](const std::string& path, const FloatArray& a) { envlight::WritePfm(path, ToImage(a, "image")); },
      py::arg("path"), py::arg("image"));
}
