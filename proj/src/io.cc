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

#include "envlight/io.h"

#include <png.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace envlight {

using nlohmann::json;

namespace {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

uint32_t ByteSwap(uint32_t v) {
  return (v >> 24) | ((v >> 8) & 0xFF00u) | ((v << 8) & 0xFF0000u) | (v << 24);
}

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  std::string Token() {
    while (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("PFM: truncated header", pos_);
    return std::string(bytes_.substr(start, pos_ - start));
  }
  int Int(const char* what) {
    const std::size_t at = Skip();
    const std::string t = Token();
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (*end != '\0' || v <= 0 || v > (1 << 20)) throw ParseError(std::string("PFM: bad ") + what + " '" + t + "'", at);
    return static_cast<int>(v);
  }
  double Scale() {
    const std::size_t at = Skip();
    const std::string t = Token();
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (*end != '\0' || !std::isfinite(v) || v == 0) throw ParseError("PFM: bad scale '" + t + "'", at);
    return v;
  }
  // The header ends with exactly one whitespace byte.
  std::size_t End() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw ParseError("PFM: header not terminated", pos_);
    }
    return pos_ + 1;
  }
  std::size_t pos() const { return pos_; }

 private:
  std::size_t Skip() {
    while (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    return pos_;
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

[[noreturn]] void SchemaError(const std::string& what) { throw ParseError(what, 0); }

void CheckSchema(const json& j, std::string_view schema) {
  if (!j.is_object()) SchemaError("expected a JSON object with schema " + std::string(schema));
  if (!j.contains("schema") || !j["schema"].is_string() || j["schema"].get<std::string>() != schema) {
    SchemaError("expected schema \"" + std::string(schema) + "\"");
  }
}

void CheckKeys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) SchemaError(where + ": unknown key \"" + it.key() + "\"");
  }
}

template <typename T>
T Get(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) SchemaError(where + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    SchemaError(where + ": bad \"" + key + "\": " + e.what());
  }
}

template <typename T>
void Maybe(const json& j, const char* key, T* out, const std::string& where) {
  if (j.contains(key)) *out = Get<T>(j, key, where);
}

json VecJson(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
Vec3 VecFrom(const json& j, const char* key, const std::string& where) {
  const auto a = Get<std::vector<double>>(j, key, where);
  if (a.size() != 3) SchemaError(where + ": \"" + key + "\" must have 3 entries");
  return {a[0], a[1], a[2]};
}
json RgbJson(const Rgb& c) { return json::array({c[0], c[1], c[2]}); }
Rgb RgbFrom(const json& j, const char* key, const std::string& where) {
  const auto a = Get<std::vector<float>>(j, key, where);
  if (a.size() != 3) SchemaError(where + ": \"" + key + "\" must have 3 entries");
  return {a[0], a[1], a[2]};
}

json MaterialJson(const Material& m) { return {{"rho_d", RgbJson(m.rho_d)}, {"rho_s", m.rho_s}, {"sigma", m.sigma}}; }
Material MaterialFrom(const json& j) {
  CheckKeys(j, {"rho_d", "rho_s", "sigma"}, "material");
  Material m;
  m.rho_d = RgbFrom(j, "rho_d", "material");
  m.rho_s = Get<double>(j, "rho_s", "material");
  m.sigma = Get<double>(j, "sigma", "material");
  return m;
}

std::filesystem::path Resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
  return p.is_absolute() || p.empty() ? p : base / p;
}

}  // namespace

// ---------------------------------------------------------------------------
// PFM

std::string EncodePfm(const Image& image) {
  if (image.channels() != 1 && image.channels() != 3) {
    throw ContractError("PFM stores 1 or 3 channels, got " + ShapeString(image));
  }
  std::string out = std::string(image.channels() == 3 ? "PF" : "Pf") + "\n" + std::to_string(image.width()) + " " +
                    std::to_string(image.height()) + "\n-1.0\n";
  const std::size_t row = static_cast<std::size_t>(image.width()) * image.channels();
  const std::size_t header = out.size();
  out.resize(header + row * image.height() * 4);
  const auto data = image.data();
  for (int y = 0; y < image.height(); ++y) {
    const float* src = data.data() + static_cast<std::size_t>(image.height() - 1 - y) * row;
    char* dst = out.data() + header + static_cast<std::size_t>(y) * row * 4;
    for (std::size_t i = 0; i < row; ++i) {
      uint32_t bits = std::bit_cast<uint32_t>(src[i]);
      if constexpr (std::endian::native == std::endian::big) bits = ByteSwap(bits);
      std::memcpy(dst + 4 * i, &bits, 4);
    }
  }
  return out;
}

Image DecodePfm(std::string_view bytes) {
  HeaderReader r(bytes);
  const std::string magic = r.Token();
  int channels;
  if (magic == "PF") {
    channels = 3;
  } else if (magic == "Pf") {
    channels = 1;
  } else {
    throw ParseError("PFM: bad magic '" + magic + "'", 0);
  }
  const int w = r.Int("width");
  const int h = r.Int("height");
  const double scale = r.Scale();
  const std::size_t start = r.End();
  const bool little = scale < 0;
  const std::size_t count = static_cast<std::size_t>(w) * h * channels;
  const std::size_t need = start + count * 4;
  if (bytes.size() < need) {
    throw ParseError("PFM: truncated payload, expected " + std::to_string(count * 4) + " bytes after the header", bytes.size());
  }
  if (bytes.size() > need) throw ParseError("PFM: trailing data after payload", need);
  Image image(w, h, channels);
  auto data = image.data();
  const std::size_t row = static_cast<std::size_t>(w) * channels;
  for (int y = 0; y < h; ++y) {
    float* dst = data.data() + static_cast<std::size_t>(h - 1 - y) * row;
    for (std::size_t i = 0; i < row; ++i) {
      const std::size_t at = start + (static_cast<std::size_t>(y) * row + i) * 4;
      uint32_t bits;
      std::memcpy(&bits, bytes.data() + at, 4);
      if ((std::endian::native == std::endian::little) != little) bits = ByteSwap(bits);
      const float v = std::bit_cast<float>(bits);
      if (!std::isfinite(v)) throw ParseError("PFM: non-finite value in payload", at);
      dst[i] = v;
    }
  }
  return image;
}

void WritePfm(const std::filesystem::path& path, const Image& image) {
  for (float v : image.data()) {
    if (!std::isfinite(v)) throw ContractError("WritePfm: non-finite value in " + path.string());
  }
  WriteFile(path, EncodePfm(image));
}

Image ReadPfm(const std::filesystem::path& path) {
  const std::string bytes = ReadFile(path);
  try {
    return DecodePfm(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.offset());
  }
}

LatLongMap ReadEnv(const std::filesystem::path& path) {
  Image image = ReadPfm(path);
  if (image.channels() != 3 || image.width() != 2 * image.height()) {
    throw ContractError(path.string() + ": expected a 2:1 RGB environment map, got " + ShapeString(image));
  }
  return LatLongMap(std::move(image));
}

// ---------------------------------------------------------------------------
// PNG

uint8_t EncodeGamma(float linear, double gamma) {
  const double v = std::clamp(static_cast<double>(linear), 0.0, 1.0);
  return static_cast<uint8_t>(std::lround(255.0 * std::pow(v, 1.0 / gamma)));
}

float DecodeGamma(uint8_t byte, double gamma) { return static_cast<float>(std::pow(byte / 255.0, gamma)); }

void WritePng(const std::filesystem::path& path, const Image& image, double gamma) {
  if (image.channels() != 1 && image.channels() != 3) {
    throw ContractError("WritePng: expected 1 or 3 channels, got " + ShapeString(image));
  }
  std::vector<uint8_t> bytes(image.data().size());
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = EncodeGamma(image.data()[i], gamma);
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = image.width();
  png.height = image.height();
  png.format = image.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&png, path.string().c_str(), 0, bytes.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw IoError("WritePng: " + path.string() + ": " + msg);
  }
}

Image ReadPng(const std::filesystem::path& path, double gamma) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.string().c_str())) {
    throw IoError("ReadPng: " + path.string() + ": " + png.message);
  }
  png.format = PNG_FORMAT_RGB;
  std::vector<uint8_t> bytes(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, bytes.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw IoError("ReadPng: " + path.string() + ": " + msg);
  }
  Image out(static_cast<int>(png.width), static_cast<int>(png.height), 3);
  auto data = out.data();
  for (std::size_t i = 0; i < bytes.size(); ++i) data[i] = DecodeGamma(bytes[i], gamma);
  return out;
}

// ---------------------------------------------------------------------------
// JSON

json CameraToJson(const Camera& camera) {
  const Intrinsics& k = camera.intrinsics;
  return {{"schema", kCameraSchema},
          {"intrinsics", {{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}, {"width", k.width}, {"height", k.height}}},
          {"position", VecJson(camera.position)},
          {"cam_to_world", camera.cam_to_world.m}};
}

Camera CameraFromJson(const json& j) {
  CheckSchema(j, kCameraSchema);
  CheckKeys(j, {"schema", "intrinsics", "position", "cam_to_world"}, "camera");
  Camera cam;
  const json& k = j.at("intrinsics");
  CheckKeys(k, {"fx", "fy", "cx", "cy", "width", "height"}, "intrinsics");
  cam.intrinsics.fx = Get<double>(k, "fx", "intrinsics");
  cam.intrinsics.fy = Get<double>(k, "fy", "intrinsics");
  cam.intrinsics.cx = Get<double>(k, "cx", "intrinsics");
  cam.intrinsics.cy = Get<double>(k, "cy", "intrinsics");
  cam.intrinsics.width = Get<int>(k, "width", "intrinsics");
  cam.intrinsics.height = Get<int>(k, "height", "intrinsics");
  cam.position = VecFrom(j, "position", "camera");
  const auto m = Get<std::vector<double>>(j, "cam_to_world", "camera");
  if (m.size() != 9) SchemaError("camera: \"cam_to_world\" must have 9 entries");
  std::copy(m.begin(), m.end(), cam.cam_to_world.m.begin());
  try {
    cam.intrinsics.Validate();
  } catch (const ContractError& e) {
    SchemaError(std::string("camera: ") + e.what());
  }
  return cam;
}

json SceneToJson(const SceneDesc& scene) {
  json prims = json::array();
  for (const Primitive& p : scene.primitives) {
    json jp;
    if (const auto* s = std::get_if<Sphere>(&p.shape)) {
      jp = {{"type", "sphere"}, {"center", VecJson(s->center)}, {"radius", s->radius}};
    } else if (const auto* b = std::get_if<Box>(&p.shape)) {
      jp = {{"type", "box"}, {"center", VecJson(b->center)}, {"half_extents", VecJson(b->half_extents)}, {"yaw", b->yaw}};
    } else {
      jp = {{"type", "plane"}, {"height", std::get<GroundPlane>(p.shape).height}};
    }
    jp["material"] = MaterialJson(p.material);
    if (p.checker) jp["checker"] = {{"alt_rho_d", RgbJson(p.checker->alt_rho_d)}, {"cell", p.checker->cell}};
    prims.push_back(std::move(jp));
  }
  json cam = CameraToJson(scene.camera);
  cam.erase("schema");
  return {{"schema", kSceneSchema}, {"camera", cam}, {"primitives", prims}};
}

SceneDesc SceneFromJson(const json& j) {
  CheckSchema(j, kSceneSchema);
  CheckKeys(j, {"schema", "camera", "primitives"}, "scene");
  SceneDesc scene;
  if (!j.contains("camera")) SchemaError("scene: missing \"camera\"");
  json cam = j.at("camera");
  cam["schema"] = kCameraSchema;
  scene.camera = CameraFromJson(cam);
  if (!j.contains("primitives") || !j.at("primitives").is_array()) SchemaError("scene: missing \"primitives\" array");
  for (const json& jp : j.at("primitives")) {
    Primitive p;
    const std::string type = Get<std::string>(jp, "type", "primitive");
    if (type == "sphere") {
      CheckKeys(jp, {"type", "center", "radius", "material", "checker"}, "sphere");
      p.shape = Sphere{VecFrom(jp, "center", "sphere"), Get<double>(jp, "radius", "sphere")};
    } else if (type == "box") {
      CheckKeys(jp, {"type", "center", "half_extents", "yaw", "material", "checker"}, "box");
      p.shape = Box{VecFrom(jp, "center", "box"), VecFrom(jp, "half_extents", "box"), Get<double>(jp, "yaw", "box")};
    } else if (type == "plane") {
      CheckKeys(jp, {"type", "height", "material", "checker"}, "plane");
      p.shape = GroundPlane{Get<double>(jp, "height", "plane")};
    } else {
      SchemaError("scene: unknown primitive type \"" + type + "\"");
    }
    if (!jp.contains("material")) SchemaError("primitive: missing \"material\"");
    p.material = MaterialFrom(jp.at("material"));
    if (jp.contains("checker")) {
      const json& c = jp.at("checker");
      CheckKeys(c, {"alt_rho_d", "cell"}, "checker");
      p.checker = Checker{RgbFrom(c, "alt_rho_d", "checker"), Get<double>(c, "cell", "checker")};
    }
    scene.primitives.push_back(std::move(p));
  }
  try {
    scene.Validate();
  } catch (const ContractError& e) {
    SchemaError(std::string("scene: ") + e.what());
  }
  return scene;
}

json ConfigToJson(const RunConfig& c) {
  // Infinite thickness is written as null.
  json thickness = std::isfinite(c.visibility.thickness) ? json(c.visibility.thickness) : json(nullptr);
  return {{"schema", kConfigSchema},
          {"seed", c.seed},
          {"crop", c.crop},
          {"cube_face_res", c.cube_face_res},
          {"irradiance_res", c.irradiance_res},
          {"env_width", c.env_width},
          {"env_height", c.env_height},
          {"stack_supersample", c.stack_supersample},
          {"bilateral_sigma_space", c.bilateral_sigma_space},
          {"bilateral_sigma_range", c.bilateral_sigma_range},
          {"visibility",
           {{"step_pixels", c.visibility.step_pixels},
            {"normal_offset", c.visibility.normal_offset},
            {"depth_bias", c.visibility.depth_bias},
            {"thickness", thickness}}},
          {"solver",
           {{"lambda", c.solver.lambda}, {"max_iter", c.solver.max_iter}, {"tol", c.solver.tol}, {"nonneg", c.solver.nonneg}}},
          {"fusion",
           {{"spec_weight_at_full_count", c.fusion.spec_weight_at_full_count},
            {"count_saturation", c.fusion.count_saturation},
            {"splat_sigma_deg", c.fusion.splat_sigma_deg},
            {"gain_fit", c.fusion.gain_fit},
            {"gain_fit_sigma_deg", c.fusion.gain_fit_sigma_deg}}},
          {"alpha", c.alpha}};
}

RunConfig ConfigFromJson(const json& j) {
  CheckSchema(j, kConfigSchema);
  CheckKeys(j,
            {"schema", "seed", "crop", "cube_face_res", "irradiance_res", "env_width", "env_height",
             "stack_supersample", "bilateral_sigma_space", "bilateral_sigma_range", "visibility", "solver", "fusion",
             "alpha"},
            "config");
  RunConfig c;
  Maybe(j, "seed", &c.seed, "config");
  Maybe(j, "crop", &c.crop, "config");
  Maybe(j, "cube_face_res", &c.cube_face_res, "config");
  Maybe(j, "irradiance_res", &c.irradiance_res, "config");
  Maybe(j, "env_width", &c.env_width, "config");
  Maybe(j, "env_height", &c.env_height, "config");
  Maybe(j, "stack_supersample", &c.stack_supersample, "config");
  Maybe(j, "bilateral_sigma_space", &c.bilateral_sigma_space, "config");
  Maybe(j, "bilateral_sigma_range", &c.bilateral_sigma_range, "config");
  Maybe(j, "alpha", &c.alpha, "config");
  if (j.contains("visibility")) {
    const json& v = j.at("visibility");
    CheckKeys(v, {"step_pixels", "normal_offset", "depth_bias", "thickness"}, "visibility");
    Maybe(v, "step_pixels", &c.visibility.step_pixels, "visibility");
    Maybe(v, "normal_offset", &c.visibility.normal_offset, "visibility");
    Maybe(v, "depth_bias", &c.visibility.depth_bias, "visibility");
    if (v.contains("thickness")) {
      c.visibility.thickness =
          v.at("thickness").is_null() ? std::numeric_limits<double>::infinity() : Get<double>(v, "thickness", "visibility");
    }
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    CheckKeys(s, {"lambda", "max_iter", "tol", "nonneg"}, "solver");
    Maybe(s, "lambda", &c.solver.lambda, "solver");
    Maybe(s, "max_iter", &c.solver.max_iter, "solver");
    Maybe(s, "tol", &c.solver.tol, "solver");
    Maybe(s, "nonneg", &c.solver.nonneg, "solver");
  }
  if (j.contains("fusion")) {
    const json& f = j.at("fusion");
    CheckKeys(f, {"spec_weight_at_full_count", "count_saturation", "splat_sigma_deg", "gain_fit", "gain_fit_sigma_deg"},
              "fusion");
    Maybe(f, "spec_weight_at_full_count", &c.fusion.spec_weight_at_full_count, "fusion");
    Maybe(f, "count_saturation", &c.fusion.count_saturation, "fusion");
    Maybe(f, "splat_sigma_deg", &c.fusion.splat_sigma_deg, "fusion");
    Maybe(f, "gain_fit", &c.fusion.gain_fit, "fusion");
    Maybe(f, "gain_fit_sigma_deg", &c.fusion.gain_fit_sigma_deg, "fusion");
  }
  try {
    c.Validate();
  } catch (const ContractError& e) {
    SchemaError(std::string("config: ") + e.what());
  }
  return c;
}

json ReadJson(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": malformed JSON", e.byte);
  }
}

void WriteJson(const std::filesystem::path& path, const json& j) { WriteFile(path, j.dump(2) + "\n"); }

std::vector<ManifestFrame> ReadManifest(const std::filesystem::path& path) {
  const json j = ReadJson(path);
  CheckSchema(j, kFramesSchema);
  CheckKeys(j, {"schema", "frames"}, "manifest");
  if (!j.contains("frames") || !j.at("frames").is_array() || j.at("frames").empty()) {
    SchemaError("manifest: \"frames\" must be a non-empty array");
  }
  const std::filesystem::path base = path.parent_path();
  std::vector<ManifestFrame> frames;
  for (const json& f : j.at("frames")) {
    CheckKeys(f, {"index", "rgb", "depth", "camera", "yaw_to_world", "gt_prefix"}, "frame");
    ManifestFrame m;
    m.index = Get<int>(f, "index", "frame");
    m.rgb = Resolve(base, Get<std::string>(f, "rgb", "frame"));
    m.depth = Resolve(base, Get<std::string>(f, "depth", "frame"));
    m.camera = Resolve(base, Get<std::string>(f, "camera", "frame"));
    Maybe(f, "yaw_to_world", &m.yaw_to_world, "frame");
    if (f.contains("gt_prefix")) m.gt_prefix = Resolve(base, Get<std::string>(f, "gt_prefix", "frame"));
    if (!frames.empty() && m.index <= frames.back().index) SchemaError("manifest: frame indices must increase");
    frames.push_back(std::move(m));
  }
  return frames;
}

void WriteManifest(const std::filesystem::path& path, const std::vector<ManifestFrame>& frames) {
  json arr = json::array();
  for (const ManifestFrame& f : frames) {
    json jf = {{"index", f.index},
               {"rgb", f.rgb.string()},
               {"depth", f.depth.string()},
               {"camera", f.camera.string()},
               {"yaw_to_world", f.yaw_to_world}};
    if (!f.gt_prefix.empty()) jf["gt_prefix"] = f.gt_prefix.string();
    arr.push_back(std::move(jf));
  }
  WriteJson(path, {{"schema", kFramesSchema}, {"frames", arr}});
}

void WriteDecomposition(const std::string& prefix, const Decomposition& d) {
  WritePfm(prefix + "albedo.pfm", d.albedo);
  WritePfm(prefix + "diffuse.pfm", d.diffuse);
  WritePfm(prefix + "specular.pfm", d.specular);
  Image normals(d.width(), d.height(), 3);
  Image mask(d.width(), d.height(), 1);
  for (int y = 0; y < d.height(); ++y) {
    for (int x = 0; x < d.width(); ++x) {
      mask.at(x, y) = d.valid(x, y) ? 1.0f : 0.0f;
      if (!d.normals.is_valid(x, y)) continue;
      for (int c = 0; c < 3; ++c) normals.at(x, y, c) = d.normals.normals.at(x, y, c);
    }
  }
  WritePfm(prefix + "normals.pfm", normals);
  WritePfm(prefix + "mask.pfm", mask);
}

Decomposition ReadDecomposition(const std::string& prefix) {
  Decomposition d;
  d.albedo = ReadPfm(prefix + "albedo.pfm");
  d.diffuse = ReadPfm(prefix + "diffuse.pfm");
  d.specular = ReadPfm(prefix + "specular.pfm");
  const Image normals = ReadPfm(prefix + "normals.pfm");
  const Image mask = ReadPfm(prefix + "mask.pfm");
  if (!d.diffuse.SameShape(d.albedo) || !d.specular.SameShape(d.albedo) || !normals.SameShape(d.albedo) ||
      mask.width() != d.width() || mask.height() != d.height() || d.albedo.channels() != 3 || mask.channels() != 1) {
    throw ContractError("ReadDecomposition: factor shapes disagree under " + prefix);
  }
  d.normals = NormalMap(d.width(), d.height());
  d.mask.assign(static_cast<std::size_t>(d.width()) * d.height(), 0);
  for (int y = 0; y < d.height(); ++y) {
    for (int x = 0; x < d.width(); ++x) {
      d.mask[static_cast<std::size_t>(y) * d.width() + x] = mask.at(x, y) > 0.5f ? 1 : 0;
      const Vec3 n{normals.at(x, y, 0), normals.at(x, y, 1), normals.at(x, y, 2)};
      if (Dot(n, n) > 0) d.normals.set(x, y, n);
    }
  }
  return d;
}

DepthFrame ReadDepthFrame(const std::filesystem::path& depth, const Camera& camera) {
  Image d = ReadPfm(depth);
  if (d.channels() != 1) throw ContractError(depth.string() + ": depth must be single channel");
  if (d.width() != camera.intrinsics.width || d.height() != camera.intrinsics.height) {
    throw ContractError(depth.string() + ": depth " + ShapeString(d) + " does not match camera " +
                        std::to_string(camera.intrinsics.width) + "x" + std::to_string(camera.intrinsics.height));
  }
  return DepthFrame(camera.intrinsics, std::move(d));
}

}  // namespace envlight
