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

#include "envlight/decompose.h"

#include <algorithm>

#include "envlight/forward.h"

namespace envlight {

namespace {

Image CropImage(const Image& image, int x0, int y0, int w, int h) {
  Image out(w, h, image.channels());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < image.channels(); ++c) out.at(x, y, c) = image.at(x0 + x, y0 + y, c);
  return out;
}

double Median(std::vector<double>& values) {
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double m = values[mid];
  if (values.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(values.begin(), values.begin() + mid));
  }
  return m;
}

// HSV hue in [0, 1) of a non-negative colour with at least one zero channel.
double Hue(double r, double g, double b) {
  const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
  const double d = mx - mn;
  if (d <= 0) return 0;
  double h;
  if (mx == r) {
    h = (g - b) / d;
  } else if (mx == g) {
    h = 2.0 + (b - r) / d;
  } else {
    h = 4.0 + (r - g) / d;
  }
  h /= 6.0;
  return h < 0 ? h + 1.0 : h;
}

}  // namespace

Image Decomposition::Reconstruct() const {
  Image out(width(), height(), 3);
  for (int y = 0; y < height(); ++y)
    for (int x = 0; x < width(); ++x)
      for (int c = 0; c < 3; ++c)
        out.at(x, y, c) = albedo.at(x, y, c) * diffuse.at(x, y, c) + specular.at(x, y, c);
  return out;
}

Decomposition Decomposition::Cropped(int x0, int y0, int w, int h) const {
  if (x0 < 0 || y0 < 0 || x0 + w > width() || y0 + h > height()) {
    throw ContractError("Decomposition::Cropped: window outside the image");
  }
  Decomposition out;
  out.albedo = CropImage(albedo, x0, y0, w, h);
  out.diffuse = CropImage(diffuse, x0, y0, w, h);
  out.specular = CropImage(specular, x0, y0, w, h);
  out.normals.normals = CropImage(normals.normals, x0, y0, w, h);
  out.normals.valid.resize(static_cast<std::size_t>(w) * h);
  out.mask.resize(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t src = static_cast<std::size_t>(y0 + y) * width() + x0 + x;
      out.normals.valid[static_cast<std::size_t>(y) * w + x] = normals.valid[src];
      out.mask[static_cast<std::size_t>(y) * w + x] = mask[src];
    }
  }
  return out;
}

Decomposition DecomposeGt(const RenderResult& render) { return render.gt; }

DichromaticResult DecomposeDichromatic(const Image& rgb, const NormalMap& normals,
                                       const DichromaticOptions& options) {
  if (rgb.channels() != 3) throw ContractError("DecomposeDichromatic: expected an RGB image");
  if (normals.width() != rgb.width() || normals.height() != rgb.height()) {
    throw ContractError("DecomposeDichromatic: normal map " + ShapeString(normals.normals) +
                        " does not match image " + ShapeString(rgb));
  }
  const int w = rgb.width(), h = rgb.height();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  double peak = 0;
  for (float v : rgb.data()) {
    if (!std::isfinite(v) || v < 0) throw ContractError("DecomposeDichromatic: negative or non-finite input");
    peak = std::max(peak, static_cast<double>(v));
  }
  if (peak <= 0) throw ContractError("DecomposeDichromatic: all-black input has no chromaticity evidence");

  std::vector<double> maxima;
  maxima.reserve(n);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double mx = std::max({rgb.at(x, y, 0), rgb.at(x, y, 1), rgb.at(x, y, 2)});
      if (mx > 0) maxima.push_back(mx);
    }
  const double chroma_floor = options.neutral_chroma * Median(maxima);

  const int neutral = options.hue_bins;
  std::vector<int> cluster(n, -1);
  std::vector<std::array<std::vector<double>, 3>> members(options.hue_bins + 1);

  // Pass 1: cluster assignment by specular-free hue.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double r = rgb.at(x, y, 0), g = rgb.at(x, y, 1), b = rgb.at(x, y, 2);
      const double sum = r + g + b;
      if (sum <= 0) continue;
      const double mn = std::min({r, g, b}), mx = std::max({r, g, b});
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      int k = neutral;
      if (mx - mn >= chroma_floor && mx > mn) {
        k = std::min(static_cast<int>(Hue(r - mn, g - mn, b - mn) * options.hue_bins), options.hue_bins - 1);
      }
      cluster[i] = k;
      members[k][0].push_back(r / sum);
      members[k][1].push_back(g / sum);
      members[k][2].push_back(b / sum);
    }
  }

  // Pass 2: per-cluster diffuse chromaticity.
  std::vector<std::array<double, 3>> chroma(options.hue_bins + 1, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  for (int k = 0; k < options.hue_bins; ++k) {
    if (members[k][0].empty()) continue;
    std::array<double, 3> m;
    for (int c = 0; c < 3; ++c) m[c] = Median(members[k][c]);
    const double s = m[0] + m[1] + m[2];
    if (s > 0)
      for (int c = 0; c < 3; ++c) chroma[k][c] = m[c] / s;
  }

  DichromaticResult result;
  Decomposition& d = result.decomposition;
  d.albedo = Image(w, h, 3);
  d.diffuse = Image(w, h, 3);
  d.specular = Image(w, h, 3);
  d.normals = normals;
  d.mask.assign(n, 0);
  double residual = 0, total = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const int k = cluster[i];
      if (k < 0) continue;
      const std::array<double, 3> px = {rgb.at(x, y, 0), rgb.at(x, y, 1), rgb.at(x, y, 2)};
      const auto& lam = chroma[k];
      const double mn = std::min({px[0], px[1], px[2]});

      // Least squares for rgb ~ D * chroma + s * (1, 1, 1) with D, s >= 0.
      double s = 0;
      if (k != neutral) {
        const double ll = lam[0] * lam[0] + lam[1] * lam[1] + lam[2] * lam[2];
        const double lp = lam[0] * px[0] + lam[1] * px[1] + lam[2] * px[2];
        const double sp = px[0] + px[1] + px[2];
        const double det = 3.0 * ll - 1.0;  // sum(chroma) == 1
        if (det > 1e-12) s = (ll * sp - lp) / det;
        s = std::clamp(s, 0.0, mn);
      }
      const double amax = std::max({lam[0], lam[1], lam[2]});
      bool guarded = false;
      for (int c = 0; c < 3; ++c) {
        const double a = lam[c] / amax;
        const double diffuse_part = px[c] - s;
        d.albedo.at(x, y, c) = static_cast<float>(a);
        d.specular.at(x, y, c) = static_cast<float>(s);
        if (a < options.albedo_guard) {
          guarded = true;
          continue;
        }
        d.diffuse.at(x, y, c) = static_cast<float>(std::max(0.0, diffuse_part) / a);
        const double recon = static_cast<double>(d.albedo.at(x, y, c)) * d.diffuse.at(x, y, c) + d.specular.at(x, y, c);
        residual += std::abs(recon - px[c]);
      }
      for (int c = 0; c < 3; ++c) total += px[c];
      d.mask[i] = guarded ? 0 : 1;
    }
  }
  result.relative_residual = total > 0 ? residual / total : 0;
  return result;
}

}  // namespace envlight
