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

#include "envlight/core.h"

namespace envlight {

Image::Image(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 0 || height < 0 || channels < 1) {
    throw ContractError("Image: invalid shape " + std::to_string(width) + "x" +
                        std::to_string(height) + "x" + std::to_string(channels));
  }
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

std::string ShapeString(const Image& image) {
  return std::to_string(image.width()) + "x" + std::to_string(image.height());
}

Image DownsampleArea(const Image& image, int out_width, int out_height) {
  if (out_width <= 0 || out_height <= 0 || image.width() % out_width != 0 ||
      image.height() % out_height != 0) {
    throw ContractError("DownsampleArea: " + ShapeString(image) + " is not an integer multiple of " +
                        std::to_string(out_width) + "x" + std::to_string(out_height));
  }
  const int fx = image.width() / out_width;
  const int fy = image.height() / out_height;
  const int nc = image.channels();
  Image out(out_width, out_height, nc);
  const double inv = 1.0 / (fx * fy);
  for (int y = 0; y < out_height; ++y) {
    for (int x = 0; x < out_width; ++x) {
      for (int c = 0; c < nc; ++c) {
        double sum = 0;
        for (int j = 0; j < fy; ++j)
          for (int i = 0; i < fx; ++i) sum += image.at(x * fx + i, y * fy + j, c);
        out.at(x, y, c) = static_cast<float>(sum * inv);
      }
    }
  }
  return out;
}

}  // namespace envlight
