// Copyright 2026 The atrc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ATRC_IMAGE_HPP_
#define ATRC_IMAGE_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace atrc {

// Row-major 8-bit grayscale image.
struct GrayImage {
  int h = 0;
  int w = 0;
  std::vector<std::uint8_t> px;

  GrayImage() = default;
  GrayImage(int h_, int w_, std::uint8_t fill = 0)
      : h(h_), w(w_), px(static_cast<std::size_t>(h_) * w_, fill) {}

  std::uint8_t& at(int y, int x) { return px[static_cast<std::size_t>(y) * w + x]; }
  std::uint8_t at(int y, int x) const { return px[static_cast<std::size_t>(y) * w + x]; }
};

// Floating-point working layer: gray in [0, 255], alpha in [0, 1].
struct Layer {
  int h = 0;
  int w = 0;
  std::vector<double> gray;
  std::vector<double> alpha;

  Layer() = default;
  Layer(int h_, int w_)
      : h(h_), w(w_),
        gray(static_cast<std::size_t>(h_) * w_, 0.0),
        alpha(static_cast<std::size_t>(h_) * w_, 0.0) {}

  std::size_t idx(int y, int x) const { return static_cast<std::size_t>(y) * w + x; }
};

// Binary PGM (P5), maxval 255.
void write_pgm(const std::string& path, const GrayImage& img);
GrayImage read_pgm(const std::string& path);
// Structural validation used by the resumable corpus builder.
bool is_valid_pgm(const std::string& path);

std::uint8_t quantize_gray(double v);  // clamp to [0,255], round half up

GrayImage resize_bilinear(const GrayImage& img, int out_h, int out_w);
Layer resize_bilinear(const Layer& img, int out_h, int out_w);

// 3x3 binomial smoothing, used as the anti-aliasing stage after rasterization.
Layer blur3(const Layer& img);
GrayImage blur3(const GrayImage& img);

}  // namespace atrc

#endif  // ATRC_IMAGE_HPP_
