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

#ifndef ATRC_RENDER_HPP_
#define ATRC_RENDER_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "atrc/atlas.hpp"
#include "atrc/homography.hpp"
#include "atrc/image.hpp"
#include "atrc/rng.hpp"
#include "atrc/shaper.hpp"

namespace atrc {

enum class Mode { Scene, Video };

const char* mode_name(Mode m);
Mode parse_mode(std::string_view s);  // throws ConfigError

struct RenderStyle {
  int glyph_scale = 24;      // px, glyph cell height
  int stroke_thickness = 2;  // px
  int kerning = 2;           // px between glyph cells
  double skew = 0.0;         // horizontal shear factor
  double rotation = 0.0;     // radians
  int fg_gray = 0;
  int bg_gray = 255;
  double mix_weight = 1.0;   // weight of the flat stroke color vs the blend crop

  void validate(Mode mode) const;  // throws ConfigError on violated bounds
};

// Randomization ranges for style sampling; overridable from a key=value
// config file. Angles are degrees in the file, radians in RenderStyle.
struct StyleRanges {
  double rotation_max_deg = 7.0;
  double skew_max = 0.3;
  int stroke_min = 1;
  int stroke_max = 3;
  double mix_min = 0.6;
  double mix_max = 1.0;
  int scale_min = 20;
  int scale_max = 28;
  int kerning_min = 0;
  int kerning_max = 4;
  double corner_jitter = 0.10;  // perspective corner jitter, fraction of each dimension
  int min_contrast = 40;        // required |fg - bg| separation

  static StyleRanges from_kv(const std::map<std::string, std::string>& kv);
};

struct LabeledImage {
  GrayImage pixels;    // height 32 after the final resize
  std::string label;   // UTF-8, logical order, normalized
  std::uint64_t seed = 0;
  Mode mode = Mode::Scene;
};

// Lays out shaped glyphs right-to-left on a shared baseline, draws joining
// strokes between connected neighbours, and crops to ink + 2 px margin.
// Gray is the flat stroke color, alpha is binary coverage.
Layer rasterize(const std::vector<shaper::ShapedGlyph>& glyphs, const RenderStyle& style,
                const GlyphRasterizer& atlas);

// Inverse-mapped bilinear sampling; pixels that fall outside the source stay
// fully transparent. Output has the same dimensions as the input unless
// given explicitly.
Layer perspective_warp(const Layer& img, const Homography& h);
Layer perspective_warp(const Layer& img, const Homography& h, int out_h, int out_w);

// out = alpha * (w*fg + (1-w)*blend) + (1-alpha) * bg, clamped to [0, 255].
GrayImage compose_scene(const Layer& fg, const GrayImage& blend_crop,
                        const GrayImage& bg_crop, double mix_weight);

// Background/blend crop provider. `center`/`amplitude` are a tonal hint for
// procedural sources; sources backed by real images may ignore them.
class TextureSource {
 public:
  virtual ~TextureSource() = default;
  virtual GrayImage crop(int h, int w, Rng& rng, int center, int amplitude) const = 0;
};

// Seeded two-octave value noise. Keeps the renderer hermetic when no natural
// image directory is supplied.
class NoiseTextures final : public TextureSource {
 public:
  GrayImage crop(int h, int w, Rng& rng, int center, int amplitude) const override;
};

// Random crops from PGM files found in a directory (sorted by name so the
// choice depends only on the seed).
class DirectoryTextures final : public TextureSource {
 public:
  explicit DirectoryTextures(const std::string& dir);
  GrayImage crop(int h, int w, Rng& rng, int center, int amplitude) const override;

 private:
  std::vector<std::string> paths_;
};

class Renderer {
 public:
  Renderer();  // procedural atlas + noise textures, default ranges
  Renderer(StyleRanges ranges, const GlyphRasterizer* atlas, const TextureSource* textures);

  // Deterministic in (label, mode, seed): byte-identical pixels across runs
  // and platforms with the built-in atlas and noise textures.
  LabeledImage render(std::string_view label_utf8, Mode mode, std::uint64_t seed) const;

  RenderStyle sample_style(Mode mode, Rng& rng) const;
  const StyleRanges& ranges() const { return ranges_; }

 private:
  StyleRanges ranges_;
  const GlyphRasterizer* atlas_;
  const TextureSource* textures_;
};

// Polynomial sin/cos for the small angles used in layout; keeps rendering
// free of libm so outputs are bit-identical across platforms.
double det_sin(double x);
double det_cos(double x);

}  // namespace atrc

#endif  // ATRC_RENDER_HPP_
