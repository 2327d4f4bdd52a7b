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

#include "atrc/render.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "atrc/error.hpp"
#include "atrc/unicode.hpp"

namespace atrc {

namespace {

constexpr double kPi = 3.14159265358979323846;

int iround(double v) { return static_cast<int>(std::floor(v + 0.5)); }

using shaper::PresentationForm;
using shaper::ShapedGlyph;

bool joins_next(PresentationForm f) {
  return f == PresentationForm::Initial || f == PresentationForm::Medial;
}

}  // namespace

double det_sin(double x) {
  // Taylor to x^11; |x| stays below ~0.45 rad in this pipeline, where the
  // truncation error is under 1e-12.
  double x2 = x * x;
  return x * (1.0 + x2 * (-1.0 / 6 + x2 * (1.0 / 120 + x2 * (-1.0 / 5040 +
             x2 * (1.0 / 362880 - x2 / 39916800.0)))));
}

double det_cos(double x) {
  double x2 = x * x;
  return 1.0 + x2 * (-0.5 + x2 * (1.0 / 24 + x2 * (-1.0 / 720 + x2 * (1.0 / 40320 -
             x2 / 3628800.0))));
}

const char* mode_name(Mode m) { return m == Mode::Scene ? "scene" : "video"; }

Mode parse_mode(std::string_view s) {
  if (s == "scene") return Mode::Scene;
  if (s == "video") return Mode::Video;
  throw ConfigError("unknown mode '" + std::string(s) + "' (expected scene or video)");
}

void RenderStyle::validate(Mode mode) const {
  if (glyph_scale <= 0) throw ConfigError("glyph_scale must be positive");
  if (std::abs(rotation) > 15.0 * kPi / 180.0 + 1e-12)
    throw ConfigError("rotation exceeds 15 degrees");
  if (std::abs(skew) > 0.5 + 1e-12) throw ConfigError("skew exceeds 0.5");
  if (fg_gray < 0 || fg_gray > 255 || bg_gray < 0 || bg_gray > 255)
    throw ConfigError("gray levels must lie in [0, 255]");
  if (mode == Mode::Video && std::abs(fg_gray - bg_gray) < 40)
    throw ConfigError("video mode needs fg/bg gray separation of at least 40");
}

namespace {

double kv_double(const std::map<std::string, std::string>& kv, const std::string& key,
                 double dflt) {
  auto it = kv.find(key);
  if (it == kv.end()) return dflt;
  try {
    return std::stod(it->second);
  } catch (...) {
    throw ConfigError("bad numeric value for " + key + ": " + it->second);
  }
}

int kv_int(const std::map<std::string, std::string>& kv, const std::string& key, int dflt) {
  auto it = kv.find(key);
  if (it == kv.end()) return dflt;
  try {
    return std::stoi(it->second);
  } catch (...) {
    throw ConfigError("bad integer value for " + key + ": " + it->second);
  }
}

}  // namespace

StyleRanges StyleRanges::from_kv(const std::map<std::string, std::string>& kv) {
  StyleRanges r;
  r.rotation_max_deg = kv_double(kv, "rotation_max_deg", r.rotation_max_deg);
  r.skew_max = kv_double(kv, "skew_max", r.skew_max);
  r.stroke_min = kv_int(kv, "stroke_min", r.stroke_min);
  r.stroke_max = kv_int(kv, "stroke_max", r.stroke_max);
  r.mix_min = kv_double(kv, "mix_min", r.mix_min);
  r.mix_max = kv_double(kv, "mix_max", r.mix_max);
  r.scale_min = kv_int(kv, "scale_min", r.scale_min);
  r.scale_max = kv_int(kv, "scale_max", r.scale_max);
  r.kerning_min = kv_int(kv, "kerning_min", r.kerning_min);
  r.kerning_max = kv_int(kv, "kerning_max", r.kerning_max);
  r.corner_jitter = kv_double(kv, "corner_jitter", r.corner_jitter);
  r.min_contrast = kv_int(kv, "min_contrast", r.min_contrast);
  if (r.stroke_min < 1 || r.stroke_max < r.stroke_min)
    throw ConfigError("invalid stroke thickness range");
  if (r.rotation_max_deg < 0 || r.rotation_max_deg > 15)
    throw ConfigError("rotation_max_deg must lie in [0, 15]");
  if (r.skew_max < 0 || r.skew_max > 0.5) throw ConfigError("skew_max must lie in [0, 0.5]");
  if (r.corner_jitter < 0 || r.corner_jitter > 0.25)
    throw ConfigError("corner_jitter must lie in [0, 0.25]");
  return r;
}

Layer rasterize(const std::vector<ShapedGlyph>& glyphs, const RenderStyle& style,
                const GlyphRasterizer& atlas) {
  if (glyphs.empty()) throw DataError("nothing to draw: empty glyph sequence");

  std::vector<GlyphBitmap> bitmaps;
  bitmaps.reserve(glyphs.size());
  for (const ShapedGlyph& g : glyphs)
    bitmaps.push_back(atlas.glyph(g, style.glyph_scale, style.stroke_thickness));

  int total_w = 0;
  int max_h = 0;
  int max_baseline = 0;
  for (const GlyphBitmap& bm : bitmaps) {
    total_w += bm.w + style.kerning;
    max_h = std::max(max_h, bm.h);
    max_baseline = std::max(max_baseline, bm.baseline);
  }
  total_w = std::max(1, total_w - style.kerning);

  Layer canvas(max_h + 4, total_w);
  const int base_y = max_baseline;

  // Logical order maps to visual right-to-left: the first glyph is placed at
  // the right edge and the cursor advances leftwards.
  int x_right = total_w;
  struct Placed {
    int x0, x1;
  };
  std::vector<Placed> placed(bitmaps.size());
  for (std::size_t i = 0; i < bitmaps.size(); ++i) {
    const GlyphBitmap& bm = bitmaps[i];
    int x0 = x_right - bm.w;
    int y0 = base_y - bm.baseline;
    for (int y = 0; y < bm.h; ++y) {
      for (int x = 0; x < bm.w; ++x) {
        if (bm.at(y, x) > 0.0) {
          int cy = y0 + y, cx = x0 + x;
          if (cy >= 0 && cy < canvas.h && cx >= 0 && cx < canvas.w) {
            canvas.alpha[canvas.idx(cy, cx)] = 1.0;
          }
        }
      }
    }
    placed[i] = {x0, x_right};
    x_right = x0 - style.kerning;
  }

  // Baseline connector across the kerning gap for joined pairs. Glyph i+1
  // sits to the left of glyph i.
  for (std::size_t i = 0; i + 1 < glyphs.size(); ++i) {
    if (!joins_next(glyphs[i].form)) continue;
    int gap_x0 = placed[i + 1].x1 - 1;
    int gap_x1 = placed[i].x0 + 1;
    for (int y = base_y; y < std::min(canvas.h, base_y + style.stroke_thickness); ++y) {
      for (int x = std::max(0, gap_x0); x < std::min(canvas.w, gap_x1); ++x) {
        canvas.alpha[canvas.idx(y, x)] = 1.0;
      }
    }
  }

  // Tight crop to ink plus a 2 px margin.
  int min_x = canvas.w, max_x = -1, min_y = canvas.h, max_y = -1;
  for (int y = 0; y < canvas.h; ++y) {
    for (int x = 0; x < canvas.w; ++x) {
      if (canvas.alpha[canvas.idx(y, x)] > 0.0) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
      }
    }
  }
  if (max_x < 0) throw DataError("nothing to draw: glyph sequence has no ink");

  const int margin = 2;
  Layer out(max_y - min_y + 1 + 2 * margin, max_x - min_x + 1 + 2 * margin);
  for (int y = min_y; y <= max_y; ++y) {
    for (int x = min_x; x <= max_x; ++x) {
      double a = canvas.alpha[canvas.idx(y, x)];
      std::size_t di = out.idx(y - min_y + margin, x - min_x + margin);
      out.alpha[di] = a;
      if (a > 0.0) out.gray[di] = style.fg_gray;
    }
  }
  return out;
}

Layer perspective_warp(const Layer& img, const Homography& h) {
  return perspective_warp(img, h, img.h, img.w);
}

Layer perspective_warp(const Layer& img, const Homography& h, int out_h, int out_w) {
  if (!h.invertible()) throw NumericError("homography is near-singular");
  if (img.h <= 0 || img.w <= 0) throw DataError("cannot warp an empty layer");
  Homography inv = h.inverse();
  Layer out(out_h, out_w);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      Point2 s = inv.apply({static_cast<double>(x), static_cast<double>(y)});
      if (s.x < 0 || s.y < 0 || s.x > img.w - 1 || s.y > img.h - 1) continue;
      int x0 = static_cast<int>(s.x);
      int y0 = static_cast<int>(s.y);
      int x1 = std::min(x0 + 1, img.w - 1);
      int y1 = std::min(y0 + 1, img.h - 1);
      double fx = s.x - x0, fy = s.y - y0;
      std::size_t di = out.idx(y, x);
      auto lerp2 = [&](const std::vector<double>& p) {
        return p[img.idx(y0, x0)] * (1 - fy) * (1 - fx) +
               p[img.idx(y0, x1)] * (1 - fy) * fx + p[img.idx(y1, x0)] * fy * (1 - fx) +
               p[img.idx(y1, x1)] * fy * fx;
      };
      out.gray[di] = lerp2(img.gray);
      out.alpha[di] = lerp2(img.alpha);
    }
  }
  return out;
}

GrayImage compose_scene(const Layer& fg, const GrayImage& blend_crop,
                        const GrayImage& bg_crop, double mix_weight) {
  if (blend_crop.h != fg.h || blend_crop.w != fg.w || bg_crop.h != fg.h ||
      bg_crop.w != fg.w) {
    throw DataError("compose_scene dimension mismatch: fg " + std::to_string(fg.h) + "x" +
                    std::to_string(fg.w) + ", blend " + std::to_string(blend_crop.h) +
                    "x" + std::to_string(blend_crop.w) + ", bg " +
                    std::to_string(bg_crop.h) + "x" + std::to_string(bg_crop.w));
  }
  if (mix_weight < 0.0 || mix_weight > 1.0)
    throw ConfigError("mix weight must lie in [0, 1]");
  GrayImage out(fg.h, fg.w);
  for (int y = 0; y < fg.h; ++y) {
    for (int x = 0; x < fg.w; ++x) {
      std::size_t i = fg.idx(y, x);
      double a = fg.alpha[i];
      double ink = mix_weight * fg.gray[i] + (1.0 - mix_weight) * blend_crop.at(y, x);
      double v = a * ink + (1.0 - a) * bg_crop.at(y, x);
      out.at(y, x) = quantize_gray(v);
    }
  }
  return out;
}

GrayImage NoiseTextures::crop(int h, int w, Rng& rng, int center, int amplitude) const {
  if (h <= 0 || w <= 0) throw DataError("noise crop must have positive dimensions");
  std::uint64_t base = rng.next_u64();
  auto lattice = [&](std::uint64_t octave, int cy, int cx) {
    std::uint64_t v = hash_combine(base + octave * 0x9E37u,
                                   (static_cast<std::uint64_t>(cy) << 32) ^
                                       static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)));
    return static_cast<double>(v >> 11) * 0x1.0p-53;
  };
  auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };
  auto value_noise = [&](std::uint64_t octave, double cell, int y, int x) {
    double fy = y / cell, fx = x / cell;
    int y0 = static_cast<int>(std::floor(fy)), x0 = static_cast<int>(std::floor(fx));
    double ty = smooth(fy - y0), tx = smooth(fx - x0);
    double v00 = lattice(octave, y0, x0), v01 = lattice(octave, y0, x0 + 1);
    double v10 = lattice(octave, y0 + 1, x0), v11 = lattice(octave, y0 + 1, x0 + 1);
    return v00 * (1 - ty) * (1 - tx) + v01 * (1 - ty) * tx + v10 * ty * (1 - tx) +
           v11 * ty * tx;
  };
  GrayImage out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double n = 0.65 * value_noise(1, 9.0, y, x) + 0.35 * value_noise(2, 3.0, y, x);
      double v = center + amplitude * (2.0 * n - 1.0);
      out.at(y, x) = quantize_gray(v);
    }
  }
  return out;
}

DirectoryTextures::DirectoryTextures(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw DataError("texture directory not found: " + dir);
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm")
      paths_.push_back(entry.path().string());
  }
  std::sort(paths_.begin(), paths_.end());
  if (paths_.empty()) throw DataError("no .pgm textures in directory: " + dir);
}

GrayImage DirectoryTextures::crop(int h, int w, Rng& rng, int /*center*/,
                                  int /*amplitude*/) const {
  const GrayImage img = read_pgm(paths_[rng.uniform_int(paths_.size())]);
  // Crop what fits, then resize to the requested dimensions.
  int ch = std::min(img.h, std::max(1, h));
  int cw = std::min(img.w, std::max(1, w));
  int oy = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(img.h - ch + 1)));
  int ox = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(img.w - cw + 1)));
  GrayImage crop(ch, cw);
  for (int y = 0; y < ch; ++y)
    for (int x = 0; x < cw; ++x) crop.at(y, x) = img.at(oy + y, ox + x);
  if (ch == h && cw == w) return crop;
  return resize_bilinear(crop, h, w);
}

namespace {

const ProceduralAtlas& default_atlas() {
  static const ProceduralAtlas atlas;
  return atlas;
}

const NoiseTextures& default_textures() {
  static const NoiseTextures textures;
  return textures;
}

}  // namespace

Renderer::Renderer() : Renderer(StyleRanges{}, nullptr, nullptr) {}

Renderer::Renderer(StyleRanges ranges, const GlyphRasterizer* atlas,
                   const TextureSource* textures)
    : ranges_(ranges),
      atlas_(atlas ? atlas : &default_atlas()),
      textures_(textures ? textures : &default_textures()) {}

RenderStyle Renderer::sample_style(Mode mode, Rng& rng) const {
  RenderStyle s;
  // Draw order is part of the determinism contract; do not reorder.
  s.glyph_scale = ranges_.scale_min +
                  static_cast<int>(rng.uniform_int(ranges_.scale_max - ranges_.scale_min + 1));
  s.stroke_thickness =
      ranges_.stroke_min +
      static_cast<int>(rng.uniform_int(ranges_.stroke_max - ranges_.stroke_min + 1));
  s.kerning = ranges_.kerning_min +
              static_cast<int>(rng.uniform_int(ranges_.kerning_max - ranges_.kerning_min + 1));
  if (mode == Mode::Scene) {
    double rot_max = ranges_.rotation_max_deg * kPi / 180.0;
    s.rotation = rng.uniform(-rot_max, rot_max);
    s.skew = rng.uniform(-ranges_.skew_max, ranges_.skew_max);
  } else {
    s.rotation = 0.0;
    s.skew = 0.0;
  }
  s.mix_weight = rng.uniform(ranges_.mix_min, ranges_.mix_max);

  // Foreground gray is free; background center is forced to keep at least
  // min_contrast of separation.
  s.fg_gray = static_cast<int>(rng.uniform_int(256));
  int lo_room = std::max(0, s.fg_gray - ranges_.min_contrast + 1);
  int hi_room = std::max(0, 255 - s.fg_gray - ranges_.min_contrast + 1);
  std::uint64_t pick = rng.uniform_int(static_cast<std::uint64_t>(lo_room + hi_room));
  if (pick < static_cast<std::uint64_t>(lo_room)) {
    s.bg_gray = static_cast<int>(pick);
  } else {
    s.bg_gray = s.fg_gray + ranges_.min_contrast + static_cast<int>(pick - lo_room);
  }
  s.validate(mode);
  return s;
}

LabeledImage Renderer::render(std::string_view label_utf8, Mode mode,
                              std::uint64_t seed) const {
  std::u32string label = shaper::normalize_label(decode_utf8(label_utf8));
  if (label.empty()) throw DataError("label is empty after normalization");
  std::vector<ShapedGlyph> glyphs = shaper::shape(label);

  Rng style_rng(hash_tag(seed, "style"));
  RenderStyle style = sample_style(mode, style_rng);

  Layer ras = rasterize(glyphs, style, *atlas_);

  GrayImage composed;
  if (mode == Mode::Video) {
    GrayImage flat_bg(ras.h, ras.w, static_cast<std::uint8_t>(style.bg_gray));
    GrayImage flat_blend(ras.h, ras.w, static_cast<std::uint8_t>(style.fg_gray));
    composed = compose_scene(ras, flat_blend, flat_bg, 1.0);
  } else {
    // Affine pose (rotation + shear about the centre), then a random
    // perspective, fitted so nothing is clipped.
    double c = det_cos(style.rotation), sn = det_sin(style.rotation);
    double cx = ras.w / 2.0, cy = ras.h / 2.0;
    Homography rot;
    rot.m = {c, -sn, cx - c * cx + sn * cy, sn, c, cy - sn * cx - c * cy, 0, 0, 1};
    Homography shear;
    shear.m = {1, style.skew, -style.skew * cy, 0, 1, 0, 0, 0, 1};
    Homography affine = shear * rot;

    Rng warp_rng(hash_tag(seed, "warp"));
    double jx = ranges_.corner_jitter * ras.w;
    double jy = ranges_.corner_jitter * ras.h;
    std::array<Point2, 4> corners = {Point2{0, 0}, {double(ras.w), 0},
                                     {double(ras.w), double(ras.h)}, {0, double(ras.h)}};
    std::array<Point2, 4> jittered;
    for (int i = 0; i < 4; ++i) {
      jittered[i] = {corners[i].x + warp_rng.uniform(-jx, jx),
                     corners[i].y + warp_rng.uniform(-jy, jy)};
    }
    Homography persp = Homography::from_corners(corners, jittered);
    Homography total = persp * affine;

    double min_x = 1e30, min_y = 1e30, max_x = -1e30, max_y = -1e30;
    for (const Point2& p : corners) {
      Point2 q = total.apply(p);
      min_x = std::min(min_x, q.x);
      min_y = std::min(min_y, q.y);
      max_x = std::max(max_x, q.x);
      max_y = std::max(max_y, q.y);
    }
    Homography fit = Homography::translation(-min_x, -min_y) * total;
    int out_h = std::max(1, iround(max_y - min_y));
    int out_w = std::max(1, iround(max_x - min_x));
    Layer warped = perspective_warp(ras, fit, out_h, out_w);

    Rng blend_rng(hash_tag(seed, "blend"));
    Rng bg_rng(hash_tag(seed, "bg"));
    // Blend crop hugs the stroke color; background sits across the contrast
    // gap so the text stays legible.
    GrayImage blend = textures_->crop(out_h, out_w, blend_rng, style.fg_gray, 32);
    GrayImage bg = textures_->crop(out_h, out_w, bg_rng, style.bg_gray, 32);
    composed = compose_scene(warped, blend, bg, style.mix_weight);
  }

  GrayImage smoothed = blur3(composed);
  int out_w = std::max(1, iround(smoothed.w * 32.0 / smoothed.h));
  LabeledImage result;
  result.pixels = resize_bilinear(smoothed, 32, out_w);
  result.label = encode_utf8(label);
  result.seed = seed;
  result.mode = mode;
  return result;
}

}  // namespace atrc
