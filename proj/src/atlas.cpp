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

#include "atrc/atlas.hpp"

#include <cstdio>

#include "atrc/error.hpp"
#include "atrc/rng.hpp"
#include "atrc/unicode.hpp"

namespace atrc {

namespace {

using shaper::PresentationForm;
using shaper::ShapedGlyph;

constexpr char32_t kSpace = 0x0020;

// 16 fixed unit-ish directions, mostly upward; hardcoded so glyph geometry
// never touches libm trigonometry. (dx, dy) with dy < 0 pointing up.
constexpr double kDirs[][2] = {
    {1.0, 0.0},   {-1.0, 0.0},  {0.0, -1.0},  {0.7, -0.7}, {-0.7, -0.7},
    {0.9, -0.45}, {-0.9, -0.45}, {0.45, -0.9}, {-0.45, -0.9}, {0.7, 0.7},
    {-0.7, 0.7},  {0.3, -0.95}, {-0.3, -0.95}, {1.0, -0.25}, {-1.0, -0.25},
    {0.0, 1.0},
};

int iround(double v) { return static_cast<int>(v + (v >= 0 ? 0.5 : -0.5)); }

void stamp(GlyphBitmap& g, int cx, int cy, int t) {
  // Square pen of side t anchored at its top-left.
  for (int y = cy; y < cy + t; ++y) {
    for (int x = cx; x < cx + t; ++x) {
      if (y >= 0 && y < g.h && x >= 0 && x < g.w) g.set(y, x, 1.0);
    }
  }
}

void draw_line(GlyphBitmap& g, double x0, double y0, double x1, double y1, int t) {
  double dx = x1 - x0, dy = y1 - y0;
  double adx = dx < 0 ? -dx : dx, ady = dy < 0 ? -dy : dy;
  double len = adx > ady ? adx : ady;
  int steps = static_cast<int>(len * 2.5) + 1;
  for (int i = 0; i <= steps; ++i) {
    double f = static_cast<double>(i) / steps;
    stamp(g, iround(x0 + f * dx), iround(y0 + f * dy), t);
  }
}

bool joins_next(PresentationForm f) {
  return f == PresentationForm::Initial || f == PresentationForm::Medial;
}
bool joins_prev(PresentationForm f) {
  return f == PresentationForm::Final || f == PresentationForm::Medial;
}

}  // namespace

GlyphBitmap ProceduralAtlas::glyph(const ShapedGlyph& g, int scale_px,
                                   int thickness_px) const {
  if (scale_px < 8) throw ConfigError("glyph scale too small: " + std::to_string(scale_px));
  if (thickness_px < 1) throw ConfigError("stroke thickness must be >= 1");

  const int h = scale_px;
  const int t = thickness_px;
  const int baseline = (scale_px * 72 + 50) / 100;

  if (g.base == kSpace && !g.ligature) {
    GlyphBitmap bm;
    bm.h = h;
    bm.w = scale_px / 2;
    bm.baseline = baseline;
    bm.alpha.assign(static_cast<std::size_t>(bm.h) * bm.w, 0.0);
    return bm;
  }

  bool known = g.ligature
                   ? (g.base == 0x0627 || g.base == 0x0622 || g.base == 0x0623 ||
                      g.base == 0x0625)
                   : shaper::is_supported(g.base);
  // Ligature forms come out of the shaper as Isolated or Final only.
  if (g.ligature && joins_next(g.form)) known = false;
  if (!known) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "U+%04X", static_cast<unsigned>(g.base));
    throw DataError(std::string("glyph not in atlas: ") + buf +
                    (g.ligature ? " (lam ligature)" : "") + " " +
                    shaper::form_name(g.form));
  }

  GlyphBitmap bm;
  bm.h = h;
  bm.w = g.ligature ? (scale_px * 110 + 50) / 100 : (scale_px * 75 + 50) / 100;
  bm.baseline = baseline;
  bm.alpha.assign(static_cast<std::size_t>(bm.h) * bm.w, 0.0);

  std::uint64_t key = hash_tag(static_cast<std::uint64_t>(g.base) |
                                   (g.ligature ? 0x100000000ULL : 0) |
                                   (static_cast<std::uint64_t>(g.form) << 40),
                               "atlas-v1");
  Rng rng(key);

  const int w = bm.w;
  // Vertical spine in the middle third, from a hash-picked top down to the
  // baseline; every other stroke is anchored on it or on the baseline, so
  // the ink stays one connected component.
  int sx = iround(rng.uniform(0.32, 0.62) * (w - t));
  int y_top = iround(rng.uniform(0.10, 0.38) * h);
  draw_line(bm, sx, y_top, sx, baseline, t);

  int xs = joins_next(g.form) ? 0 : iround(rng.uniform(0.06, 0.20) * w);
  int xe = joins_prev(g.form) ? w - t : iround(rng.uniform(0.78, 0.94) * (w - t));
  if (xs > sx) xs = sx;
  if (xe < sx) xe = sx;
  draw_line(bm, xs, baseline, xe, baseline, t);

  int extra = 2 + static_cast<int>(rng.uniform_int(3));
  for (int k = 0; k < extra; ++k) {
    double ax, ay;
    if (rng.coin()) {
      ax = sx;
      ay = rng.uniform(static_cast<double>(y_top), static_cast<double>(baseline));
    } else {
      ax = rng.uniform(static_cast<double>(xs), static_cast<double>(xe));
      ay = baseline;
    }
    const double* dir = kDirs[rng.uniform_int(16)];
    double len = rng.uniform(0.18, 0.50) * h;
    double ex = ax + dir[0] * len;
    double ey = ay + dir[1] * len;
    if (ex < 0) ex = 0;
    if (ex > w - t) ex = w - t;
    if (ey < 0) ey = 0;
    if (ey > h - t) ey = h - t;
    draw_line(bm, ax, ay, ex, ey, t);
  }

  // Ligatures get a second tall stem; the fused pair reads wider and taller
  // than single letters.
  if (g.ligature) {
    int sx2 = iround(rng.uniform(0.70, 0.88) * (w - t));
    int y2 = iround(rng.uniform(0.04, 0.16) * h);
    draw_line(bm, sx2, y2, sx2, baseline, t);
  }

  return bm;
}

}  // namespace atrc
