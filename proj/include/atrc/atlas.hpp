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

#ifndef ATRC_ATLAS_HPP_
#define ATRC_ATLAS_HPP_

#include <vector>

#include "atrc/shaper.hpp"

namespace atrc {

// Binary coverage bitmap for one glyph. `baseline` is the row the glyph sits
// on; joining strokes of neighbouring glyphs meet on that row.
struct GlyphBitmap {
  int h = 0;
  int w = 0;
  int baseline = 0;
  std::vector<double> alpha;  // 0 or 1 at this stage

  double at(int y, int x) const { return alpha[static_cast<std::size_t>(y) * w + x]; }
  void set(int y, int x, double v) { alpha[static_cast<std::size_t>(y) * w + x] = v; }
};

// Pluggable glyph source. Real font rasterizers can be dropped in behind
// this interface; the built-in procedural atlas keeps the pipeline free of
// font-file dependencies.
class GlyphRasterizer {
 public:
  virtual ~GlyphRasterizer() = default;
  // Throws DataError when the (base, form) pair is not in the atlas.
  virtual GlyphBitmap glyph(const shaper::ShapedGlyph& g, int scale_px,
                            int thickness_px) const = 0;
};

// Deterministic synthetic glyphs: each (letter, form) gets a distinct,
// connected stroke pattern anchored on a shared baseline. Joining forms
// extend their baseline stroke to the cell edge on the joining side so that
// adjacent glyphs of a paw meet.
class ProceduralAtlas final : public GlyphRasterizer {
 public:
  GlyphBitmap glyph(const shaper::ShapedGlyph& g, int scale_px,
                    int thickness_px) const override;
};

}  // namespace atrc

#endif  // ATRC_ATLAS_HPP_
