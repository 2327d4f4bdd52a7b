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

#include "atrc/shaper.hpp"

#include <doctest.h>

#include "atrc/error.hpp"
#include "atrc/rng.hpp"
#include "support/shaping_oracle.hpp"

using namespace atrc;
using namespace atrc::shaper;
using atrc::testing::OracleForm;
using atrc::testing::OracleGlyph;

namespace {

constexpr char32_t BEH = 0x0628;
constexpr char32_t ALEF = 0x0627;
constexpr char32_t LAM = 0x0644;
constexpr char32_t KAF = 0x0643;

PresentationForm to_impl(OracleForm f) {
  switch (f) {
    case OracleForm::Isolated: return PresentationForm::Isolated;
    case OracleForm::Initial: return PresentationForm::Initial;
    case OracleForm::Medial: return PresentationForm::Medial;
    case OracleForm::Final: return PresentationForm::Final;
  }
  return PresentationForm::Isolated;
}

bool matches_oracle(std::u32string_view word) {
  std::vector<ShapedGlyph> impl = shape(word);
  std::vector<OracleGlyph> want = atrc::testing::oracle_shape(word);
  if (impl.size() != want.size()) return false;
  for (std::size_t i = 0; i < impl.size(); ++i) {
    if (impl[i].base != want[i].base) return false;
    if (impl[i].ligature != want[i].lam_ligature) return false;
    if (impl[i].form != to_impl(want[i].form)) return false;
  }
  return true;
}

bool spans_partition(std::u32string_view word, const std::vector<ShapedGlyph>& glyphs) {
  std::size_t pos = 0;
  for (const ShapedGlyph& g : glyphs) {
    if (g.span_begin != pos || g.span_end <= g.span_begin) return false;
    pos = g.span_end;
  }
  return pos == word.size();
}

}  // namespace

TEST_CASE("joining classes match the Unicode property table") {
  CHECK(joining_class(BEH) == JoiningClass::DualJoining);
  CHECK(joining_class(ALEF) == JoiningClass::RightJoiningOnly);
  CHECK_THROWS_AS(joining_class(U'A'), UnsupportedCharacterError);

  for (char32_t cp : supported_letters()) {
    char want = atrc::testing::oracle_joining_type(cp);
    JoiningClass got = joining_class(cp);
    CHECK(want == (got == JoiningClass::DualJoining ? 'D' : 'R'));
  }
  CHECK(joining_class(U' ') == JoiningClass::NonJoining);
}

TEST_CASE("exactly six of the 28 base letters are right-joining-only") {
  int right_only = 0;
  for (char32_t cp : base_letters()) {
    if (joining_class(cp) == JoiningClass::RightJoiningOnly) ++right_only;
  }
  CHECK(base_letters().size() == 28);
  CHECK(right_only == 6);
}

TEST_CASE("single letters shape to isolated forms") {
  std::vector<ShapedGlyph> g = shape(std::u32string{BEH});
  REQUIRE(g.size() == 1);
  CHECK(g[0].base == BEH);
  CHECK(g[0].form == PresentationForm::Isolated);
}

TEST_CASE("neighbour context drives the form assignment") {
  std::vector<ShapedGlyph> g = shape(std::u32string{BEH, ALEF});
  REQUIRE(g.size() == 2);
  CHECK(g[0].form == PresentationForm::Initial);
  CHECK(g[1].form == PresentationForm::Final);

  g = shape(std::u32string{ALEF, BEH});
  REQUIRE(g.size() == 2);
  CHECK(g[0].form == PresentationForm::Isolated);
  CHECK(g[1].form == PresentationForm::Isolated);
}

TEST_CASE("shape rejects unsupported codepoints with the offending index") {
  try {
    shape(std::u32string{BEH, U'x', BEH});
    FAIL("expected UnsupportedCharacterError");
  } catch (const UnsupportedCharacterError& e) {
    CHECK(e.index() == 1);
    CHECK(e.codepoint() == U'x');
  }
  CHECK_THROWS_AS(shape(std::u32string{}), DataError);
}

TEST_CASE("lam-alef pairs fuse into ligature glyphs") {
  // lam in initial form: the pair collapses to an isolated ligature
  std::vector<ShapedGlyph> g = shape(std::u32string{LAM, ALEF});
  REQUIRE(g.size() == 1);
  CHECK(g[0].ligature);
  CHECK(g[0].base == ALEF);
  CHECK(g[0].form == PresentationForm::Isolated);
  CHECK(g[0].span_begin == 0);
  CHECK(g[0].span_end == 2);

  // lam in medial form: the ligature takes the final form
  g = shape(std::u32string{KAF, LAM, ALEF});
  REQUIRE(g.size() == 2);
  CHECK(g[0].base == KAF);
  CHECK(g[0].form == PresentationForm::Initial);
  CHECK(g[1].ligature);
  CHECK(g[1].form == PresentationForm::Final);

  // no pattern, no change
  g = shape(std::u32string{BEH, ALEF});
  CHECK(g.size() == 2);
}

TEST_CASE("apply_ligatures is the identity when nothing matches") {
  std::vector<ShapedGlyph> shaped = shape(std::u32string{BEH, KAF, BEH});
  std::vector<ShapedGlyph> again = apply_ligatures(shaped);
  REQUIRE(again.size() == shaped.size());
  for (std::size_t i = 0; i < shaped.size(); ++i) {
    CHECK(again[i].base == shaped[i].base);
    CHECK(again[i].form == shaped[i].form);
  }
}

TEST_CASE("paw segmentation follows the boundary rule") {
  CHECK(segment_paws(std::u32string{BEH, BEH}).size() == 1);
  auto paws = segment_paws(std::u32string{BEH, ALEF, BEH});
  REQUIRE(paws.size() == 2);
  CHECK(paws[0].glyphs.size() == 2);
  CHECK(paws[1].glyphs.size() == 1);
  CHECK(segment_paws(std::u32string{ALEF}).size() == 1);
  CHECK_THROWS_AS(segment_paws(std::u32string{}), DataError);
  CHECK_THROWS_AS(segment_paws(std::u32string{BEH, U' ', BEH}), DataError);
}

TEST_CASE("normalization composes alef variants and strips harakat") {
  // alef + combining madda above
  std::u32string composed = normalize_label(std::u32string{0x0627, 0x0653});
  REQUIRE(composed.size() == 1);
  CHECK(composed[0] == 0x0622);
  // fatha and shadda vanish
  std::u32string stripped = normalize_label(std::u32string{BEH, 0x064E, 0x0651, ALEF});
  CHECK(stripped == std::u32string{BEH, ALEF});
}

TEST_CASE("all one- and two-letter words agree with the oracle") {
  const auto& letters = base_letters();
  for (char32_t a : letters) {
    CHECK(matches_oracle(std::u32string{a}));
    for (char32_t b : letters) {
      std::u32string word{a, b};
      CHECK(matches_oracle(word));
      CHECK(segment_paws(word).size() == atrc::testing::oracle_paw_count(word));
    }
  }
}

TEST_CASE("all three-letter words agree with the oracle on forms and paws") {
  const auto& letters = base_letters();
  std::size_t mismatches = 0;
  for (char32_t a : letters) {
    for (char32_t b : letters) {
      for (char32_t c : letters) {
        std::u32string word{a, b, c};
        if (!matches_oracle(word)) ++mismatches;
        if (segment_paws(word).size() != atrc::testing::oracle_paw_count(word))
          ++mismatches;
      }
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("paw count equals one plus the number of non-final boundary letters") {
  const auto& letters = base_letters();
  for (char32_t a : letters) {
    for (char32_t b : letters) {
      for (char32_t c : letters) {
        std::u32string word{a, b, c};
        std::size_t boundaries = 0;
        for (std::size_t i = 0; i + 1 < word.size(); ++i) {
          if (joining_class(word[i]) != JoiningClass::DualJoining) ++boundaries;
        }
        CHECK(segment_paws(word).size() == 1 + boundaries);
      }
    }
  }
}

TEST_CASE("source spans partition the input for random words") {
  Rng rng(42);
  const auto& letters = supported_letters();
  for (int trial = 0; trial < 200; ++trial) {
    std::u32string word;
    std::size_t len = 1 + rng.uniform_int(12);
    for (std::size_t i = 0; i < len; ++i) {
      if (i > 0 && i + 1 < len && rng.uniform() < 0.12) {
        word.push_back(U' ');
      } else {
        word.push_back(letters[rng.uniform_int(letters.size())]);
      }
    }
    std::vector<ShapedGlyph> glyphs = shape(word);
    CHECK(spans_partition(word, glyphs));
    CHECK(glyphs.size() <= word.size());
    for (const ShapedGlyph& g : glyphs) {
      if (g.ligature) CHECK(g.span_end - g.span_begin >= 2);
    }
  }
}

TEST_CASE("form legality: joining class constrains the assigned form") {
  Rng rng(7);
  const auto& letters = supported_letters();
  for (int trial = 0; trial < 300; ++trial) {
    std::u32string word;
    std::size_t len = 1 + rng.uniform_int(6);
    for (std::size_t i = 0; i < len; ++i)
      word.push_back(letters[rng.uniform_int(letters.size())]);
    for (const ShapedGlyph& g : shape(word)) {
      JoiningClass cls = g.ligature ? JoiningClass::RightJoiningOnly : joining_class(g.base);
      if (cls == JoiningClass::RightJoiningOnly) {
        CHECK(g.form != PresentationForm::Initial);
        CHECK(g.form != PresentationForm::Medial);
      }
      if (cls == JoiningClass::NonJoining) CHECK(g.form == PresentationForm::Isolated);
    }
  }
}
