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

#ifndef ATRC_SHAPER_HPP_
#define ATRC_SHAPER_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace atrc::shaper {

// Connection capability of a letter, in logical (reading) order terms:
// a dual-joining letter connects to both neighbours, a right-joining-only
// letter connects only to the letter that precedes it, and a non-joining
// character connects to nothing.
enum class JoiningClass { DualJoining, RightJoiningOnly, NonJoining };

enum class PresentationForm { Isolated, Initial, Medial, Final };

const char* form_name(PresentationForm f);
const char* joining_class_name(JoiningClass c);

// Supported repertoire: the 28 base letters, teh marbuta, the alef
// madda/hamza variants, and the space. Everything else is rejected.
bool is_supported(char32_t cp);
bool is_base_letter(char32_t cp);  // one of the 28

// Total over the supported repertoire; throws UnsupportedCharacterError
// (index 0) for anything else.
JoiningClass joining_class(char32_t cp);

// The 28 base letters in codepoint order, for exhaustive tests and tools.
const std::vector<char32_t>& base_letters();
// Full supported letter repertoire (no space).
const std::vector<char32_t>& supported_letters();

struct ShapedGlyph {
  char32_t base = 0;        // letter codepoint; for a ligature, the alef-family member
  bool ligature = false;    // lam + base fused into one glyph
  PresentationForm form = PresentationForm::Isolated;
  std::size_t span_begin = 0;  // [span_begin, span_end) into the logical input
  std::size_t span_end = 0;
};

// NFC composition restricted to the repertoire (alef + combining madda/hamza),
// followed by stripping of the harakat range U+064B..U+065F and U+0670.
std::u32string normalize_label(std::u32string_view text);

// Assigns presentation forms from each letter's joining class and its
// neighbours', then applies the mandatory lam-alef ligature substitution.
// Input must already be normalized; throws UnsupportedCharacterError naming
// the offending index otherwise. Output spans partition the input in order.
std::vector<ShapedGlyph> shape(std::u32string_view text);

// Ligature pass alone: every (lam, alef-family) pair joined within one run
// becomes a single glyph, Isolated when the lam was Initial and Final when
// it was Medial. Identity when no pattern matches.
std::vector<ShapedGlyph> apply_ligatures(std::vector<ShapedGlyph> shaped);

struct Paw {
  std::vector<ShapedGlyph> glyphs;
};

// Splits a single word (no spaces) into its cursively-connected runs.
// A boundary falls after every letter that cannot connect to its successor.
std::vector<Paw> segment_paws(std::u32string_view word);

// Boundary rule on raw letters: true when a paw ends after index i.
bool paw_boundary_after(std::u32string_view word, std::size_t i);

}  // namespace atrc::shaper

#endif  // ATRC_SHAPER_HPP_
