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

#include <algorithm>
#include <cstdio>

#include "atrc/error.hpp"
#include "atrc/unicode.hpp"

namespace atrc::shaper {

namespace {

constexpr char32_t kSpace = 0x0020;
constexpr char32_t kLam = 0x0644;

struct LetterEntry {
  char32_t cp;
  JoiningClass cls;
};

// The 28 base letters. Exactly six of them join only to their predecessor:
// alef, dal, thal, reh, zain and waw.
constexpr LetterEntry kBaseLetters[] = {
    {0x0627, JoiningClass::RightJoiningOnly},  // alef
    {0x0628, JoiningClass::DualJoining},       // beh
    {0x062A, JoiningClass::DualJoining},       // teh
    {0x062B, JoiningClass::DualJoining},       // theh
    {0x062C, JoiningClass::DualJoining},       // jeem
    {0x062D, JoiningClass::DualJoining},       // hah
    {0x062E, JoiningClass::DualJoining},       // khah
    {0x062F, JoiningClass::RightJoiningOnly},  // dal
    {0x0630, JoiningClass::RightJoiningOnly},  // thal
    {0x0631, JoiningClass::RightJoiningOnly},  // reh
    {0x0632, JoiningClass::RightJoiningOnly},  // zain
    {0x0633, JoiningClass::DualJoining},       // seen
    {0x0634, JoiningClass::DualJoining},       // sheen
    {0x0635, JoiningClass::DualJoining},       // sad
    {0x0636, JoiningClass::DualJoining},       // dad
    {0x0637, JoiningClass::DualJoining},       // tah
    {0x0638, JoiningClass::DualJoining},       // zah
    {0x0639, JoiningClass::DualJoining},       // ain
    {0x063A, JoiningClass::DualJoining},       // ghain
    {0x0641, JoiningClass::DualJoining},       // feh
    {0x0642, JoiningClass::DualJoining},       // qaf
    {0x0643, JoiningClass::DualJoining},       // kaf
    {0x0644, JoiningClass::DualJoining},       // lam
    {0x0645, JoiningClass::DualJoining},       // meem
    {0x0646, JoiningClass::DualJoining},       // noon
    {0x0647, JoiningClass::DualJoining},       // heh
    {0x0648, JoiningClass::RightJoiningOnly},  // waw
    {0x064A, JoiningClass::DualJoining},       // yeh
};

constexpr LetterEntry kExtraLetters[] = {
    {0x0622, JoiningClass::RightJoiningOnly},  // alef with madda above
    {0x0623, JoiningClass::RightJoiningOnly},  // alef with hamza above
    {0x0625, JoiningClass::RightJoiningOnly},  // alef with hamza below
    {0x0629, JoiningClass::RightJoiningOnly},  // teh marbuta
};

bool is_alef_family(char32_t cp) {
  return cp == 0x0627 || cp == 0x0622 || cp == 0x0623 || cp == 0x0625;
}

bool is_mark(char32_t cp) {
  return (cp >= 0x064B && cp <= 0x065F) || cp == 0x0670;
}

const LetterEntry* find_letter(char32_t cp) {
  for (const auto& e : kBaseLetters)
    if (e.cp == cp) return &e;
  for (const auto& e : kExtraLetters)
    if (e.cp == cp) return &e;
  return nullptr;
}

bool connects_forward(JoiningClass c) { return c == JoiningClass::DualJoining; }

bool connects_backward(JoiningClass c) {
  return c == JoiningClass::DualJoining || c == JoiningClass::RightJoiningOnly;
}

[[noreturn]] void throw_unsupported(char32_t cp, std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "U+%04X", static_cast<unsigned>(cp));
  throw UnsupportedCharacterError(
      cp, index,
      "unsupported character " + std::string(buf) + " ('" + encode_utf8(cp) +
          "') at index " + std::to_string(index));
}

}  // namespace

const char* form_name(PresentationForm f) {
  switch (f) {
    case PresentationForm::Isolated: return "isolated";
    case PresentationForm::Initial: return "initial";
    case PresentationForm::Medial: return "medial";
    case PresentationForm::Final: return "final";
  }
  return "?";
}

const char* joining_class_name(JoiningClass c) {
  switch (c) {
    case JoiningClass::DualJoining: return "dual";
    case JoiningClass::RightJoiningOnly: return "right-only";
    case JoiningClass::NonJoining: return "none";
  }
  return "?";
}

bool is_base_letter(char32_t cp) {
  for (const auto& e : kBaseLetters)
    if (e.cp == cp) return true;
  return false;
}

bool is_supported(char32_t cp) { return cp == kSpace || find_letter(cp) != nullptr; }

JoiningClass joining_class(char32_t cp) {
  if (cp == kSpace) return JoiningClass::NonJoining;
  if (const LetterEntry* e = find_letter(cp)) return e->cls;
  throw_unsupported(cp, 0);
}

const std::vector<char32_t>& base_letters() {
  static const std::vector<char32_t> v = [] {
    std::vector<char32_t> r;
    for (const auto& e : kBaseLetters) r.push_back(e.cp);
    return r;
  }();
  return v;
}

const std::vector<char32_t>& supported_letters() {
  static const std::vector<char32_t> v = [] {
    std::vector<char32_t> r;
    for (const auto& e : kBaseLetters) r.push_back(e.cp);
    for (const auto& e : kExtraLetters) r.push_back(e.cp);
    return r;
  }();
  return v;
}

std::u32string normalize_label(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char32_t cp = text[i];
    if (i + 1 < text.size()) {
      char32_t next = text[i + 1];
      char32_t composed = 0;
      if (cp == 0x0627 && next == 0x0653) composed = 0x0622;
      if (cp == 0x0627 && next == 0x0654) composed = 0x0623;
      if (cp == 0x0627 && next == 0x0655) composed = 0x0625;
      if (cp == 0x0648 && next == 0x0654) composed = 0x0624;
      if (cp == 0x064A && next == 0x0654) composed = 0x0626;
      if (composed != 0) {
        out.push_back(composed);
        ++i;
        continue;
      }
    }
    if (is_mark(cp)) continue;
    out.push_back(cp);
  }
  return out;
}

std::vector<ShapedGlyph> shape(std::u32string_view text) {
  if (text.empty()) throw DataError("cannot shape empty text");

  std::vector<JoiningClass> cls(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char32_t cp = text[i];
    if (cp == kSpace) {
      cls[i] = JoiningClass::NonJoining;
    } else if (const LetterEntry* e = find_letter(cp)) {
      cls[i] = e->cls;
    } else {
      throw_unsupported(cp, i);
    }
  }

  std::vector<ShapedGlyph> glyphs(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    bool joined_prev = i > 0 && connects_forward(cls[i - 1]) && connects_backward(cls[i]);
    bool joined_next =
        i + 1 < text.size() && connects_forward(cls[i]) && connects_backward(cls[i + 1]);
    PresentationForm form;
    if (joined_prev && joined_next) {
      form = PresentationForm::Medial;
    } else if (joined_prev) {
      form = PresentationForm::Final;
    } else if (joined_next) {
      form = PresentationForm::Initial;
    } else {
      form = PresentationForm::Isolated;
    }
    glyphs[i] = ShapedGlyph{text[i], false, form, i, i + 1};
  }
  return apply_ligatures(std::move(glyphs));
}

std::vector<ShapedGlyph> apply_ligatures(std::vector<ShapedGlyph> shaped) {
  std::vector<ShapedGlyph> out;
  out.reserve(shaped.size());
  for (std::size_t i = 0; i < shaped.size(); ++i) {
    const ShapedGlyph& g = shaped[i];
    if (!g.ligature && g.base == kLam && i + 1 < shaped.size() &&
        (g.form == PresentationForm::Initial || g.form == PresentationForm::Medial)) {
      const ShapedGlyph& next = shaped[i + 1];
      if (!next.ligature && is_alef_family(next.base) && next.span_begin == g.span_end) {
        ShapedGlyph lig;
        lig.base = next.base;
        lig.ligature = true;
        lig.form = g.form == PresentationForm::Initial ? PresentationForm::Isolated
                                                       : PresentationForm::Final;
        lig.span_begin = g.span_begin;
        lig.span_end = next.span_end;
        out.push_back(lig);
        ++i;
        continue;
      }
    }
    out.push_back(g);
  }
  return out;
}

bool paw_boundary_after(std::u32string_view word, std::size_t i) {
  JoiningClass c = joining_class(word[i]);
  return c == JoiningClass::RightJoiningOnly || c == JoiningClass::NonJoining;
}

std::vector<Paw> segment_paws(std::u32string_view word) {
  if (word.empty()) throw DataError("cannot segment an empty word");
  if (word.find(kSpace) != std::u32string_view::npos)
    throw DataError("segment_paws expects a single word without spaces");

  std::vector<ShapedGlyph> glyphs = shape(word);
  std::vector<Paw> paws;
  Paw current;
  for (const ShapedGlyph& g : glyphs) {
    current.glyphs.push_back(g);
    // A ligature ends on its alef, which never connects forward.
    std::size_t last_letter = g.span_end - 1;
    if (paw_boundary_after(word, last_letter)) {
      paws.push_back(std::move(current));
      current = Paw{};
    }
  }
  if (!current.glyphs.empty()) paws.push_back(std::move(current));
  return paws;
}

}  // namespace atrc::shaper
