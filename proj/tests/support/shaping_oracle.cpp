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

#include "support/shaping_oracle.hpp"

namespace atrc::testing {

namespace {

// Availability of the four presentation variants, 0 when a letter has no
// such variant. Mirrors the classic Arabic presentation-forms tables: the
// six right-joining letters (and teh marbuta / alef variants) only carry
// isolated and final variants.
struct FormRow {
  char32_t base;
  bool has_initial;
  bool has_medial;
};

// Letters with all four variants.
constexpr char32_t kFourForm[] = {
    0x0628, 0x062A, 0x062B, 0x062C, 0x062D, 0x062E, 0x0633, 0x0634, 0x0635,
    0x0636, 0x0637, 0x0638, 0x0639, 0x063A, 0x0641, 0x0642, 0x0643, 0x0644,
    0x0645, 0x0646, 0x0647, 0x064A,
};

// Letters with only isolated/final variants.
constexpr char32_t kTwoForm[] = {
    0x0627, 0x062F, 0x0630, 0x0631, 0x0632, 0x0648,  // the six in the base set
    0x0622, 0x0623, 0x0625, 0x0629,                  // alef variants, teh marbuta
};

constexpr char32_t kAlefFamily[] = {0x0627, 0x0622, 0x0623, 0x0625};
constexpr char32_t kLam = 0x0644;

int letter_kind(char32_t cp) {  // 4 = four-form, 2 = two-form, 0 = unknown
  for (char32_t c : kFourForm)
    if (c == cp) return 4;
  for (char32_t c : kTwoForm)
    if (c == cp) return 2;
  return 0;
}

bool alef_family(char32_t cp) {
  for (char32_t c : kAlefFamily)
    if (c == cp) return true;
  return false;
}

}  // namespace

char oracle_joining_type(char32_t cp) {
  if (cp == 0x0020) return 'U';
  int k = letter_kind(cp);
  if (k == 4) return 'D';
  if (k == 2) return 'R';
  return '?';
}

std::vector<OracleGlyph> oracle_shape(std::u32string_view word) {
  // Pass 1: fuse lam + alef-family into ligature pseudo-letters, which then
  // behave like two-form (right-joining) letters.
  struct Item {
    char32_t base;
    bool lig;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] == kLam && i + 1 < word.size() && alef_family(word[i + 1])) {
      items.push_back({word[i + 1], true});
      ++i;
    } else {
      if (letter_kind(word[i]) == 0) return {};
      items.push_back({word[i], false});
    }
  }

  // Pass 2: availability-driven variant selection. prev_joins tracks whether
  // the previous item reaches toward this one.
  std::vector<OracleGlyph> out;
  bool prev_joins = false;
  for (std::size_t i = 0; i < items.size(); ++i) {
    bool has_init = !items[i].lig && letter_kind(items[i].base) == 4;
    bool has_medial = has_init;
    bool next_exists = i + 1 < items.size();

    OracleForm form;
    if (prev_joins && next_exists && has_medial) {
      form = OracleForm::Medial;
    } else if (prev_joins) {
      form = OracleForm::Final;
    } else if (next_exists && has_init) {
      form = OracleForm::Initial;
    } else {
      form = OracleForm::Isolated;
    }
    out.push_back({items[i].base, items[i].lig, form});

    // This item reaches leftward only when it kept an initial/medial shape.
    prev_joins = form == OracleForm::Initial || form == OracleForm::Medial;
  }
  return out;
}

std::size_t oracle_paw_count(std::u32string_view word) {
  if (word.empty()) return 0;
  std::size_t paws = 1;
  for (std::size_t i = 0; i + 1 < word.size(); ++i) {
    if (letter_kind(word[i]) != 4) ++paws;  // cannot connect to its successor
  }
  return paws;
}

}  // namespace atrc::testing
