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

#ifndef ATRC_TESTS_SHAPING_ORACLE_HPP_
#define ATRC_TESTS_SHAPING_ORACLE_HPP_

#include <string_view>
#include <vector>

namespace atrc::testing {

// Independent re-implementation of the joining rules, written in the
// presentation-form-availability style (each letter carries its available
// isolated/initial/medial/final variants; missing variants fall back).
// Deliberately shares no code or tables with atrc::shaper.

enum class OracleForm { Isolated, Initial, Medial, Final };

struct OracleGlyph {
  char32_t base;      // for a lam ligature, the alef-family codepoint
  bool lam_ligature;
  OracleForm form;
};

// Shapes a single run with no spaces. Letters outside the supported
// repertoire are rejected by returning an empty result.
std::vector<OracleGlyph> oracle_shape(std::u32string_view word);

// Paw count for a single word, computed by scanning for letters that cannot
// connect to a successor.
std::size_t oracle_paw_count(std::u32string_view word);

// Unicode joining-type property for supported letters: 'D', 'R' or 'U'.
char oracle_joining_type(char32_t cp);

}  // namespace atrc::testing

#endif  // ATRC_TESTS_SHAPING_ORACLE_HPP_
