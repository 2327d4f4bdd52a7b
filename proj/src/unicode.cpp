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

#include "atrc/unicode.hpp"

#include "atrc/error.hpp"

namespace atrc {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    char32_t cp = 0;
    int trail = 0;
    char32_t min = 0;
    if (c < 0x80) {
      cp = c;
      trail = 0;
      min = 0;
    } else if ((c >> 5) == 0x6) {
      cp = c & 0x1F;
      trail = 1;
      min = 0x80;
    } else if ((c >> 4) == 0xE) {
      cp = c & 0x0F;
      trail = 2;
      min = 0x800;
    } else if ((c >> 3) == 0x1E) {
      cp = c & 0x07;
      trail = 3;
      min = 0x10000;
    } else {
      throw DataError("malformed UTF-8 at byte " + std::to_string(i));
    }
    if (i + trail >= s.size()) {
      throw DataError("truncated UTF-8 sequence at byte " + std::to_string(i));
    }
    for (int k = 1; k <= trail; ++k) {
      unsigned char cont = static_cast<unsigned char>(s[i + k]);
      if ((cont & 0xC0) != 0x80) {
        throw DataError("malformed UTF-8 continuation at byte " + std::to_string(i + k));
      }
      cp = (cp << 6) | (cont & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      throw DataError("invalid Unicode scalar at byte " + std::to_string(i));
    }
    out.push_back(cp);
    i += 1 + trail;
  }
  return out;
}

std::string encode_utf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size() * 2);
  for (char32_t cp : s) out += encode_utf8(cp);
  return out;
}

}  // namespace atrc
