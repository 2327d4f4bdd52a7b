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

#include "atrc/alphabet.hpp"

#include <fstream>
#include <sstream>

#include "atrc/error.hpp"
#include "atrc/unicode.hpp"

namespace atrc {

Alphabet::Alphabet(std::u32string classes) : classes_(std::move(classes)) {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    for (std::size_t j = i + 1; j < classes_.size(); ++j) {
      if (classes_[i] == classes_[j]) {
        throw DataError("duplicate alphabet character '" + encode_utf8(classes_[i]) +
                        "' at lines " + std::to_string(i + 1) + " and " +
                        std::to_string(j + 1));
      }
    }
  }
}

Alphabet Alphabet::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open alphabet file: " + path);
  std::u32string classes;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::u32string cps = decode_utf8(line);
    if (cps.size() != 1) {
      throw DataError("alphabet file " + path + " line " + std::to_string(lineno) +
                      ": expected exactly one character, got " +
                      std::to_string(cps.size()));
    }
    classes.push_back(cps[0]);
  }
  return Alphabet(std::move(classes));
}

void Alphabet::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write alphabet file: " + path);
  for (char32_t cp : classes_) out << encode_utf8(cp) << '\n';
}

int Alphabet::index_of(char32_t cp) const {
  for (std::size_t i = 0; i < classes_.size(); ++i)
    if (classes_[i] == cp) return static_cast<int>(i) + 1;
  return -1;
}

char32_t Alphabet::char_at(int index) const {
  if (index < 1 || index > static_cast<int>(classes_.size()))
    throw DataError("alphabet index out of range: " + std::to_string(index));
  return classes_[static_cast<std::size_t>(index) - 1];
}

std::vector<int> Alphabet::encode(std::u32string_view text) const {
  std::vector<int> out;
  out.reserve(text.size());
  std::u32string missing;
  for (char32_t cp : text) {
    int idx = index_of(cp);
    if (idx < 0) {
      if (missing.find(cp) == std::u32string::npos) missing.push_back(cp);
    } else {
      out.push_back(idx);
    }
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "characters not in alphabet:";
    for (char32_t cp : missing) msg << " '" << encode_utf8(cp) << "'";
    throw DataError(msg.str());
  }
  return out;
}

std::u32string Alphabet::decode(std::span<const int> indices) const {
  std::u32string out;
  out.reserve(indices.size());
  for (int idx : indices) out.push_back(char_at(idx));
  return out;
}

}  // namespace atrc
