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

#ifndef ATRC_ALPHABET_HPP_
#define ATRC_ALPHABET_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace atrc {

// Index 0 is the blank; real characters occupy 1..num_classes().
inline constexpr int kBlank = 0;

class Alphabet {
 public:
  Alphabet() = default;
  // classes[i] becomes index i+1. Duplicate characters are rejected.
  explicit Alphabet(std::u32string classes);

  // One character per line; the 1-based line number is the class index.
  static Alphabet load(const std::string& path);
  void save(const std::string& path) const;

  std::size_t num_classes() const { return classes_.size(); }
  const std::u32string& classes() const { return classes_; }

  int index_of(char32_t cp) const;   // -1 when absent
  char32_t char_at(int index) const; // index in 1..num_classes()

  bool contains(char32_t cp) const { return index_of(cp) >= 0; }

  // Throws DataError listing every character of `text` missing from the
  // alphabet.
  std::vector<int> encode(std::u32string_view text) const;
  std::u32string decode(std::span<const int> indices) const;

  bool operator==(const Alphabet& other) const { return classes_ == other.classes_; }

 private:
  std::u32string classes_;
};

}  // namespace atrc

#endif  // ATRC_ALPHABET_HPP_
