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

#ifndef ATRC_EVAL_HPP_
#define ATRC_EVAL_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace atrc {

// Unit-cost Levenshtein distance over Unicode scalar values.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

enum class Granularity { Word, Line };

struct EvalPair {
  std::u32string rt;  // recognized text
  std::u32string gt;  // ground truth
};

struct EvalReport {
  std::size_t n_characters = 0;        // ground-truth characters, spaces included
  std::size_t sum_edit_distance = 0;
  std::size_t n_words = 0;
  std::size_t n_words_correct = 0;
  std::size_t n_images = 0;
  std::size_t n_images_correct = 0;
  double crr = 0.0;  // (n_characters - sum_edit_distance) / n_characters; may be negative
  double wrr = 0.0;
  double lrr = 0.0;
};

// CRR over ground-truth characters, WRR as the fraction of ground-truth
// words exactly matched under a word-level edit alignment (space-tokenized),
// LRR as the fraction of images transcribed exactly.
EvalReport evaluate(std::span<const EvalPair> pairs, Granularity granularity);

// Recompute the three rates from the stored counts.
void recompute_rates(EvalReport& report);

}  // namespace atrc

#endif  // ATRC_EVAL_HPP_
