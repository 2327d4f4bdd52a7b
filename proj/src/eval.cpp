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

#include "atrc/eval.hpp"

#include <algorithm>
#include <vector>

#include "atrc/error.hpp"

namespace atrc {

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  // Two-row dynamic program.
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

namespace {

std::vector<std::u32string> tokenize_words(std::u32string_view text) {
  std::vector<std::u32string> words;
  std::u32string cur;
  for (char32_t cp : text) {
    if (cp == U' ') {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(cp);
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

// Number of ground-truth tokens exactly matched under a minimum-edit
// alignment of the token sequences (the usual "correct words" count); among
// equal-cost alignments the one with the most matches is taken.
std::size_t aligned_matches(const std::vector<std::u32string>& rt,
                            const std::vector<std::u32string>& gt) {
  const std::size_t n = gt.size(), m = rt.size();
  struct Cell {
    std::size_t cost;
    std::size_t matches;
  };
  std::vector<Cell> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = {j, 0};
  auto better = [](const Cell& a, const Cell& b) {
    return a.cost < b.cost || (a.cost == b.cost && a.matches > b.matches);
  };
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = {i, 0};
    for (std::size_t j = 1; j <= m; ++j) {
      bool eq = gt[i - 1] == rt[j - 1];
      Cell best{prev[j - 1].cost + (eq ? 0 : 1), prev[j - 1].matches + (eq ? 1 : 0)};
      Cell del{prev[j].cost + 1, prev[j].matches};
      Cell ins{cur[j - 1].cost + 1, cur[j - 1].matches};
      if (better(del, best)) best = del;
      if (better(ins, best)) best = ins;
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  return prev[m].matches;
}

}  // namespace

void recompute_rates(EvalReport& report) {
  report.crr = report.n_characters == 0
                   ? 0.0
                   : (static_cast<double>(report.n_characters) -
                      static_cast<double>(report.sum_edit_distance)) /
                         static_cast<double>(report.n_characters);
  report.wrr = report.n_words == 0 ? 0.0
                                   : static_cast<double>(report.n_words_correct) /
                                         static_cast<double>(report.n_words);
  report.lrr = report.n_images == 0 ? 0.0
                                    : static_cast<double>(report.n_images_correct) /
                                          static_cast<double>(report.n_images);
}

EvalReport evaluate(std::span<const EvalPair> pairs, Granularity granularity) {
  if (pairs.empty()) throw DataError("cannot evaluate an empty pair list");
  EvalReport report;
  for (const EvalPair& pair : pairs) {
    report.n_characters += pair.gt.size();
    report.sum_edit_distance += edit_distance(pair.rt, pair.gt);
    report.n_images += 1;
    if (pair.rt == pair.gt) report.n_images_correct += 1;

    if (granularity == Granularity::Word) {
      // One word per image; exact match is the word being right.
      report.n_words += 1;
      if (pair.rt == pair.gt) report.n_words_correct += 1;
    } else {
      std::vector<std::u32string> gt_words = tokenize_words(pair.gt);
      std::vector<std::u32string> rt_words = tokenize_words(pair.rt);
      report.n_words += gt_words.size();
      report.n_words_correct += aligned_matches(rt_words, gt_words);
    }
  }
  recompute_rates(report);
  return report;
}

}  // namespace atrc
