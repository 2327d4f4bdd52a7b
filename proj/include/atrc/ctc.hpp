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

#ifndef ATRC_CTC_HPP_
#define ATRC_CTC_HPP_

#include <span>
#include <vector>

#include "atrc/alphabet.hpp"
#include "atrc/tensor.hpp"

namespace atrc {

// Logits are (T, K+1) tensors of unnormalized scores; column 0 is the blank.

// Merge adjacent repeats, then delete blanks.
std::vector<int> collapse(std::span<const int> path);

// T >= L + number of adjacent equal pairs in the target.
bool ctc_feasible(std::size_t t_len, std::span<const int> target);

struct CtcResult {
  double loss = 0.0;  // negative log likelihood, nats
  Tensor grad;        // dloss/dlogits, same shape as logits
};

// Forward-backward in log domain. Infeasible targets are an error, not an
// infinite loss, so data bugs surface immediately during training.
CtcResult ctc_loss(const Tensor& logits, std::span<const int> target);

// collapse(per-frame argmax); ties break toward the lower class index.
std::vector<int> greedy_decode(const Tensor& logits);

// Prefix beam search over collapsed strings, merging the probability mass
// of prefixes that agree. Width 1 may differ from greedy; for generous
// widths the returned string's total probability dominates greedy's.
std::vector<int> beam_decode(const Tensor& logits, std::size_t width);

// Test oracle: explicit sum over all (K+1)^T paths. Rejects instances with
// T > 8 or more than 3 classes.
double brute_force_loss(const Tensor& logits, std::span<const int> target);

// log(exp(a) + exp(b)) guarded against -inf.
double log_add(double a, double b);

}  // namespace atrc

#endif  // ATRC_CTC_HPP_
