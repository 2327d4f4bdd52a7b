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

#include "atrc/ctc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "atrc/error.hpp"

namespace atrc {

namespace {

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// Row-wise log-softmax of (T, K+1) logits.
Tensor log_softmax(const Tensor& logits) {
  const std::size_t t_len = logits.extent(0), k = logits.extent(1);
  Tensor lp({t_len, k});
  for (std::size_t t = 0; t < t_len; ++t) {
    const double* row = logits.data() + t * k;
    double mx = row[0];
    for (std::size_t j = 1; j < k; ++j) mx = std::max(mx, row[j]);
    double z = 0.0;
    for (std::size_t j = 0; j < k; ++j) z += std::exp(row[j] - mx);
    double logz = mx + std::log(z);
    double* out = lp.data() + t * k;
    for (std::size_t j = 0; j < k; ++j) out[j] = row[j] - logz;
  }
  return lp;
}

void check_logits(const Tensor& logits) {
  if (logits.rank() != 2 || logits.extent(0) < 1 || logits.extent(1) < 2)
    throw ConfigError("logits must be (T, classes+1) with T >= 1, got " +
                      logits.shape_str());
}

void check_target(const Tensor& logits, std::span<const int> target) {
  const int k = static_cast<int>(logits.extent(1)) - 1;
  for (int label : target) {
    if (label < 1 || label > k)
      throw DataError("target label " + std::to_string(label) +
                      " outside alphabet of size " + std::to_string(k));
  }
}

}  // namespace

double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  double mx = std::max(a, b);
  return mx + std::log1p(std::exp(std::min(a, b) - mx));
}

std::vector<int> collapse(std::span<const int> path) {
  std::vector<int> out;
  int prev = -1;
  for (int label : path) {
    if (label != prev && label != kBlank) out.push_back(label);
    prev = label;
  }
  return out;
}

bool ctc_feasible(std::size_t t_len, std::span<const int> target) {
  std::size_t repeats = 0;
  for (std::size_t i = 1; i < target.size(); ++i)
    if (target[i] == target[i - 1]) ++repeats;
  return t_len >= target.size() + repeats;
}

CtcResult ctc_loss(const Tensor& logits, std::span<const int> target) {
  check_logits(logits);
  check_target(logits, target);
  const std::size_t t_len = logits.extent(0);
  const std::size_t k1 = logits.extent(1);
  if (!ctc_feasible(t_len, target)) {
    std::size_t repeats = 0;
    for (std::size_t i = 1; i < target.size(); ++i)
      if (target[i] == target[i - 1]) ++repeats;
    throw DataError("infeasible CTC target: length " + std::to_string(target.size()) +
                    " with " + std::to_string(repeats) + " repeats needs T >= " +
                    std::to_string(target.size() + repeats) + ", got T = " +
                    std::to_string(t_len));
  }

  const std::size_t l = target.size();
  const std::size_t s_len = 2 * l + 1;
  // Extended target: blank, t1, blank, t2, ..., tL, blank.
  std::vector<int> ext(s_len, kBlank);
  for (std::size_t i = 0; i < l; ++i) ext[2 * i + 1] = target[i];

  Tensor lp = log_softmax(logits);
  auto lp_at = [&](std::size_t t, int label) { return lp.data()[t * k1 + label]; };

  std::vector<double> alpha(t_len * s_len, kLogZero);
  std::vector<double> beta(t_len * s_len, kLogZero);

  alpha[0] = lp_at(0, ext[0]);
  if (s_len > 1) alpha[1] = lp_at(0, ext[1]);
  for (std::size_t t = 1; t < t_len; ++t) {
    for (std::size_t s = 0; s < s_len; ++s) {
      double a = alpha[(t - 1) * s_len + s];
      if (s >= 1) a = log_add(a, alpha[(t - 1) * s_len + s - 1]);
      if (s >= 2 && ext[s] != kBlank && ext[s] != ext[s - 2])
        a = log_add(a, alpha[(t - 1) * s_len + s - 2]);
      alpha[t * s_len + s] = a == kLogZero ? kLogZero : a + lp_at(t, ext[s]);
    }
  }

  beta[(t_len - 1) * s_len + s_len - 1] = lp_at(t_len - 1, ext[s_len - 1]);
  if (s_len > 1) beta[(t_len - 1) * s_len + s_len - 2] = lp_at(t_len - 1, ext[s_len - 2]);
  for (std::size_t t = t_len - 1; t-- > 0;) {
    for (std::size_t s = 0; s < s_len; ++s) {
      double bsum = beta[(t + 1) * s_len + s];
      if (s + 1 < s_len) bsum = log_add(bsum, beta[(t + 1) * s_len + s + 1]);
      if (s + 2 < s_len && ext[s + 2] != kBlank && ext[s + 2] != ext[s])
        bsum = log_add(bsum, beta[(t + 1) * s_len + s + 2]);
      beta[t * s_len + s] = bsum == kLogZero ? kLogZero : bsum + lp_at(t, ext[s]);
    }
  }

  double log_p = log_add(alpha[(t_len - 1) * s_len + s_len - 1],
                         s_len > 1 ? alpha[(t_len - 1) * s_len + s_len - 2] : kLogZero);
  if (log_p == kLogZero)
    throw NumericError("CTC lattice has no feasible path despite feasibility check");

  // Gradient: softmax posterior minus lattice posterior per frame/class.
  CtcResult result;
  result.loss = -log_p;
  result.grad = Tensor(logits.shape());
  for (std::size_t t = 0; t < t_len; ++t) {
    // gamma[label] = sum over lattice states with that label of
    // exp(alpha + beta - lp(state) - log_p); computed in log domain.
    std::vector<double> gamma(k1, kLogZero);
    for (std::size_t s = 0; s < s_len; ++s) {
      double a = alpha[t * s_len + s], b = beta[t * s_len + s];
      if (a == kLogZero || b == kLogZero) continue;
      int label = ext[s];
      gamma[label] = log_add(gamma[label], a + b - lp_at(t, label));
    }
    double* grow = result.grad.data() + t * k1;
    const double* lrow = lp.data() + t * k1;
    for (std::size_t j = 0; j < k1; ++j) {
      double posterior = gamma[j] == kLogZero ? 0.0 : std::exp(gamma[j] - log_p);
      grow[j] = std::exp(lrow[j]) - posterior;
    }
  }
  return result;
}

std::vector<int> greedy_decode(const Tensor& logits) {
  check_logits(logits);
  const std::size_t t_len = logits.extent(0), k1 = logits.extent(1);
  std::vector<int> path(t_len);
  for (std::size_t t = 0; t < t_len; ++t) {
    const double* row = logits.data() + t * k1;
    int best = 0;
    for (std::size_t j = 1; j < k1; ++j) {
      if (row[j] > row[best]) best = static_cast<int>(j);
    }
    path[t] = best;
  }
  return collapse(path);
}

std::vector<int> beam_decode(const Tensor& logits, std::size_t width) {
  check_logits(logits);
  if (width < 1) throw ConfigError("beam width must be at least 1");
  const std::size_t t_len = logits.extent(0), k1 = logits.extent(1);
  Tensor lp = log_softmax(logits);

  struct Mass {
    double blank = kLogZero;     // paths ending in blank
    double nonblank = kLogZero;  // paths ending in the prefix's last label
    double total() const { return log_add(blank, nonblank); }
  };
  using Beam = std::map<std::vector<int>, Mass>;

  Beam beam;
  beam[{}] = Mass{0.0, kLogZero};  // empty prefix, probability 1

  for (std::size_t t = 0; t < t_len; ++t) {
    const double* row = lp.data() + t * k1;
    Beam next;
    for (const auto& [prefix, mass] : beam) {
      // Emit blank: prefix unchanged.
      {
        Mass& m = next[prefix];
        m.blank = log_add(m.blank, mass.total() + row[kBlank]);
      }
      for (std::size_t j = 1; j < k1; ++j) {
        int label = static_cast<int>(j);
        if (!prefix.empty() && prefix.back() == label) {
          // Same label again extends the run (prefix unchanged) from the
          // nonblank mass, and starts a new letter from the blank mass.
          Mass& same = next[prefix];
          same.nonblank = log_add(same.nonblank, mass.nonblank + row[j]);
          std::vector<int> grown = prefix;
          grown.push_back(label);
          Mass& g = next[grown];
          g.nonblank = log_add(g.nonblank, mass.blank + row[j]);
        } else {
          std::vector<int> grown = prefix;
          grown.push_back(label);
          Mass& g = next[grown];
          g.nonblank = log_add(g.nonblank, mass.total() + row[j]);
        }
      }
    }
    if (next.size() > width) {
      std::vector<std::pair<double, const std::vector<int>*>> scored;
      scored.reserve(next.size());
      for (const auto& [prefix, mass] : next) scored.emplace_back(mass.total(), &prefix);
      // Ties break lexicographically via the map's ordering for determinism.
      std::stable_sort(scored.begin(), scored.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      Beam pruned;
      for (std::size_t i = 0; i < width; ++i) pruned.emplace(*scored[i].second, next[*scored[i].second]);
      next = std::move(pruned);
    }
    beam = std::move(next);
  }

  const std::vector<int>* best = nullptr;
  double best_score = kLogZero;
  for (const auto& [prefix, mass] : beam) {
    double s = mass.total();
    if (best == nullptr || s > best_score) {
      best = &prefix;
      best_score = s;
    }
  }
  return best ? *best : std::vector<int>{};
}

double brute_force_loss(const Tensor& logits, std::span<const int> target) {
  check_logits(logits);
  check_target(logits, target);
  const std::size_t t_len = logits.extent(0), k1 = logits.extent(1);
  if (t_len > 8 || k1 > 4)
    throw ConfigError("brute-force enumeration limited to T <= 8 and 3 classes, got T=" +
                      std::to_string(t_len) + ", classes=" + std::to_string(k1 - 1));
  Tensor lp = log_softmax(logits);

  std::vector<int> want(target.begin(), target.end());
  std::vector<int> path(t_len, 0);
  double total = kLogZero;
  while (true) {
    double lp_path = 0.0;
    for (std::size_t t = 0; t < t_len; ++t) lp_path += lp.data()[t * k1 + path[t]];
    if (collapse(path) == want) total = log_add(total, lp_path);

    std::size_t d = 0;
    while (d < t_len) {
      if (++path[d] < static_cast<int>(k1)) break;
      path[d] = 0;
      ++d;
    }
    if (d == t_len) break;
  }
  if (total == kLogZero)
    throw DataError("target has zero probability under every path");
  return -total;
}

}  // namespace atrc
