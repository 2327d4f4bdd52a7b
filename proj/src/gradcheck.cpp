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

#include "atrc/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "atrc/error.hpp"
#include "atrc/rng.hpp"

namespace atrc {

std::string GradCheckReport::str() const {
  std::ostringstream os;
  os << "max_rel_err=" << max_rel_err << " at index " << worst_index
     << " (analytic=" << worst_analytic << ", numeric=" << worst_numeric << ", checked "
     << checked << " coords)";
  return os.str();
}

GradCheckReport grad_check(const std::function<double()>& loss, std::span<double> values,
                           std::span<const double> analytic_grad, double step,
                           std::size_t max_coords, std::uint64_t seed,
                           const std::function<bool(std::size_t)>& skip, double floor) {
  if (values.size() != analytic_grad.size())
    throw ConfigError("grad_check: value/gradient size mismatch");

  std::vector<std::size_t> coords(values.size());
  std::iota(coords.begin(), coords.end(), 0);
  if (coords.size() > max_coords) {
    // Seeded Fisher-Yates prefix; the subset is deterministic in `seed`.
    Rng rng(seed);
    for (std::size_t i = 0; i < max_coords; ++i) {
      std::size_t j = i + rng.uniform_int(coords.size() - i);
      std::swap(coords[i], coords[j]);
    }
    coords.resize(max_coords);
  }

  GradCheckReport report;
  for (std::size_t idx : coords) {
    if (skip && skip(idx)) continue;
    double saved = values[idx];
    values[idx] = saved + step;
    double up = loss();
    values[idx] = saved - step;
    double down = loss();
    values[idx] = saved;
    double numeric = (up - down) / (2.0 * step);
    double analytic = analytic_grad[idx];
    double denom = std::max({floor, std::abs(analytic), std::abs(numeric)});
    double rel = std::abs(analytic - numeric) / denom;
    if (rel > report.max_rel_err) {
      report.max_rel_err = rel;
      report.worst_index = idx;
      report.worst_analytic = analytic;
      report.worst_numeric = numeric;
    }
    ++report.checked;
  }
  return report;
}

}  // namespace atrc
