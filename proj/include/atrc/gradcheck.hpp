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

#ifndef ATRC_GRADCHECK_HPP_
#define ATRC_GRADCHECK_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>

namespace atrc {

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;

  std::string str() const;
};

// Central differences against an analytic gradient. `loss` must recompute
// the scalar objective from the current contents of `values`; coordinates
// are perturbed in place and restored. Relative error uses
// |a - n| / max(floor, |a|, |n|) so coordinates the loss ignores do not
// blow up on finite-difference noise.
//
// `max_coords` caps the number of coordinates checked; a deterministic
// seeded subset is used when the tensor is larger. `skip` exempts
// coordinates (e.g. relu inputs straddling the kink).
GradCheckReport grad_check(const std::function<double()>& loss, std::span<double> values,
                           std::span<const double> analytic_grad, double step = 1e-5,
                           std::size_t max_coords = SIZE_MAX, std::uint64_t seed = 1,
                           const std::function<bool(std::size_t)>& skip = nullptr,
                           double floor = 1e-5);

}  // namespace atrc

#endif  // ATRC_GRADCHECK_HPP_
