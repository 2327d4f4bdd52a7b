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

#include "atrc/tensor.hpp"

#include <algorithm>
#include <sstream>

#include "atrc/error.hpp"

namespace atrc {

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
  std::size_t n = 1;
  for (std::size_t e : shape_) {
    if (e == 0) throw ConfigError("tensor extents must be positive");
    n *= e;
  }
  data_.assign(n, 0.0);
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

std::string Tensor::shape_str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) os << ", ";
    os << shape_[i];
  }
  os << ")";
  return os.str();
}

}  // namespace atrc
