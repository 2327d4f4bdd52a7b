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

#ifndef ATRC_TENSOR_HPP_
#define ATRC_TENSOR_HPP_

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace atrc {

// Dense row-major double tensor. The shape is fixed at construction; storage
// is 8-byte throughout, checkpoints truncate to 4-byte floats on disk.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape);
  Tensor(std::initializer_list<std::size_t> shape)
      : Tensor(std::vector<std::size_t>(shape)) {}

  static Tensor zeros_like(const Tensor& other) { return Tensor(other.shape_); }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t extent(std::size_t d) const { return shape_[d]; }
  std::size_t size() const { return data_.size(); }
  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  // NCHW-style accessors for the common ranks.
  double& at2(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
  double at2(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
  double& at4(std::size_t n, std::size_t c, std::size_t h, std::size_t w) {
    return data_[((n * shape_[1] + c) * shape_[2] + h) * shape_[3] + w];
  }
  double at4(std::size_t n, std::size_t c, std::size_t h, std::size_t w) const {
    return data_[((n * shape_[1] + c) * shape_[2] + h) * shape_[3] + w];
  }

  void fill(double v);
  void zero() { fill(0.0); }

  std::string shape_str() const;  // e.g. "(2, 3, 5, 5)"

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

// Trainable value with its accumulated gradient. Gradients are zeroed at
// optimizer step boundaries, not by the layers.
struct Parameter {
  Tensor value;
  Tensor grad;

  Parameter() = default;
  explicit Parameter(std::vector<std::size_t> shape)
      : value(shape), grad(std::move(shape)) {}
  Parameter(std::initializer_list<std::size_t> shape)
      : Parameter(std::vector<std::size_t>(shape)) {}
};

}  // namespace atrc

#endif  // ATRC_TENSOR_HPP_
