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

#ifndef ATRC_NN_HPP_
#define ATRC_NN_HPP_

#include <cstdint>
#include <vector>

#include "atrc/tensor.hpp"

namespace atrc {

// All kernels take NCHW tensors and compute exact gradients of their own
// forward pass. Summation order inside each output element is fixed, so
// results do not depend on any parallel schedule.

struct ConvSpec {
  int kh = 1, kw = 1;
  int sh = 1, sw = 1;
  int ph = 0, pw = 0;
  int out_channels = 1;
};

struct PoolSpec {
  int kh = 1, kw = 1;
  int sh = 1, sw = 1;
  int ph = 0, pw = 0;
};

// Output spatial extent for a dimension; throws ConfigError when < 1.
int conv_out_extent(int in, int k, int s, int p);

struct ConvCache {
  // im2col patches per batch item: (OH*OW) x (C*kh*kw), concatenated.
  Tensor cols;
  std::size_t n = 0, ohw = 0, k = 0;
};

// out[n,co,oh,ow] = sum_{ci,i,j} x[n,ci,oh*sh-ph+i,ow*sw-pw+j] * w[co,ci,i,j] + b[co]
// with zero padding. w shape: (C_out, C_in, kh, kw); b shape: (C_out).
Tensor conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b,
                      const ConvSpec& spec, ConvCache* cache);
// dx/dw/db are written (dw, db accumulated) for the same computation.
void conv2d_backward(const Tensor& dy, const Tensor& w, const ConvSpec& spec,
                     const std::vector<std::size_t>& x_shape, const ConvCache& cache,
                     Tensor* dx, Tensor* dw, Tensor* db);

struct PoolCache {
  std::vector<std::int64_t> argmax;  // flat input index per output element
  std::vector<std::size_t> in_shape;
};

// Per-window maximum with -inf padding; ties go to the first element in
// row-major window order.
Tensor maxpool_forward(const Tensor& x, const PoolSpec& spec, PoolCache* cache);
Tensor maxpool_backward(const Tensor& dy, const PoolCache& cache);

struct BatchNormState {
  Tensor running_mean;  // (C)
  Tensor running_var;   // (C)
};

struct BatchNormCache {
  Tensor xhat;
  std::vector<double> mean, var;
};

inline constexpr double kBnEpsilon = 1e-5;
inline constexpr double kBnMomentum = 0.9;

// Train mode normalizes per channel over (batch, h, w) and folds the batch
// statistics into the running averages; infer mode uses the running stats.
// Training on a batch of one is rejected.
Tensor batchnorm_forward(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                         BatchNormState& state, bool train, BatchNormCache* cache);
void batchnorm_backward(const Tensor& dy, const Tensor& gamma, const BatchNormCache& cache,
                        Tensor* dx, Tensor* dgamma, Tensor* dbeta);

enum class Activation { Relu, Sigmoid, Tanh };

Tensor activation_forward(const Tensor& x, Activation kind);
// Needs the forward input and output; relu reads x, the squashers read y.
Tensor activation_backward(const Tensor& dy, const Tensor& x, const Tensor& y,
                           Activation kind);

double stable_sigmoid(double x);

}  // namespace atrc

#endif  // ATRC_NN_HPP_
