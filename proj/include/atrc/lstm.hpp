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

#ifndef ATRC_LSTM_HPP_
#define ATRC_LSTM_HPP_

#include <cstdint>
#include <vector>

#include "atrc/rng.hpp"
#include "atrc/tensor.hpp"

namespace atrc {

// Plain LSTM (no peepholes, no projection). Sequences are (T, D) tensors.
// Gate rows are packed input/forget/output/candidate, so w is (4H, D),
// r is (4H, H) and b is (4H).
struct LstmParams {
  Parameter w;
  Parameter r;
  Parameter b;
  int input_size = 0;
  int hidden_size = 0;

  LstmParams() = default;
  LstmParams(int input_size, int hidden_size);

  // uniform(-range, range) with the forget-gate bias pinned to 1.
  void init(Rng& rng, double range = 0.08);
  void zero_grad();
};

struct LstmCache {
  Tensor x;       // (T, D)
  Tensor gates;   // (T, 4H) post-nonlinearity: i, f, o, g
  Tensor c;       // (T, H)
  Tensor h;       // (T, H)
  Tensor tanh_c;  // (T, H)
};

// h_t = o_t * tanh(c_t), c_t = f_t * c_{t-1} + i_t * g_t, zero initial state.
Tensor lstm_forward(const Tensor& seq, const LstmParams& params, LstmCache* cache);

// Exact gradients of lstm_forward, accumulated into params' grads; returns
// the gradient w.r.t. the input sequence.
Tensor lstm_backward(const Tensor& dy, LstmParams& params, const LstmCache& cache);

struct BiLstmLayer {
  LstmParams fwd;
  LstmParams bwd;

  BiLstmLayer() = default;
  BiLstmLayer(int input_size, int hidden_size)
      : fwd(input_size, hidden_size), bwd(input_size, hidden_size) {}
  int output_size() const { return 2 * fwd.hidden_size; }
};

struct BiLstmCache {
  LstmCache fwd;
  LstmCache bwd;  // runs on the reversed sequence
};

// Output frame t is [forward_h_t ; backward_h_t] where the backward half is
// computed on the reversed sequence and re-reversed.
Tensor bilstm_forward(const Tensor& seq, const BiLstmLayer& layer, BiLstmCache* cache);
Tensor bilstm_backward(const Tensor& dy, BiLstmLayer& layer, const BiLstmCache& cache);

struct BiLstmStack {
  std::vector<BiLstmLayer> layers;

  // Layer 0 reads input_size, deeper layers read 2*hidden of the previous.
  BiLstmStack() = default;
  BiLstmStack(int input_size, int hidden_size, int num_layers);
  void init(Rng& rng, double range = 0.08);
  void zero_grad();
};

struct BiLstmStackCache {
  std::vector<BiLstmCache> per_layer;
  std::vector<Tensor> inputs;  // the input each layer saw
};

Tensor bilstm_stack_forward(const Tensor& seq, const BiLstmStack& stack,
                            BiLstmStackCache* cache);
Tensor bilstm_stack_backward(const Tensor& dy, BiLstmStack& stack,
                             const BiLstmStackCache& cache);

}  // namespace atrc

#endif  // ATRC_LSTM_HPP_
