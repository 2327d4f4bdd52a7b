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

#ifndef ATRC_MODEL_HPP_
#define ATRC_MODEL_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "atrc/alphabet.hpp"
#include "atrc/image.hpp"
#include "atrc/lstm.hpp"
#include "atrc/nn.hpp"
#include "atrc/render.hpp"
#include "atrc/tensor.hpp"

namespace atrc {

struct StackItem {
  enum class Kind { Conv, Pool };
  Kind kind = Kind::Conv;
  ConvSpec conv;           // when kind == Conv
  bool batch_norm = false; // conv -> batchnorm -> relu
  PoolSpec pool;           // when kind == Pool
};

struct NetworkConfig {
  Mode mode = Mode::Scene;
  int input_h = 32;
  int input_w = 100;
  std::vector<StackItem> stack;
  int lstm_hidden = 256;
  int lstm_layers = 2;
  Alphabet alphabet;

  // Shape propagation through the conv stack.
  int seq_len() const;       // width of the final feature map
  int feature_dim() const;   // channels of the final feature map
  // Throws ConfigError unless the stack collapses height to exactly 1.
  void validate() const;

  std::string to_json() const;
  static NetworkConfig from_json(const std::string& text);
};

// The adopted conv stack: seven 3x3/2x2 conv layers in VGG style with
// rectangular windows in the 3rd and 4th pools so the feature map stays wide,
// batch norm on the two late 512-channel convs, relu after every conv.
// channel_div scales all channel counts down for desk-size experiments.
NetworkConfig default_config(Mode mode, Alphabet alphabet, int channel_div = 1,
                             int lstm_hidden = 256, int lstm_layers = 2);

// resize to the config dimensions (bilinear), mirror left-right so column
// order matches Arabic reading order, and scale bytes to [-1, 1].
Tensor preprocess(const GrayImage& img, int out_h, int out_w);
// Stacks preprocessed images into an (N, 1, H, W) batch.
Tensor make_batch(const std::vector<const GrayImage*>& images, int out_h, int out_w);

class Model {
 public:
  explicit Model(NetworkConfig cfg);

  void init_params(std::uint64_t seed);

  struct Workspace {
    bool train = false;
    std::vector<std::size_t> batch_shape;
    // Per stack block:
    std::vector<Tensor> inputs;     // input seen by block i
    std::vector<ConvCache> conv;
    std::vector<PoolCache> pool;
    std::vector<BatchNormCache> bn;
    std::vector<Tensor> pre_act;    // conv (+bn) output before relu
    std::vector<Tensor> post_act;   // after relu
    // Recurrent and projection stages, per batch item:
    std::vector<BiLstmStackCache> lstm;
    std::vector<Tensor> lstm_in;
    std::vector<Tensor> lstm_out;
  };

  // batch must be (N, 1, input_h, input_w); returns per-item (T, K+1) logits.
  std::vector<Tensor> forward(const Tensor& batch, bool train, Workspace& ws);
  // Accumulates parameter gradients; requires the workspace of a train-mode
  // forward pass on the same batch.
  void backward(const std::vector<Tensor>& dlogits, Workspace& ws);

  void zero_grad();

  struct NamedTensor {
    std::string name;
    Tensor* tensor;
    bool trainable;
  };
  std::vector<NamedTensor> named_tensors();
  std::vector<Parameter*> trainable_params();

  const NetworkConfig& config() const { return cfg_; }
  const Alphabet& alphabet() const { return cfg_.alphabet; }

  // Convenience single-image path: preprocess, forward in infer mode, decode
  // (greedy, or prefix beam search when beam_width > 0).
  std::string recognize(const GrayImage& img, std::size_t beam_width = 0);

 private:
  struct ConvBlock {
    Parameter w, b;
    Parameter gamma, beta;      // batch norm, when enabled
    BatchNormState bn_state;
  };

  NetworkConfig cfg_;
  std::vector<ConvBlock> conv_blocks_;  // parallel to cfg_.stack (empty for pools)
  BiLstmStack lstm_;
  Parameter proj_w_;  // (K+1, 2*hidden)
  Parameter proj_b_;  // (K+1)
};

struct CheckpointMeta {
  int epoch = 0;
  double loss = 0.0;
};

// Binary format: magic "ATRC", version u32, length-prefixed UTF-8 config
// block, tensor directory (name, dtype, rank, extents), then f32 payloads in
// directory order; all little-endian.
void save_checkpoint(const std::string& path, Model& model, const CheckpointMeta& meta);

struct LoadedCheckpoint {
  Model model;
  CheckpointMeta meta;
};
LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace atrc

#endif  // ATRC_MODEL_HPP_
