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

#include "atrc/lstm.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "atrc/error.hpp"
#include "atrc/nn.hpp"

namespace atrc {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using MapConstMat = Eigen::Map<const RowMat>;
using MapVec = Eigen::Map<Eigen::VectorXd>;
using MapConstVec = Eigen::Map<const Eigen::VectorXd>;

Tensor reverse_rows(const Tensor& seq) {
  const std::size_t t = seq.extent(0), d = seq.extent(1);
  Tensor out({t, d});
  for (std::size_t i = 0; i < t; ++i) {
    const double* src = seq.data() + (t - 1 - i) * d;
    double* dst = out.data() + i * d;
    std::copy(src, src + d, dst);
  }
  return out;
}

}  // namespace

LstmParams::LstmParams(int input_size_, int hidden_size_)
    : w({static_cast<std::size_t>(4 * hidden_size_), static_cast<std::size_t>(input_size_)}),
      r({static_cast<std::size_t>(4 * hidden_size_), static_cast<std::size_t>(hidden_size_)}),
      b({static_cast<std::size_t>(4 * hidden_size_)}),
      input_size(input_size_),
      hidden_size(hidden_size_) {
  if (input_size_ < 1 || hidden_size_ < 1)
    throw ConfigError("lstm sizes must be positive");
}

void LstmParams::init(Rng& rng, double range) {
  for (std::size_t i = 0; i < w.value.size(); ++i) w.value[i] = rng.uniform(-range, range);
  for (std::size_t i = 0; i < r.value.size(); ++i) r.value[i] = rng.uniform(-range, range);
  for (std::size_t i = 0; i < b.value.size(); ++i) b.value[i] = rng.uniform(-range, range);
  // Forget-gate bias starts open so gradients flow through time from step 1.
  const std::size_t h = static_cast<std::size_t>(hidden_size);
  for (std::size_t i = h; i < 2 * h; ++i) b.value[i] = 1.0;
}

void LstmParams::zero_grad() {
  w.grad.zero();
  r.grad.zero();
  b.grad.zero();
}

Tensor lstm_forward(const Tensor& seq, const LstmParams& params, LstmCache* cache) {
  if (seq.rank() != 2) throw ConfigError("lstm expects a (T, D) sequence, got " + seq.shape_str());
  const std::size_t t_len = seq.extent(0);
  const std::size_t d = seq.extent(1);
  const std::size_t h = static_cast<std::size_t>(params.hidden_size);
  if (d != static_cast<std::size_t>(params.input_size))
    throw ConfigError("lstm input size mismatch: sequence " + seq.shape_str() +
                      " vs params expecting D=" + std::to_string(params.input_size));
  if (t_len == 0) throw ConfigError("lstm sequence must be non-empty");

  // Input contribution for all steps at once: (T, 4H) = seq * W^T.
  Tensor pre({t_len, 4 * h});
  {
    MapConstMat xm(seq.data(), t_len, d);
    MapConstMat wm(params.w.value.data(), 4 * h, d);
    MapMat pm(pre.data(), t_len, 4 * h);
    pm.noalias() = xm * wm.transpose();
    for (std::size_t ti = 0; ti < t_len; ++ti) {
      double* row = pre.data() + ti * 4 * h;
      for (std::size_t k = 0; k < 4 * h; ++k) row[k] += params.b.value[k];
    }
  }

  Tensor gates({t_len, 4 * h});
  Tensor c({t_len, h});
  Tensor hid({t_len, h});
  Tensor tanh_c({t_len, h});

  MapConstMat rm(params.r.value.data(), 4 * h, h);
  Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd pre_t(4 * h);
  for (std::size_t ti = 0; ti < t_len; ++ti) {
    MapVec pre_row(pre.data() + ti * 4 * h, 4 * h);
    pre_t.noalias() = rm * h_prev;
    pre_t += pre_row;

    double* g_row = gates.data() + ti * 4 * h;
    double* c_row = c.data() + ti * h;
    double* h_row = hid.data() + ti * h;
    double* tc_row = tanh_c.data() + ti * h;
    const double* c_prev = ti > 0 ? c.data() + (ti - 1) * h : nullptr;
    for (std::size_t k = 0; k < h; ++k) {
      double ig = stable_sigmoid(pre_t[k]);
      double fg = stable_sigmoid(pre_t[h + k]);
      double og = stable_sigmoid(pre_t[2 * h + k]);
      double gg = std::tanh(pre_t[3 * h + k]);
      g_row[k] = ig;
      g_row[h + k] = fg;
      g_row[2 * h + k] = og;
      g_row[3 * h + k] = gg;
      double cv = fg * (c_prev ? c_prev[k] : 0.0) + ig * gg;
      c_row[k] = cv;
      double tc = std::tanh(cv);
      tc_row[k] = tc;
      h_row[k] = og * tc;
    }
    for (std::size_t k = 0; k < h; ++k) h_prev[k] = h_row[k];
  }

  if (cache) {
    cache->x = seq;
    cache->gates = std::move(gates);
    cache->c = std::move(c);
    cache->tanh_c = std::move(tanh_c);
    cache->h = hid;
  }
  return hid;
}

Tensor lstm_backward(const Tensor& dy, LstmParams& params, const LstmCache& cache) {
  const std::size_t t_len = cache.x.extent(0);
  const std::size_t d = cache.x.extent(1);
  const std::size_t h = static_cast<std::size_t>(params.hidden_size);
  if (dy.rank() != 2 || dy.extent(0) != t_len || dy.extent(1) != h)
    throw ConfigError("lstm backward shape mismatch: dy " + dy.shape_str() + " vs cache T=" +
                      std::to_string(t_len) + ", H=" + std::to_string(h));

  Tensor dx({t_len, d});
  Tensor dpre_all({t_len, 4 * h});

  MapConstMat rm(params.r.value.data(), 4 * h, h);
  Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(h);   // dL/dh_t from steps > t
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(h);   // dL/dc_t from steps > t
  Eigen::VectorXd dpre(4 * h);

  for (std::size_t ti = t_len; ti-- > 0;) {
    const double* g_row = cache.gates.data() + ti * 4 * h;
    const double* tc_row = cache.tanh_c.data() + ti * h;
    const double* c_prev = ti > 0 ? cache.c.data() + (ti - 1) * h : nullptr;
    const double* dy_row = dy.data() + ti * h;

    for (std::size_t k = 0; k < h; ++k) {
      double dh = dy_row[k] + dh_next[k];
      double ig = g_row[k], fg = g_row[h + k], og = g_row[2 * h + k], gg = g_row[3 * h + k];
      double tc = tc_row[k];
      double do_ = dh * tc;
      double dc = dh * og * (1.0 - tc * tc) + dc_next[k];
      double di = dc * gg;
      double dg = dc * ig;
      double df = dc * (c_prev ? c_prev[k] : 0.0);
      dc_next[k] = dc * fg;
      dpre[k] = di * ig * (1.0 - ig);
      dpre[h + k] = df * fg * (1.0 - fg);
      dpre[2 * h + k] = do_ * og * (1.0 - og);
      dpre[3 * h + k] = dg * (1.0 - gg * gg);
    }

    double* dpre_row = dpre_all.data() + ti * 4 * h;
    for (std::size_t k = 0; k < 4 * h; ++k) dpre_row[k] = dpre[k];

    // Recurrent-path gradients flow to h_{t-1}.
    dh_next.noalias() = rm.transpose() * dpre;

    if (ti > 0) {
      MapConstVec h_prev(cache.h.data() + (ti - 1) * h, h);
      MapMat drm(params.r.grad.data(), 4 * h, h);
      drm.noalias() += dpre * h_prev.transpose();
    }
    MapVec db(params.b.grad.data(), 4 * h);
    db += dpre;
  }

  // Input-path gradients for all steps at once.
  {
    MapConstMat dpm(dpre_all.data(), t_len, 4 * h);
    MapConstMat xm(cache.x.data(), t_len, d);
    MapMat dwm(params.w.grad.data(), 4 * h, d);
    dwm.noalias() += dpm.transpose() * xm;
    MapConstMat wm(params.w.value.data(), 4 * h, d);
    MapMat dxm(dx.data(), t_len, d);
    dxm.noalias() = dpm * wm;
  }
  return dx;
}

Tensor bilstm_forward(const Tensor& seq, const BiLstmLayer& layer, BiLstmCache* cache) {
  if (layer.fwd.hidden_size != layer.bwd.hidden_size)
    throw ConfigError("bilstm directions must share hidden size");
  const std::size_t h = static_cast<std::size_t>(layer.fwd.hidden_size);
  const std::size_t t_len = seq.extent(0);

  Tensor out_f = lstm_forward(seq, layer.fwd, cache ? &cache->fwd : nullptr);
  Tensor out_b_rev = lstm_forward(reverse_rows(seq), layer.bwd, cache ? &cache->bwd : nullptr);

  Tensor out({t_len, 2 * h});
  for (std::size_t ti = 0; ti < t_len; ++ti) {
    double* dst = out.data() + ti * 2 * h;
    const double* fsrc = out_f.data() + ti * h;
    const double* bsrc = out_b_rev.data() + (t_len - 1 - ti) * h;
    std::copy(fsrc, fsrc + h, dst);
    std::copy(bsrc, bsrc + h, dst + h);
  }
  return out;
}

Tensor bilstm_backward(const Tensor& dy, BiLstmLayer& layer, const BiLstmCache& cache) {
  const std::size_t h = static_cast<std::size_t>(layer.fwd.hidden_size);
  const std::size_t t_len = cache.fwd.x.extent(0);
  if (dy.extent(0) != t_len || dy.extent(1) != 2 * h)
    throw ConfigError("bilstm backward shape mismatch: dy " + dy.shape_str());

  Tensor dy_f({t_len, h});
  Tensor dy_b({t_len, h});  // in reversed time, matching the cached run
  for (std::size_t ti = 0; ti < t_len; ++ti) {
    const double* src = dy.data() + ti * 2 * h;
    std::copy(src, src + h, dy_f.data() + ti * h);
    std::copy(src + h, src + 2 * h, dy_b.data() + (t_len - 1 - ti) * h);
  }

  // Direction order is fixed (forward then backward) so gradient
  // accumulation is deterministic.
  Tensor dx = lstm_backward(dy_f, layer.fwd, cache.fwd);
  Tensor dx_rev = lstm_backward(dy_b, layer.bwd, cache.bwd);
  const std::size_t d = dx.extent(1);
  for (std::size_t ti = 0; ti < t_len; ++ti) {
    const double* src = dx_rev.data() + (t_len - 1 - ti) * d;
    double* dst = dx.data() + ti * d;
    for (std::size_t k = 0; k < d; ++k) dst[k] += src[k];
  }
  return dx;
}

BiLstmStack::BiLstmStack(int input_size, int hidden_size, int num_layers) {
  if (num_layers < 1) throw ConfigError("stack needs at least one layer");
  layers.reserve(num_layers);
  int in = input_size;
  for (int i = 0; i < num_layers; ++i) {
    layers.emplace_back(in, hidden_size);
    in = 2 * hidden_size;
  }
}

void BiLstmStack::init(Rng& rng, double range) {
  for (auto& layer : layers) {
    layer.fwd.init(rng, range);
    layer.bwd.init(rng, range);
  }
}

void BiLstmStack::zero_grad() {
  for (auto& layer : layers) {
    layer.fwd.zero_grad();
    layer.bwd.zero_grad();
  }
}

Tensor bilstm_stack_forward(const Tensor& seq, const BiLstmStack& stack,
                            BiLstmStackCache* cache) {
  if (stack.layers.empty()) throw ConfigError("empty bilstm stack");
  if (cache) {
    cache->per_layer.assign(stack.layers.size(), BiLstmCache{});
    cache->inputs.clear();
  }
  Tensor cur = seq;
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    if (cache) cache->inputs.push_back(cur);
    cur = bilstm_forward(cur, stack.layers[i], cache ? &cache->per_layer[i] : nullptr);
  }
  return cur;
}

Tensor bilstm_stack_backward(const Tensor& dy, BiLstmStack& stack,
                             const BiLstmStackCache& cache) {
  Tensor cur = dy;
  for (std::size_t i = stack.layers.size(); i-- > 0;) {
    cur = bilstm_backward(cur, stack.layers[i], cache.per_layer[i]);
  }
  return cur;
}

}  // namespace atrc
