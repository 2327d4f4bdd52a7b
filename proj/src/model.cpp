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

#include "atrc/model.hpp"

#include <cmath>

#include <json.hpp>

#include "atrc/ctc.hpp"
#include "atrc/error.hpp"
#include "atrc/unicode.hpp"

namespace atrc {

using json = nlohmann::json;

namespace {

struct Propagated {
  int h, w, c;
};

Propagated propagate(const NetworkConfig& cfg) {
  int h = cfg.input_h, w = cfg.input_w, c = 1;
  for (const StackItem& item : cfg.stack) {
    if (item.kind == StackItem::Kind::Conv) {
      h = conv_out_extent(h, item.conv.kh, item.conv.sh, item.conv.ph);
      w = conv_out_extent(w, item.conv.kw, item.conv.sw, item.conv.pw);
      c = item.conv.out_channels;
    } else {
      h = conv_out_extent(h, item.pool.kh, item.pool.sh, item.pool.ph);
      w = conv_out_extent(w, item.pool.kw, item.pool.sw, item.pool.pw);
    }
  }
  return {h, w, c};
}

}  // namespace

int NetworkConfig::seq_len() const { return propagate(*this).w; }
int NetworkConfig::feature_dim() const { return propagate(*this).c; }

void NetworkConfig::validate() const {
  if (input_h < 1 || input_w < 1) throw ConfigError("input dimensions must be positive");
  if (alphabet.num_classes() == 0) throw ConfigError("alphabet must be non-empty");
  if (lstm_hidden < 1 || lstm_layers < 1)
    throw ConfigError("recurrent stack sizes must be positive");
  Propagated p = propagate(*this);
  if (p.h != 1)
    throw ConfigError("conv stack must collapse height to exactly 1, got " +
                      std::to_string(p.h) + " for input " + std::to_string(input_h) + "x" +
                      std::to_string(input_w));
  if (p.w < 1) throw ConfigError("conv stack leaves an empty sequence");
}

NetworkConfig default_config(Mode mode, Alphabet alphabet, int channel_div,
                             int lstm_hidden, int lstm_layers) {
  if (channel_div < 1) throw ConfigError("channel divisor must be >= 1");
  auto ch = [&](int base) { return std::max(1, base / channel_div); };
  auto conv = [](int k, int c, int p) {
    StackItem item;
    item.kind = StackItem::Kind::Conv;
    item.conv = ConvSpec{k, k, 1, 1, p, p, c};
    return item;
  };
  auto pool = [](int kh, int kw, int sh, int sw) {
    StackItem item;
    item.kind = StackItem::Kind::Pool;
    item.pool = PoolSpec{kh, kw, sh, sw, 0, 0};
    return item;
  };

  NetworkConfig cfg;
  cfg.mode = mode;
  cfg.input_h = 32;
  cfg.input_w = mode == Mode::Scene ? 100 : 504;
  cfg.lstm_hidden = lstm_hidden;
  cfg.lstm_layers = lstm_layers;
  cfg.alphabet = std::move(alphabet);

  cfg.stack.push_back(conv(3, ch(64), 1));
  cfg.stack.push_back(pool(2, 2, 2, 2));
  cfg.stack.push_back(conv(3, ch(128), 1));
  cfg.stack.push_back(pool(2, 2, 2, 2));
  cfg.stack.push_back(conv(3, ch(256), 1));
  cfg.stack.push_back(conv(3, ch(256), 1));
  cfg.stack.push_back(pool(2, 1, 2, 1));  // rectangular: keep the map wide
  StackItem c5 = conv(3, ch(512), 1);
  c5.batch_norm = true;
  cfg.stack.push_back(c5);
  StackItem c6 = conv(3, ch(512), 1);
  c6.batch_norm = true;
  cfg.stack.push_back(c6);
  cfg.stack.push_back(pool(2, 1, 2, 1));
  cfg.stack.push_back(conv(2, ch(512), 0));

  cfg.validate();
  return cfg;
}

std::string NetworkConfig::to_json() const {
  json j;
  j["mode"] = mode_name(mode);
  j["input_h"] = input_h;
  j["input_w"] = input_w;
  j["lstm_hidden"] = lstm_hidden;
  j["lstm_layers"] = lstm_layers;
  j["alphabet"] = encode_utf8(alphabet.classes());
  j["stack"] = json::array();
  for (const StackItem& item : stack) {
    json ji;
    if (item.kind == StackItem::Kind::Conv) {
      ji["kind"] = "conv";
      ji["kh"] = item.conv.kh;
      ji["kw"] = item.conv.kw;
      ji["sh"] = item.conv.sh;
      ji["sw"] = item.conv.sw;
      ji["ph"] = item.conv.ph;
      ji["pw"] = item.conv.pw;
      ji["out_channels"] = item.conv.out_channels;
      ji["batch_norm"] = item.batch_norm;
    } else {
      ji["kind"] = "pool";
      ji["kh"] = item.pool.kh;
      ji["kw"] = item.pool.kw;
      ji["sh"] = item.pool.sh;
      ji["sw"] = item.pool.sw;
      ji["ph"] = item.pool.ph;
      ji["pw"] = item.pool.pw;
    }
    j["stack"].push_back(ji);
  }
  return j.dump();
}

NetworkConfig NetworkConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("corrupt config block: ") + e.what());
  }
  try {
    NetworkConfig cfg;
    cfg.mode = parse_mode(j.at("mode").get<std::string>());
    cfg.input_h = j.at("input_h").get<int>();
    cfg.input_w = j.at("input_w").get<int>();
    cfg.lstm_hidden = j.at("lstm_hidden").get<int>();
    cfg.lstm_layers = j.at("lstm_layers").get<int>();
    cfg.alphabet = Alphabet(decode_utf8(j.at("alphabet").get<std::string>()));
    for (const json& ji : j.at("stack")) {
      StackItem item;
      if (ji.at("kind") == "conv") {
        item.kind = StackItem::Kind::Conv;
        item.conv = ConvSpec{ji.at("kh"), ji.at("kw"), ji.at("sh"), ji.at("sw"),
                             ji.at("ph"), ji.at("pw"), ji.at("out_channels")};
        item.batch_norm = ji.at("batch_norm").get<bool>();
      } else {
        item.kind = StackItem::Kind::Pool;
        item.pool = PoolSpec{ji.at("kh"), ji.at("kw"), ji.at("sh"),
                             ji.at("sw"), ji.at("ph"), ji.at("pw")};
      }
      cfg.stack.push_back(item);
    }
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw DataError(std::string("corrupt config block: ") + e.what());
  }
}

Tensor preprocess(const GrayImage& img, int out_h, int out_w) {
  if (img.h <= 0 || img.w <= 0) throw DataError("cannot preprocess an empty image");
  GrayImage resized =
      (img.h == out_h && img.w == out_w) ? img : resize_bilinear(img, out_h, out_w);
  Tensor out({static_cast<std::size_t>(out_h), static_cast<std::size_t>(out_w)});
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      // Mirror left-right: Arabic reads right-to-left, so the first column
      // the recurrent stack sees is the first letter read.
      double v = resized.at(y, out_w - 1 - x);
      out.at2(y, x) = v / 127.5 - 1.0;
    }
  }
  return out;
}

Tensor make_batch(const std::vector<const GrayImage*>& images, int out_h, int out_w) {
  if (images.empty()) throw DataError("empty batch");
  Tensor batch({images.size(), 1, static_cast<std::size_t>(out_h),
                static_cast<std::size_t>(out_w)});
  const std::size_t plane = static_cast<std::size_t>(out_h) * out_w;
  for (std::size_t i = 0; i < images.size(); ++i) {
    Tensor t = preprocess(*images[i], out_h, out_w);
    std::copy(t.data(), t.data() + plane, batch.data() + i * plane);
  }
  return batch;
}

Model::Model(NetworkConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  int c_in = 1;
  for (const StackItem& item : cfg_.stack) {
    ConvBlock block;
    if (item.kind == StackItem::Kind::Conv) {
      const ConvSpec& s = item.conv;
      block.w = Parameter({static_cast<std::size_t>(s.out_channels),
                           static_cast<std::size_t>(c_in), static_cast<std::size_t>(s.kh),
                           static_cast<std::size_t>(s.kw)});
      block.b = Parameter({static_cast<std::size_t>(s.out_channels)});
      if (item.batch_norm) {
        block.gamma = Parameter({static_cast<std::size_t>(s.out_channels)});
        block.gamma.value.fill(1.0);
        block.beta = Parameter({static_cast<std::size_t>(s.out_channels)});
        block.bn_state.running_mean = Tensor({static_cast<std::size_t>(s.out_channels)});
        block.bn_state.running_var = Tensor({static_cast<std::size_t>(s.out_channels)});
        block.bn_state.running_var.fill(1.0);
      }
      c_in = s.out_channels;
    }
    conv_blocks_.push_back(std::move(block));
  }
  lstm_ = BiLstmStack(cfg_.feature_dim(), cfg_.lstm_hidden, cfg_.lstm_layers);
  const std::size_t k1 = cfg_.alphabet.num_classes() + 1;
  proj_w_ = Parameter({k1, static_cast<std::size_t>(2 * cfg_.lstm_hidden)});
  proj_b_ = Parameter({k1});
}

void Model::init_params(std::uint64_t seed) {
  Rng rng(hash_tag(seed, "model-init"));
  auto he_uniform = [&](Tensor& t, std::size_t fan_in) {
    double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-limit, limit);
  };
  for (std::size_t i = 0; i < cfg_.stack.size(); ++i) {
    if (cfg_.stack[i].kind != StackItem::Kind::Conv) continue;
    ConvBlock& block = conv_blocks_[i];
    const auto& ws = block.w.value.shape();
    he_uniform(block.w.value, ws[1] * ws[2] * ws[3]);
    block.b.value.zero();
    if (cfg_.stack[i].batch_norm) {
      block.gamma.value.fill(1.0);
      block.beta.value.zero();
      block.bn_state.running_mean.zero();
      block.bn_state.running_var.fill(1.0);
    }
  }
  lstm_.init(rng);
  he_uniform(proj_w_.value, 2 * cfg_.lstm_hidden);
  proj_b_.value.zero();
}

std::vector<Tensor> Model::forward(const Tensor& batch, bool train, Workspace& ws) {
  if (batch.rank() != 4 || batch.extent(1) != 1 ||
      batch.extent(2) != static_cast<std::size_t>(cfg_.input_h) ||
      batch.extent(3) != static_cast<std::size_t>(cfg_.input_w)) {
    throw ConfigError("config mismatch: batch " + batch.shape_str() +
                      " does not match model input (N, 1, " +
                      std::to_string(cfg_.input_h) + ", " + std::to_string(cfg_.input_w) +
                      ")");
  }
  const std::size_t n = batch.extent(0);
  ws.train = train;
  ws.batch_shape = batch.shape();
  const std::size_t blocks = cfg_.stack.size();
  ws.inputs.assign(blocks, Tensor{});
  ws.conv.assign(blocks, ConvCache{});
  ws.pool.assign(blocks, PoolCache{});
  ws.bn.assign(blocks, BatchNormCache{});
  ws.pre_act.assign(blocks, Tensor{});
  ws.post_act.assign(blocks, Tensor{});

  Tensor x = batch;
  for (std::size_t i = 0; i < blocks; ++i) {
    const StackItem& item = cfg_.stack[i];
    if (item.kind == StackItem::Kind::Conv) {
      ConvBlock& block = conv_blocks_[i];
      ws.inputs[i] = x;
      Tensor y = conv2d_forward(x, block.w.value, block.b.value, item.conv, &ws.conv[i]);
      if (item.batch_norm) {
        y = batchnorm_forward(y, block.gamma.value, block.beta.value, block.bn_state,
                              train, train ? &ws.bn[i] : nullptr);
      }
      ws.pre_act[i] = y;
      Tensor z = activation_forward(y, Activation::Relu);
      ws.post_act[i] = z;
      x = std::move(z);
    } else {
      ws.inputs[i] = x;
      x = maxpool_forward(x, item.pool, &ws.pool[i]);
    }
  }

  const std::size_t c = x.extent(1), fh = x.extent(2), fw = x.extent(3);
  if (fh != 1) throw ConfigError("conv stack did not collapse height to 1");

  // Column-wise split: one feature vector per width position, left to right
  // (reading order on the flipped image).
  ws.lstm.assign(n, BiLstmStackCache{});
  ws.lstm_in.assign(n, Tensor{});
  ws.lstm_out.assign(n, Tensor{});
  const std::size_t k1 = cfg_.alphabet.num_classes() + 1;
  const std::size_t h2 = static_cast<std::size_t>(2 * cfg_.lstm_hidden);
  std::vector<Tensor> logits(n);
  for (std::size_t ni = 0; ni < n; ++ni) {
    Tensor seq({fw, c});
    for (std::size_t t = 0; t < fw; ++t)
      for (std::size_t ci = 0; ci < c; ++ci) seq.at2(t, ci) = x.at4(ni, ci, 0, t);
    ws.lstm_in[ni] = seq;
    Tensor out = bilstm_stack_forward(seq, lstm_, &ws.lstm[ni]);
    ws.lstm_out[ni] = out;

    Tensor lg({fw, k1});
    for (std::size_t t = 0; t < fw; ++t) {
      const double* hrow = out.data() + t * h2;
      double* lrow = lg.data() + t * k1;
      for (std::size_t j = 0; j < k1; ++j) {
        const double* wrow = proj_w_.value.data() + j * h2;
        double acc = proj_b_.value[j];
        for (std::size_t m = 0; m < h2; ++m) acc += wrow[m] * hrow[m];
        lrow[j] = acc;
      }
    }
    logits[ni] = std::move(lg);
  }
  return logits;
}

void Model::backward(const std::vector<Tensor>& dlogits, Workspace& ws) {
  if (!ws.train) throw ConfigError("backward requires a train-mode forward pass");
  const std::size_t n = ws.batch_shape[0];
  if (dlogits.size() != n) throw ConfigError("backward batch size mismatch");

  const std::size_t k1 = cfg_.alphabet.num_classes() + 1;
  const std::size_t h2 = static_cast<std::size_t>(2 * cfg_.lstm_hidden);
  const std::size_t fw = ws.lstm_in[0].extent(0);
  const std::size_t c = ws.lstm_in[0].extent(1);
  Tensor dmap({n, c, 1, fw});

  for (std::size_t ni = 0; ni < n; ++ni) {
    const Tensor& dlg = dlogits[ni];
    if (dlg.extent(0) != fw || dlg.extent(1) != k1)
      throw ConfigError("dlogits shape mismatch: " + dlg.shape_str());
    const Tensor& hseq = ws.lstm_out[ni];
    Tensor dh({fw, h2});
    for (std::size_t t = 0; t < fw; ++t) {
      const double* drow = dlg.data() + t * k1;
      const double* hrow = hseq.data() + t * h2;
      double* dhrow = dh.data() + t * h2;
      for (std::size_t j = 0; j < k1; ++j) {
        double d = drow[j];
        if (d == 0.0) continue;
        double* dwrow = proj_w_.grad.data() + j * h2;
        const double* wrow = proj_w_.value.data() + j * h2;
        proj_b_.grad[j] += d;
        for (std::size_t m = 0; m < h2; ++m) {
          dwrow[m] += d * hrow[m];
          dhrow[m] += d * wrow[m];
        }
      }
    }
    Tensor dseq = bilstm_stack_backward(dh, lstm_, ws.lstm[ni]);
    for (std::size_t t = 0; t < fw; ++t)
      for (std::size_t ci = 0; ci < c; ++ci) dmap.at4(ni, ci, 0, t) = dseq.at2(t, ci);
  }

  // Walk the conv stack backwards.
  Tensor dx = std::move(dmap);
  for (std::size_t i = cfg_.stack.size(); i-- > 0;) {
    const StackItem& item = cfg_.stack[i];
    if (item.kind == StackItem::Kind::Conv) {
      ConvBlock& block = conv_blocks_[i];
      Tensor dpre = activation_backward(dx, ws.pre_act[i], ws.post_act[i], Activation::Relu);
      if (item.batch_norm) {
        Tensor dbn(dpre.shape());
        batchnorm_backward(dpre, block.gamma.value, ws.bn[i], &dbn, &block.gamma.grad,
                           &block.beta.grad);
        dpre = std::move(dbn);
      }
      Tensor dinput(ws.inputs[i].shape());
      conv2d_backward(dpre, block.w.value, item.conv, ws.inputs[i].shape(), ws.conv[i],
                      &dinput, &block.w.grad, &block.b.grad);
      dx = std::move(dinput);
    } else {
      dx = maxpool_backward(dx, ws.pool[i]);
    }
  }
}

void Model::zero_grad() {
  for (Parameter* p : trainable_params()) p->grad.zero();
}

std::vector<Model::NamedTensor> Model::named_tensors() {
  std::vector<NamedTensor> out;
  for (std::size_t i = 0; i < cfg_.stack.size(); ++i) {
    if (cfg_.stack[i].kind != StackItem::Kind::Conv) continue;
    ConvBlock& block = conv_blocks_[i];
    std::string prefix = "conv" + std::to_string(i);
    out.push_back({prefix + ".w", &block.w.value, true});
    out.push_back({prefix + ".b", &block.b.value, true});
    if (cfg_.stack[i].batch_norm) {
      out.push_back({prefix + ".gamma", &block.gamma.value, true});
      out.push_back({prefix + ".beta", &block.beta.value, true});
      out.push_back({prefix + ".running_mean", &block.bn_state.running_mean, false});
      out.push_back({prefix + ".running_var", &block.bn_state.running_var, false});
    }
  }
  for (std::size_t i = 0; i < lstm_.layers.size(); ++i) {
    std::string prefix = "lstm" + std::to_string(i);
    BiLstmLayer& layer = lstm_.layers[i];
    out.push_back({prefix + ".fwd.w", &layer.fwd.w.value, true});
    out.push_back({prefix + ".fwd.r", &layer.fwd.r.value, true});
    out.push_back({prefix + ".fwd.b", &layer.fwd.b.value, true});
    out.push_back({prefix + ".bwd.w", &layer.bwd.w.value, true});
    out.push_back({prefix + ".bwd.r", &layer.bwd.r.value, true});
    out.push_back({prefix + ".bwd.b", &layer.bwd.b.value, true});
  }
  out.push_back({"proj.w", &proj_w_.value, true});
  out.push_back({"proj.b", &proj_b_.value, true});
  return out;
}

std::vector<Parameter*> Model::trainable_params() {
  std::vector<Parameter*> out;
  for (std::size_t i = 0; i < cfg_.stack.size(); ++i) {
    if (cfg_.stack[i].kind != StackItem::Kind::Conv) continue;
    ConvBlock& block = conv_blocks_[i];
    out.push_back(&block.w);
    out.push_back(&block.b);
    if (cfg_.stack[i].batch_norm) {
      out.push_back(&block.gamma);
      out.push_back(&block.beta);
    }
  }
  for (BiLstmLayer& layer : lstm_.layers) {
    out.push_back(&layer.fwd.w);
    out.push_back(&layer.fwd.r);
    out.push_back(&layer.fwd.b);
    out.push_back(&layer.bwd.w);
    out.push_back(&layer.bwd.r);
    out.push_back(&layer.bwd.b);
  }
  out.push_back(&proj_w_);
  out.push_back(&proj_b_);
  return out;
}

std::string Model::recognize(const GrayImage& img, std::size_t beam_width) {
  Tensor t = preprocess(img, cfg_.input_h, cfg_.input_w);
  Tensor batch({1, 1, t.extent(0), t.extent(1)});
  std::copy(t.data(), t.data() + t.size(), batch.data());
  Workspace ws;
  std::vector<Tensor> logits = forward(batch, false, ws);
  std::vector<int> indices =
      beam_width > 0 ? beam_decode(logits[0], beam_width) : greedy_decode(logits[0]);
  return encode_utf8(cfg_.alphabet.decode(indices));
}

}  // namespace atrc
