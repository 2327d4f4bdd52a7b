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

#include "atrc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "atrc/corpus.hpp"
#include "atrc/ctc.hpp"
#include "atrc/error.hpp"
#include "atrc/eval.hpp"
#include "atrc/rng.hpp"
#include "atrc/unicode.hpp"

namespace atrc {

void adadelta_update(std::span<double> value, std::span<const double> grad,
                     std::span<double> eg2, std::span<double> edx2, double rho,
                     double epsilon) {
  for (std::size_t i = 0; i < value.size(); ++i) {
    double g = grad[i];
    eg2[i] = rho * eg2[i] + (1.0 - rho) * g * g;
    double dx = -std::sqrt(edx2[i] + epsilon) / std::sqrt(eg2[i] + epsilon) * g;
    edx2[i] = rho * edx2[i] + (1.0 - rho) * dx * dx;
    value[i] += dx;
  }
}

Adadelta::Adadelta(std::vector<Parameter*> params, double rho, double epsilon)
    : params_(std::move(params)), rho_(rho), epsilon_(epsilon) {
  eg2_.reserve(params_.size());
  edx2_.reserve(params_.size());
  for (Parameter* p : params_) {
    eg2_.push_back(Tensor::zeros_like(p->value));
    edx2_.push_back(Tensor::zeros_like(p->value));
  }
}

void Adadelta::step() {
  for (std::size_t pi = 0; pi < params_.size(); ++pi) {
    const Tensor& g = params_[pi]->grad;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!std::isfinite(g[i])) {
        throw NumericError("non-finite gradient in parameter " + std::to_string(pi) +
                           " at element " + std::to_string(i) + ": " +
                           std::to_string(g[i]));
      }
    }
  }
  for (std::size_t pi = 0; pi < params_.size(); ++pi) {
    Parameter* p = params_[pi];
    adadelta_update({p->value.data(), p->value.size()}, {p->grad.data(), p->grad.size()},
                    {eg2_[pi].data(), eg2_[pi].size()},
                    {edx2_[pi].data(), edx2_[pi].size()}, rho_, epsilon_);
    p->grad.zero();
  }
}

LoadedCorpus load_corpus(const std::string& manifest_file) {
  CorpusManifest manifest = load_manifest(manifest_file);
  std::string dir = std::filesystem::path(manifest_file).parent_path().string();
  if (dir.empty()) dir = ".";
  LoadedCorpus corpus;
  corpus.images.reserve(manifest.records.size());
  corpus.labels.reserve(manifest.records.size());
  if (!manifest.records.empty()) corpus.mode = manifest.records.front().mode;
  for (const ManifestRecord& rec : manifest.records) {
    corpus.images.push_back(read_pgm(dir + "/" + rec.path));
    corpus.labels.push_back(rec.label);
  }
  return corpus;
}

namespace {

struct EncodedCorpus {
  std::vector<std::vector<int>> targets;  // parallel to corpus images
  std::vector<std::size_t> usable;        // indices of feasible samples
  std::size_t skipped = 0;
};

EncodedCorpus encode_corpus(const Model& model, const LoadedCorpus& corpus,
                            std::size_t seq_len) {
  EncodedCorpus out;
  out.targets.reserve(corpus.labels.size());
  std::u32string missing;
  for (const std::string& label : corpus.labels) {
    std::u32string norm = shaper::normalize_label(decode_utf8(label));
    std::vector<int> target;
    for (char32_t cp : norm) {
      int idx = model.alphabet().index_of(cp);
      if (idx < 0) {
        if (missing.find(cp) == std::u32string::npos) missing.push_back(cp);
      } else {
        target.push_back(idx);
      }
    }
    out.targets.push_back(std::move(target));
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "corpus characters missing from the model alphabet:";
    for (char32_t cp : missing) msg << " '" << encode_utf8(cp) << "'";
    throw DataError(msg.str());
  }
  for (std::size_t i = 0; i < out.targets.size(); ++i) {
    if (!out.targets[i].empty() &&
        ctc_feasible(seq_len, out.targets[i])) {
      out.usable.push_back(i);
    } else {
      ++out.skipped;
    }
  }
  return out;
}

struct ValScores {
  double crr = 0.0;
  double wrr = 0.0;
};

ValScores validate(Model& model, const LoadedCorpus& val, int batch) {
  if (val.images.empty()) return {std::nan(""), std::nan("")};
  const NetworkConfig& cfg = model.config();
  std::vector<EvalPair> pairs;
  pairs.reserve(val.images.size());
  Model::Workspace ws;
  for (std::size_t start = 0; start < val.images.size();
       start += static_cast<std::size_t>(batch)) {
    std::size_t end = std::min(val.images.size(), start + static_cast<std::size_t>(batch));
    std::vector<const GrayImage*> imgs;
    for (std::size_t i = start; i < end; ++i) imgs.push_back(&val.images[i]);
    Tensor batch_tensor = make_batch(imgs, cfg.input_h, cfg.input_w);
    std::vector<Tensor> logits = model.forward(batch_tensor, false, ws);
    for (std::size_t i = start; i < end; ++i) {
      EvalPair pair;
      pair.gt = shaper::normalize_label(decode_utf8(val.labels[i]));
      pair.rt = model.alphabet().decode(greedy_decode(logits[i - start]));
      pairs.push_back(std::move(pair));
    }
  }
  Granularity g = val.mode == Mode::Video ? Granularity::Line : Granularity::Word;
  EvalReport report = evaluate(pairs, g);
  return {report.crr, report.wrr};
}

void clip_gradients(std::vector<Parameter*>& params, double max_norm) {
  double sq = 0.0;
  for (Parameter* p : params)
    for (std::size_t i = 0; i < p->grad.size(); ++i) sq += p->grad[i] * p->grad[i];
  double norm = std::sqrt(sq);
  if (norm <= max_norm || norm == 0.0) return;
  double scale = max_norm / norm;
  for (Parameter* p : params)
    for (std::size_t i = 0; i < p->grad.size(); ++i) p->grad[i] *= scale;
}

}  // namespace

TrainResult train(Model& model, const LoadedCorpus& train_corpus,
                  const LoadedCorpus& val_corpus, const HyperParams& hp) {
  if (train_corpus.images.empty()) throw DataError("training corpus is empty");
  if (hp.batch < 1) throw ConfigError("batch size must be at least 1");
  if (hp.epochs < 0) throw ConfigError("epoch count must be non-negative");

  const NetworkConfig& cfg = model.config();
  const std::size_t seq_len = static_cast<std::size_t>(cfg.seq_len());

  EncodedCorpus encoded = encode_corpus(model, train_corpus, seq_len);
  TrainResult result;
  result.skipped_infeasible = encoded.skipped;
  if (encoded.skipped > 0) {
    double frac =
        static_cast<double>(encoded.skipped) / static_cast<double>(train_corpus.images.size());
    std::cerr << "warning: skipping " << encoded.skipped
              << " sample(s) infeasible at sequence length " << seq_len << "\n";
    if (frac > 0.01) {
      throw DataError("more than 1% of corpus samples (" + std::to_string(encoded.skipped) +
                      " of " + std::to_string(train_corpus.images.size()) +
                      ") are infeasible at sequence length " + std::to_string(seq_len));
    }
  }
  if (encoded.usable.empty()) throw DataError("no feasible training samples");

  std::ofstream log_file;
  if (!hp.log_path.empty()) {
    log_file.open(hp.log_path, std::ios::binary);
    if (!log_file) throw DataError("cannot open training log: " + hp.log_path);
  }

  std::vector<Parameter*> params = model.trainable_params();
  Adadelta optimizer(params);
  Model::Workspace ws;

  if (hp.epochs == 0 && !hp.checkpoint_out.empty()) {
    save_checkpoint(hp.checkpoint_out, model, CheckpointMeta{0, 0.0});
  }

  for (int epoch = 1; epoch <= hp.epochs; ++epoch) {
    std::vector<std::size_t> order = encoded.usable;
    Rng shuffle_rng(hash_combine(hash_tag(hp.seed, "epoch-shuffle"),
                                 static_cast<std::uint64_t>(epoch)));
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      std::size_t j = i + shuffle_rng.uniform_int(order.size() - i);
      std::swap(order[i], order[j]);
    }

    double loss_sum = 0.0;
    std::size_t loss_count = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(hp.batch)) {
      std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(hp.batch));
      if (end - start < 2 && order.size() > 1) {
        // Batch-norm training cannot run on a single sample; fold the
        // remainder into the epoch loss by skipping it this round.
        continue;
      }
      std::vector<const GrayImage*> imgs;
      for (std::size_t i = start; i < end; ++i)
        imgs.push_back(&train_corpus.images[order[i]]);
      Tensor batch_tensor = make_batch(imgs, cfg.input_h, cfg.input_w);
      std::vector<Tensor> logits = model.forward(batch_tensor, true, ws);

      std::vector<Tensor> dlogits(logits.size());
      for (std::size_t i = start; i < end; ++i) {
        CtcResult ctc = ctc_loss(logits[i - start], encoded.targets[order[i]]);
        loss_sum += ctc.loss;
        ++loss_count;
        dlogits[i - start] = std::move(ctc.grad);
      }
      model.backward(dlogits, ws);
      if (hp.clip) clip_gradients(params, hp.clip_norm);
      optimizer.step();
    }

    double mean_loss = loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0;
    ValScores val = validate(model, val_corpus, hp.batch);

    EpochLog row{epoch, mean_loss, val.crr, val.wrr};
    result.log.push_back(row);
    if (hp.on_epoch) hp.on_epoch(epoch, mean_loss, val.crr, val.wrr);
    if (log_file) {
      char line[160];
      std::snprintf(line, sizeof(line), "%d\t%.6f\t%.6f\t%.6f\n", epoch, mean_loss,
                    val.crr, val.wrr);
      log_file << line;
      log_file.flush();
    }

    bool improved = std::isnan(val.crr) ? true : (result.best_epoch < 0 || val.crr > result.best_val_crr);
    if (improved) {
      result.best_epoch = epoch;
      result.best_val_crr = std::isnan(val.crr) ? 0.0 : val.crr;
      if (!hp.checkpoint_out.empty()) {
        save_checkpoint(hp.checkpoint_out, model, CheckpointMeta{epoch, mean_loss});
      }
    }
  }
  return result;
}

TrainResult finetune(Model& model, const LoadedCorpus& train_corpus,
                     const LoadedCorpus& val_corpus, const HyperParams& hp) {
  // Alphabet coverage is validated inside train() before the first step;
  // optimizer state is freshly zeroed by construction.
  return train(model, train_corpus, val_corpus, hp);
}

}  // namespace atrc
