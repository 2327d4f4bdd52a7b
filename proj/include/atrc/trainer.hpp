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

#ifndef ATRC_TRAINER_HPP_
#define ATRC_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "atrc/image.hpp"
#include "atrc/model.hpp"
#include "atrc/tensor.hpp"

namespace atrc {

// E[g^2] <- rho E[g^2] + (1-rho) g^2
// dx     = -sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g
// E[dx^2] <- rho E[dx^2] + (1-rho) dx^2
// x      += dx
void adadelta_update(std::span<double> value, std::span<const double> grad,
                     std::span<double> eg2, std::span<double> edx2, double rho,
                     double epsilon);

class Adadelta {
 public:
  explicit Adadelta(std::vector<Parameter*> params, double rho = 0.95,
                    double epsilon = 1e-6);

  // Consumes the accumulated gradients and zeroes them. Non-finite gradients
  // abort with diagnostics naming the parameter index.
  void step();

  double rho() const { return rho_; }
  double epsilon() const { return epsilon_; }

 private:
  std::vector<Parameter*> params_;
  std::vector<Tensor> eg2_, edx2_;
  double rho_;
  double epsilon_;
};

struct LoadedCorpus {
  std::vector<GrayImage> images;
  std::vector<std::string> labels;  // UTF-8, normalized
  Mode mode = Mode::Scene;
};

// Reads the manifest and every referenced PGM.
LoadedCorpus load_corpus(const std::string& manifest_file);

struct HyperParams {
  int epochs = 20;
  int batch = 32;
  std::uint64_t seed = 1;
  bool clip = false;         // off by default; L2-norm clipping for pathological runs
  double clip_norm = 5.0;
  std::string checkpoint_out;  // empty: do not save
  std::string log_path;        // empty: no log file
  std::function<void(int epoch, double mean_loss, double val_crr, double val_wrr)> on_epoch;
};

struct EpochLog {
  int epoch = 0;
  double mean_loss = 0.0;
  double val_crr = 0.0;
  double val_wrr = 0.0;
};

struct TrainResult {
  std::vector<EpochLog> log;
  int best_epoch = -1;
  double best_val_crr = 0.0;
  std::size_t skipped_infeasible = 0;
};

// Seeded-shuffle minibatch SGD with Adadelta updates; batch gradients are
// the sum of per-sample CTC gradients. The checkpoint with the best
// validation CRR is kept. Samples whose targets cannot be aligned at the
// model's sequence length are skipped with a warning; more than 1% of them
// aborts the run. Labels outside the alphabet abort immediately.
TrainResult train(Model& model, const LoadedCorpus& train_corpus,
                  const LoadedCorpus& val_corpus, const HyperParams& hp);

// Resumes from checkpoint parameters with fresh optimizer state; the corpus
// alphabet must be covered by the checkpoint alphabet.
TrainResult finetune(Model& model, const LoadedCorpus& train_corpus,
                     const LoadedCorpus& val_corpus, const HyperParams& hp);

}  // namespace atrc

#endif  // ATRC_TRAINER_HPP_
