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

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "atrc/alphabet.hpp"
#include "atrc/config.hpp"
#include "atrc/corpus.hpp"
#include "atrc/ctc.hpp"
#include "atrc/error.hpp"
#include "atrc/eval.hpp"
#include "atrc/model.hpp"
#include "atrc/render.hpp"
#include "atrc/rng.hpp"
#include "atrc/shaper.hpp"
#include "atrc/trainer.hpp"
#include "atrc/unicode.hpp"

namespace {

using namespace atrc;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

void print_config(const std::string& key, const std::string& value) {
  std::cout << "config\t" << key << "\t" << value << "\n";
}
void print_config(const std::string& key, std::uint64_t value) {
  std::cout << "config\t" << key << "\t" << value << "\n";
}
void print_config(const std::string& key, int value) {
  std::cout << "config\t" << key << "\t" << value << "\n";
}
void print_config(const std::string& key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  std::cout << "config\t" << key << "\t" << buf << "\n";
}

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

int run_shape(const std::string& text) {
  if (text.empty()) throw ConfigError("shape requires non-empty text");
  std::u32string norm = shaper::normalize_label(decode_utf8(text));
  if (norm.empty()) throw ConfigError("text is empty after normalization");
  print_config("text", encode_utf8(norm));

  std::vector<shaper::ShapedGlyph> glyphs = shaper::shape(norm);

  // Paw numbering: spaces separate words; a paw ends after every glyph whose
  // last letter cannot connect forward.
  std::vector<int> paw_of(glyphs.size(), 0);
  int paw = 1;
  for (std::size_t i = 0; i < glyphs.size(); ++i) {
    if (glyphs[i].base == U' ' && !glyphs[i].ligature) {
      paw_of[i] = -1;
      continue;
    }
    paw_of[i] = paw;
    char32_t last = norm[glyphs[i].span_end - 1];
    bool boundary =
        shaper::joining_class(last) != shaper::JoiningClass::DualJoining;
    bool word_end = glyphs[i].span_end >= norm.size() || norm[glyphs[i].span_end] == U' ';
    if (boundary || word_end) ++paw;
  }

  for (std::size_t i = 0; i < glyphs.size(); ++i) {
    const auto& g = glyphs[i];
    char cp_buf[32];
    std::snprintf(cp_buf, sizeof(cp_buf), g.ligature ? "U+0644+U+%04X" : "U+%04X",
                  static_cast<unsigned>(g.base));
    std::string display = g.ligature
                              ? encode_utf8(U'ل') + encode_utf8(g.base)
                              : encode_utf8(g.base);
    std::cout << "glyph\t" << i << "\t" << cp_buf << "\t" << display << "\t"
              << shaper::form_name(g.form) << "\t";
    if (paw_of[i] < 0) {
      std::cout << "-";
    } else {
      std::cout << paw_of[i];
    }
    std::cout << "\n";
  }
  return kExitOk;
}

struct KvOverride {
  const std::map<std::string, std::string>* kv = nullptr;
  const CLI::App* cmd = nullptr;

  template <typename T>
  void apply(const std::string& flag, const std::string& key, T& value) const {
    if (!kv || cmd->count(flag) > 0) return;
    auto it = kv->find(key);
    if (it == kv->end()) return;
    std::istringstream is(it->second);
    T parsed;
    if (!(is >> parsed)) throw ConfigError("bad config value for " + key + ": " + it->second);
    value = parsed;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arabic scene/video text transcription pipeline"};
  app.require_subcommand(1);

  // shape
  std::string shape_text;
  CLI::App* shape_cmd = app.add_subcommand("shape", "Inspect glyph forms and paws");
  shape_cmd->add_option("text", shape_text, "Arabic text, logical order");

  // synth
  std::string synth_vocab, synth_out, synth_mode = "scene", synth_config, synth_textures;
  std::uint64_t synth_n = 0, synth_seed = 1;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Render a labeled corpus");
  synth_cmd->add_option("--vocab", synth_vocab, "vocabulary file, one word per line")
      ->required();
  synth_cmd->add_option("--n", synth_n, "number of images")->required();
  synth_cmd->add_option("--seed", synth_seed, "master seed");
  synth_cmd->add_option("--mode", synth_mode, "scene or video");
  synth_cmd->add_option("--out", synth_out, "output directory")->required();
  synth_cmd->add_option("--config", synth_config, "key=value style ranges");
  synth_cmd->add_option("--textures", synth_textures, "directory of PGM background crops");

  // train / finetune share most flags
  std::string train_manifest, train_val_manifest, train_alphabet, train_mode = "scene";
  std::string train_out, train_log, train_config, finetune_ckpt;
  int train_epochs = 20, train_batch = 32, train_channel_div = 8, train_hidden = 48,
      train_layers = 1;
  std::uint64_t train_seed = 1;
  double train_val_split = 0.1;
  bool train_clip = false;

  auto add_train_flags = [&](CLI::App* cmd, bool is_finetune) {
    cmd->add_option("--manifest", train_manifest, "training corpus manifest")->required();
    cmd->add_option("--val-manifest", train_val_manifest, "validation corpus manifest");
    cmd->add_option("--val-split", train_val_split,
                    "held-out fraction when no validation manifest is given");
    cmd->add_option("--epochs", train_epochs, "training epochs");
    cmd->add_option("--batch", train_batch, "batch size");
    cmd->add_option("--seed", train_seed, "master seed");
    cmd->add_option("--out", train_out, "checkpoint output path")->required();
    cmd->add_option("--log", train_log, "training log path");
    cmd->add_option("--config", train_config, "key=value hyperparameters");
    cmd->add_flag("--clip", train_clip, "enable L2 gradient clipping at 5.0");
    if (is_finetune) {
      cmd->add_option("--checkpoint", finetune_ckpt, "checkpoint to resume from")
          ->required();
    } else {
      cmd->add_option("--alphabet", train_alphabet, "alphabet file")->required();
      cmd->add_option("--mode", train_mode, "scene or video");
      cmd->add_option("--channel-div", train_channel_div,
                      "divide conv channel counts by this");
      cmd->add_option("--hidden", train_hidden, "lstm hidden size per direction");
      cmd->add_option("--layers", train_layers, "number of bilstm layers");
    }
  };
  CLI::App* train_cmd = app.add_subcommand("train", "Train from scratch");
  add_train_flags(train_cmd, false);
  CLI::App* finetune_cmd = app.add_subcommand("finetune", "Fine-tune a checkpoint");
  add_train_flags(finetune_cmd, true);

  // eval
  std::string eval_manifest, eval_predictions, eval_granularity;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score predictions against a manifest");
  eval_cmd->add_option("--manifest", eval_manifest, "ground-truth manifest")->required();
  eval_cmd->add_option("--predictions", eval_predictions, "lines of path<TAB>text")
      ->required();
  eval_cmd->add_option("--granularity", eval_granularity, "word or line (default by mode)");

  // recognize
  std::string rec_ckpt, rec_image;
  std::size_t rec_beam = 0;
  CLI::App* rec_cmd = app.add_subcommand("recognize", "Transcribe one image");
  rec_cmd->add_option("--checkpoint", rec_ckpt, "model checkpoint")->required();
  rec_cmd->add_option("--image", rec_image, "PGM image to transcribe")->required();
  rec_cmd->add_option("--beam", rec_beam, "beam width (0 = greedy)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*shape_cmd) {
      try {
        return run_shape(shape_text);
      } catch (const UnsupportedCharacterError& e) {
        // Bad input text is a usage error for this diagnostic command.
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
      }
    }

    if (*synth_cmd) {
      Mode mode = parse_mode(synth_mode);
      StyleRanges ranges;
      std::map<std::string, std::string> kv;
      if (!synth_config.empty()) {
        kv = load_kv_file(synth_config);
        ranges = StyleRanges::from_kv(kv);
      }
      std::optional<DirectoryTextures> textures;
      if (!synth_textures.empty()) textures.emplace(synth_textures);

      print_config("mode", mode_name(mode));
      print_config("n", synth_n);
      print_config("seed", synth_seed);
      print_config("out", synth_out);
      print_config("rotation_max_deg", ranges.rotation_max_deg);
      print_config("skew_max", ranges.skew_max);
      print_config("stroke_min", ranges.stroke_min);
      print_config("stroke_max", ranges.stroke_max);
      print_config("mix_min", ranges.mix_min);
      print_config("mix_max", ranges.mix_max);
      print_config("textures", synth_textures.empty() ? "procedural-noise" : synth_textures);

      Renderer renderer(ranges, nullptr, textures ? &*textures : nullptr);
      std::vector<std::string> vocab = load_vocab(synth_vocab);
      CorpusManifest manifest =
          build_corpus(renderer, vocab, synth_n, synth_seed, mode, synth_out);
      std::cout << "manifest\t" << manifest_path(synth_out) << "\n";
      std::cout << "count\t" << manifest.count << "\n";
      return kExitOk;
    }

    if (*train_cmd || *finetune_cmd) {
      CLI::App* cmd = *train_cmd ? train_cmd : finetune_cmd;
      std::map<std::string, std::string> kv;
      if (!train_config.empty()) kv = load_kv_file(train_config);
      KvOverride over{train_config.empty() ? nullptr : &kv, cmd};
      over.apply("--epochs", "epochs", train_epochs);
      over.apply("--batch", "batch", train_batch);
      over.apply("--seed", "seed", train_seed);
      over.apply("--val-split", "val_split", train_val_split);

      LoadedCorpus full = load_corpus(train_manifest);
      LoadedCorpus val;
      val.mode = full.mode;
      if (!train_val_manifest.empty()) {
        val = load_corpus(train_val_manifest);
      } else if (train_val_split > 0.0 && full.images.size() >= 10) {
        // Deterministic held-out split.
        std::size_t n_val = static_cast<std::size_t>(train_val_split *
                                                     static_cast<double>(full.images.size()));
        std::vector<std::size_t> idx(full.images.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        Rng rng(hash_tag(train_seed, "val-split"));
        for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
          std::size_t j = i + rng.uniform_int(idx.size() - i);
          std::swap(idx[i], idx[j]);
        }
        LoadedCorpus tr;
        tr.mode = full.mode;
        for (std::size_t i = 0; i < idx.size(); ++i) {
          LoadedCorpus& dst = i < n_val ? val : tr;
          dst.images.push_back(std::move(full.images[idx[i]]));
          dst.labels.push_back(std::move(full.labels[idx[i]]));
        }
        full = std::move(tr);
      }

      std::optional<Model> model;
      if (*finetune_cmd) {
        LoadedCheckpoint loaded = load_checkpoint(finetune_ckpt);
        model.emplace(std::move(loaded.model));
        print_config("checkpoint", finetune_ckpt);
      } else {
        Alphabet alphabet = Alphabet::load(train_alphabet);
        Mode mode = parse_mode(train_mode);
        model.emplace(default_config(mode, std::move(alphabet), train_channel_div,
                                     train_hidden, train_layers));
        model->init_params(hash_tag(train_seed, "init"));
        print_config("alphabet", train_alphabet);
        print_config("mode", train_mode);
        print_config("channel_div", train_channel_div);
        print_config("hidden", train_hidden);
        print_config("layers", train_layers);
      }
      print_config("manifest", train_manifest);
      print_config("epochs", train_epochs);
      print_config("batch", train_batch);
      print_config("seed", train_seed);
      print_config("clip", train_clip ? 1 : 0);
      print_config("train_samples", static_cast<int>(full.images.size()));
      print_config("val_samples", static_cast<int>(val.images.size()));
      print_config("seq_len", model->config().seq_len());

      HyperParams hp;
      hp.epochs = train_epochs;
      hp.batch = train_batch;
      hp.seed = hash_tag(train_seed, "train");
      hp.clip = train_clip;
      hp.checkpoint_out = train_out;
      hp.log_path = train_log;
      hp.on_epoch = [](int epoch, double mean_loss, double crr, double wrr) {
        std::cout << "epoch\t" << epoch << "\t" << format6(mean_loss) << "\t"
                  << format6(crr) << "\t" << format6(wrr) << "\n";
        std::cout.flush();
      };

      TrainResult res = *train_cmd ? train(*model, full, val, hp)
                                   : finetune(*model, full, val, hp);
      std::cout << "checkpoint\t" << train_out << "\n";
      std::cout << "best_epoch\t" << res.best_epoch << "\n";
      std::cout << "best_val_crr\t" << format6(res.best_val_crr) << "\n";
      return kExitOk;
    }

    if (*eval_cmd) {
      CorpusManifest manifest = load_manifest(eval_manifest);
      std::ifstream pred_in(eval_predictions, std::ios::binary);
      if (!pred_in) throw DataError("cannot open predictions: " + eval_predictions);
      std::unordered_map<std::string, std::string> predictions;
      std::string line;
      std::size_t lineno = 0;
      while (std::getline(pred_in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
          throw DataError("predictions line " + std::to_string(lineno) +
                          ": expected path<TAB>text");
        predictions[line.substr(0, tab)] = line.substr(tab + 1);
      }

      Granularity granularity;
      if (!eval_granularity.empty()) {
        if (eval_granularity == "word") {
          granularity = Granularity::Word;
        } else if (eval_granularity == "line") {
          granularity = Granularity::Line;
        } else {
          throw ConfigError("granularity must be word or line");
        }
      } else {
        granularity = (!manifest.records.empty() &&
                       manifest.records.front().mode == Mode::Video)
                          ? Granularity::Line
                          : Granularity::Word;
      }
      print_config("manifest", eval_manifest);
      print_config("predictions", eval_predictions);
      print_config("granularity", granularity == Granularity::Word ? "word" : "line");

      std::vector<EvalPair> pairs;
      for (const ManifestRecord& rec : manifest.records) {
        auto it = predictions.find(rec.path);
        if (it == predictions.end())
          throw DataError("no prediction for manifest path: " + rec.path);
        EvalPair pair;
        pair.gt = shaper::normalize_label(decode_utf8(rec.label));
        pair.rt = shaper::normalize_label(decode_utf8(it->second));
        pairs.push_back(std::move(pair));
      }
      EvalReport report = evaluate(pairs, granularity);
      std::cout << "n_characters\t" << report.n_characters << "\n";
      std::cout << "sum_edit_distance\t" << report.sum_edit_distance << "\n";
      std::cout << "n_words\t" << report.n_words << "\n";
      std::cout << "n_words_correct\t" << report.n_words_correct << "\n";
      std::cout << "n_images\t" << report.n_images << "\n";
      std::cout << "n_images_correct\t" << report.n_images_correct << "\n";
      std::cout << "crr\t" << format6(report.crr) << "\n";
      std::cout << "wrr\t" << format6(report.wrr) << "\n";
      std::cout << "lrr\t" << format6(report.lrr) << "\n";
      return kExitOk;
    }

    if (*rec_cmd) {
      LoadedCheckpoint loaded = load_checkpoint(rec_ckpt);
      print_config("checkpoint", rec_ckpt);
      print_config("image", rec_image);
      print_config("decoder", rec_beam > 0 ? "beam" : "greedy");
      if (rec_beam > 0) print_config("beam_width", static_cast<int>(rec_beam));
      GrayImage img = read_pgm(rec_image);
      std::string text = loaded.model.recognize(img, rec_beam);
      std::cout << "text\t" << rec_image << "\t" << text << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Config: return kExitConfig;
      case ErrorKind::Data: return kExitData;
      case ErrorKind::Numeric: return kExitNumeric;
    }
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
