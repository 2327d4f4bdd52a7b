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

#include "atrc/corpus.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "atrc/error.hpp"
#include "atrc/unicode.hpp"

namespace atrc {

namespace fs = std::filesystem;

void CorpusManifest::validate() const {
  if (count != records.size())
    throw DataError("manifest count " + std::to_string(count) + " does not match " +
                    std::to_string(records.size()) + " records");
  std::set<std::string> seen;
  for (const auto& r : records) {
    if (!seen.insert(r.path).second) throw DataError("duplicate manifest path: " + r.path);
    if (r.label.empty()) throw DataError("empty label for " + r.path);
  }
}

void save_manifest(const std::string& path, const CorpusManifest& manifest) {
  manifest.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write manifest: " + path);
  out << "# master_seed " << manifest.master_seed << "\n";
  out << "# count " << manifest.count << "\n";
  for (const auto& r : manifest.records) {
    out << r.path << '\t' << r.label << '\t' << mode_name(r.mode) << '\t' << r.seed << '\n';
  }
  if (!out) throw DataError("short write: " + path);
}

CorpusManifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open manifest: " + path);
  CorpusManifest m;
  bool have_count = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      hs >> key;
      if (key == "master_seed") hs >> m.master_seed;
      if (key == "count") {
        hs >> m.count;
        have_count = true;
      }
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4)
      throw DataError("manifest " + path + " line " + std::to_string(lineno) +
                      ": expected 4 tab-separated fields, got " +
                      std::to_string(fields.size()));
    ManifestRecord r;
    r.path = fields[0];
    r.label = fields[1];
    r.mode = parse_mode(fields[2]);
    try {
      r.seed = std::stoull(fields[3]);
    } catch (...) {
      throw DataError("manifest " + path + " line " + std::to_string(lineno) +
                      ": bad seed field '" + fields[3] + "'");
    }
    m.records.push_back(std::move(r));
  }
  if (!have_count) m.count = m.records.size();
  m.validate();
  return m;
}

std::vector<std::string> load_vocab(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open vocabulary file: " + path);
  std::vector<std::string> vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::u32string norm = shaper::normalize_label(decode_utf8(line));
    if (norm.empty()) continue;
    vocab.push_back(encode_utf8(norm));
  }
  if (vocab.empty()) throw DataError("vocabulary file is empty: " + path);
  return vocab;
}

CorpusManifest build_corpus(const Renderer& renderer, const std::vector<std::string>& vocab,
                            std::uint64_t n, std::uint64_t master_seed, Mode mode,
                            const std::string& out_dir) {
  if (vocab.empty()) throw DataError("vocabulary is empty");
  if (n < 1) throw ConfigError("corpus size must be at least 1");

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir))
    throw DataError("cannot create corpus directory: " + out_dir);

  CorpusManifest manifest;
  manifest.master_seed = master_seed;
  manifest.count = n;
  manifest.records.reserve(n);

  for (std::uint64_t i = 0; i < n; ++i) {
    std::uint64_t sample_seed = hash_combine(master_seed, i);
    std::uint64_t pick = hash_tag(sample_seed, "label") % vocab.size();
    const std::string& label = vocab[pick];

    char name[32];
    std::snprintf(name, sizeof(name), "img_%08" PRIu64 ".pgm", i);
    std::string rel = name;
    std::string abs = out_dir + "/" + rel;

    if (!fs::exists(abs) || !is_valid_pgm(abs)) {
      LabeledImage sample = renderer.render(label, mode, sample_seed);
      write_pgm(abs, sample.pixels);
      manifest.records.push_back({rel, sample.label, mode, sample_seed});
    } else {
      // Already rendered; labels are still normalized for the manifest.
      std::string norm = encode_utf8(shaper::normalize_label(decode_utf8(label)));
      manifest.records.push_back({rel, norm, mode, sample_seed});
    }
  }

  save_manifest(manifest_path(out_dir), manifest);
  return manifest;
}

}  // namespace atrc
