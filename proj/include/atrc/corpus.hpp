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

#ifndef ATRC_CORPUS_HPP_
#define ATRC_CORPUS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "atrc/render.hpp"

namespace atrc {

struct ManifestRecord {
  std::string path;   // relative to the manifest's directory
  std::string label;  // UTF-8, logical order
  Mode mode = Mode::Scene;
  std::uint64_t seed = 0;
};

struct CorpusManifest {
  std::vector<ManifestRecord> records;
  std::uint64_t master_seed = 0;
  std::uint64_t count = 0;

  void validate() const;  // unique paths, count == records.size()
};

// Tab-separated records "path\tlabel\tmode\tseed", one per line, preceded by
// "# master_seed N" / "# count N" comment headers.
void save_manifest(const std::string& path, const CorpusManifest& manifest);
CorpusManifest load_manifest(const std::string& path);

// One vocabulary word per line, UTF-8, NFC-normalized on load.
std::vector<std::string> load_vocab(const std::string& path);

// Renders n samples into out_dir (PGM) plus out_dir/manifest.tsv. Sample i
// draws its label from vocab and derives its per-image seed from
// (master_seed, i), so reruns and other machines produce identical bytes.
// Existing files that parse as valid PGMs are not re-rendered.
CorpusManifest build_corpus(const Renderer& renderer, const std::vector<std::string>& vocab,
                            std::uint64_t n, std::uint64_t master_seed, Mode mode,
                            const std::string& out_dir);

inline std::string manifest_path(const std::string& out_dir) {
  return out_dir + "/manifest.tsv";
}

}  // namespace atrc

#endif  // ATRC_CORPUS_HPP_
