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

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "atrc/error.hpp"
#include "atrc/model.hpp"

namespace atrc {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'A', 'T', 'R', 'C'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kDtypeF32 = 0;

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), 4);
}
void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), 8);
}

std::uint32_t read_u32(std::istream& in, const std::string& what) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 4);
  if (in.gcount() != 4) throw DataError("truncated checkpoint while reading " + what);
  return v;
}
std::uint64_t read_u64(std::istream& in, const std::string& what) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 8);
  if (in.gcount() != 8) throw DataError("truncated checkpoint while reading " + what);
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, Model& model, const CheckpointMeta& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open checkpoint for writing: " + path);

  nlohmann::json j;
  j["config"] = nlohmann::json::parse(model.config().to_json());
  j["epoch"] = meta.epoch;
  j["loss"] = meta.loss;
  std::string config_block = j.dump();

  out.write(kMagic, 4);
  write_u32(out, kVersion);
  write_u32(out, static_cast<std::uint32_t>(config_block.size()));
  out.write(config_block.data(), static_cast<std::streamsize>(config_block.size()));

  auto tensors = model.named_tensors();
  write_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& nt : tensors) {
    write_u32(out, static_cast<std::uint32_t>(nt.name.size()));
    out.write(nt.name.data(), static_cast<std::streamsize>(nt.name.size()));
    out.put(static_cast<char>(kDtypeF32));
    out.put(static_cast<char>(nt.tensor->rank()));
    for (std::size_t d = 0; d < nt.tensor->rank(); ++d)
      write_u64(out, nt.tensor->extent(d));
  }
  for (const auto& nt : tensors) {
    const Tensor& t = *nt.tensor;
    std::vector<float> buf(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) buf[i] = static_cast<float>(t[i]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
  }
  if (!out) throw DataError("short write on checkpoint: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);

  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("corrupt checkpoint header (bad magic): " + path);
  std::uint32_t version = read_u32(in, "version");
  if (version != kVersion)
    throw DataError("unknown checkpoint version " + std::to_string(version) + ": " + path);

  std::uint32_t config_len = read_u32(in, "config length");
  std::string config_block(config_len, '\0');
  in.read(config_block.data(), config_len);
  if (in.gcount() != static_cast<std::streamsize>(config_len))
    throw DataError("truncated checkpoint while reading config: " + path);

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(config_block);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupt checkpoint config block: " + std::string(e.what()));
  }
  CheckpointMeta meta;
  meta.epoch = j.value("epoch", 0);
  meta.loss = j.value("loss", 0.0);
  NetworkConfig cfg = NetworkConfig::from_json(j.at("config").dump());

  Model model(cfg);
  auto tensors = model.named_tensors();

  std::uint32_t count = read_u32(in, "tensor count");
  if (count != tensors.size())
    throw DataError("checkpoint tensor directory has " + std::to_string(count) +
                    " entries, model expects " + std::to_string(tensors.size()));

  struct DirEntry {
    std::string name;
    std::vector<std::size_t> shape;
    std::size_t size;
  };
  std::vector<DirEntry> dir(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint32_t name_len = read_u32(in, "tensor name length");
    if (name_len > 4096) throw DataError("corrupt checkpoint directory: " + path);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (in.gcount() != static_cast<std::streamsize>(name_len))
      throw DataError("truncated checkpoint while reading directory: " + path);
    int dtype = in.get();
    int rank = in.get();
    if (dtype != kDtypeF32 || rank < 0 || rank > 8)
      throw DataError("corrupt checkpoint directory entry for " + name);
    DirEntry e;
    e.name = std::move(name);
    e.size = 1;
    for (int d = 0; d < rank; ++d) {
      std::uint64_t ext = read_u64(in, "tensor extent");
      e.shape.push_back(static_cast<std::size_t>(ext));
      e.size *= static_cast<std::size_t>(ext);
    }
    dir[i] = std::move(e);

    if (dir[i].name != tensors[i].name)
      throw DataError("checkpoint tensor '" + dir[i].name + "' does not match model tensor '" +
                      tensors[i].name + "'");
    if (dir[i].shape != tensors[i].tensor->shape())
      throw DataError("checkpoint tensor '" + dir[i].name + "' has unexpected shape");
  }

  for (std::uint32_t i = 0; i < count; ++i) {
    std::vector<float> buf(dir[i].size);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(float)))
      throw DataError("truncated checkpoint payload for tensor '" + dir[i].name + "'");
    Tensor& t = *tensors[i].tensor;
    for (std::size_t k = 0; k < buf.size(); ++k) t[k] = static_cast<double>(buf[k]);
  }

  return LoadedCheckpoint{std::move(model), meta};
}

}  // namespace atrc
