// Copyright 2026, The radar-moseve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "moseve/network/model_io.hpp"

#include "moseve/autodiff/checkpoint.hpp"
#include "moseve/errors.hpp"

namespace moseve::net {

namespace {

template <typename Net>
void save(const std::filesystem::path& path, const Net& net, const KeyValues& extra, const char* kind) {
  KeyValues meta = extra;
  net.config().to_kv(meta);
  meta.set("model", kind);
  ad::CheckpointData data;
  data.metadata = meta.entries();
  data.arrays = ad::snapshot(net.parameters());
  ad::write_checkpoint(path, data);
}

KeyValues read_meta(const ad::CheckpointData& data, const std::filesystem::path& path, const char* kind) {
  KeyValues meta;
  for (const auto& [k, v] : data.metadata) meta.set(k, v);
  const std::string found = meta.get_string("model", "");
  if (found != kind) {
    throw ValidationError(path.string() + ": expected a " + kind + " checkpoint, found '" + found + "'");
  }
  return meta;
}

}  // namespace

void save_eve(const std::filesystem::path& path, const EveNetwork& net, const KeyValues& extra) {
  save(path, net, extra, "eve");
}

void save_mos(const std::filesystem::path& path, const MosNetwork& net, const KeyValues& extra) {
  save(path, net, extra, "mos");
}

LoadedEve load_eve(const std::filesystem::path& path) {
  const auto data = ad::read_checkpoint(path);
  KeyValues meta = read_meta(data, path, "eve");
  LoadedEve out{EveNetwork(EveConfig::from_kv(meta), 0), std::move(meta)};
  ad::restore(out.net.parameters(), data.arrays);
  return out;
}

LoadedMos load_mos(const std::filesystem::path& path) {
  const auto data = ad::read_checkpoint(path);
  KeyValues meta = read_meta(data, path, "mos");
  LoadedMos out{MosNetwork(MosConfig::from_kv(meta), 0), std::move(meta)};
  ad::restore(out.net.parameters(), data.arrays);
  return out;
}

}  // namespace moseve::net
