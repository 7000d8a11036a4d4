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

#pragma once

#include <filesystem>

#include "moseve/kv.hpp"
#include "moseve/network/models.hpp"

namespace moseve::net {

/// Checkpoint metadata holds the model config under its prefix, `model` (eve
/// or mos), and whatever the caller adds (epoch, seed, training split).
void save_eve(const std::filesystem::path& path, const EveNetwork& net, const KeyValues& extra);
void save_mos(const std::filesystem::path& path, const MosNetwork& net, const KeyValues& extra);

struct LoadedEve {
  EveNetwork net;
  KeyValues metadata;
};
struct LoadedMos {
  MosNetwork net;
  KeyValues metadata;
};

/// Throws ValidationError when the file holds the other model kind or its
/// parameters do not fit the stored config.
LoadedEve load_eve(const std::filesystem::path& path);
LoadedMos load_mos(const std::filesystem::path& path);

}  // namespace moseve::net
