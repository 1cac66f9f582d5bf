/*
 * Copyright (C) 2026 The EmbodiKit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EKIT_SCENE_SHARD_HPP
#define EKIT_SCENE_SHARD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ekit/scene/payload.hpp"

namespace ekit::scene {

struct ShardManifest {
  std::string shard_path;
  std::size_t count = 0;
  std::string checksum;  // fnv1a64 of the shard bytes, hex

  nlohmann::ordered_json to_json() const;
};

/// Writes one JSON object per line, UTF-8, stable field order. Items are
/// validated before writing; order is preserved. Also writes
/// `<shard_path>.manifest.json`.
ShardManifest write_shard(const std::vector<QAItem>& items, const std::string& shard_path);

std::vector<QAItem> read_shard(const std::string& shard_path);

std::string shard_checksum(const std::string& shard_path);

}  // namespace ekit::scene

#endif  // EKIT_SCENE_SHARD_HPP
