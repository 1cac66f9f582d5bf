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

#include "ekit/scene/shard.hpp"

#include <sstream>

namespace ekit::scene {

nlohmann::ordered_json ShardManifest::to_json() const {
  nlohmann::ordered_json j;
  j["shard_path"] = shard_path;
  j["count"] = count;
  j["checksum"] = checksum;
  return j;
}

ShardManifest write_shard(const std::vector<QAItem>& items, const std::string& shard_path) {
  std::ostringstream buffer;
  for (const auto& item : items) {
    item.validate();
    buffer << item.to_json().dump() << '\n';
  }
  const std::string bytes = buffer.str();
  write_file(shard_path, bytes);

  ShardManifest manifest;
  manifest.shard_path = shard_path;
  manifest.count = items.size();
  manifest.checksum = to_hex(fnv1a64(bytes));
  write_file(shard_path + ".manifest.json", manifest.to_json().dump(2) + "\n");
  return manifest;
}

std::vector<QAItem> read_shard(const std::string& shard_path) {
  const auto text = read_file(shard_path);
  std::vector<QAItem> items;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto j = nlohmann::ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      fail(shard_path + ":" + std::to_string(line_no) + ": invalid JSON line");
    }
    auto item = QAItem::from_json(j);
    item.validate();
    items.push_back(std::move(item));
  }
  return items;
}

std::string shard_checksum(const std::string& shard_path) {
  return to_hex(fnv1a64(read_file(shard_path)));
}

}  // namespace ekit::scene
