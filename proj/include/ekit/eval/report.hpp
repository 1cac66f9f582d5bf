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

#ifndef EKIT_EVAL_REPORT_HPP
#define EKIT_EVAL_REPORT_HPP

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ekit/eval/metrics.hpp"

namespace ekit::eval {

struct ItemRecord {
  std::string item_id;
  std::string group;  // e.g. split name or task family
  double score = 0.0;
  nlohmann::ordered_json diagnostics;
};

struct GroupStats {
  std::size_t count = 0;
  double mean = 0.0;
};

struct EvalReport {
  std::string benchmark_id;
  bool higher_is_better = true;
  std::vector<ItemRecord> records;
  std::map<std::string, GroupStats> groups;
  double overall = 0.0;  // item-weighted mean across all records
  nlohmann::ordered_json config_snapshot;

  nlohmann::ordered_json to_json() const;
  std::string render_table() const;
};

/// Deterministic fold: records are ordered by item id, per-group means plus
/// the item-weighted overall mean. Throws on an empty record set.
EvalReport aggregate(const std::string& benchmark_id, std::vector<ItemRecord> records,
                     bool higher_is_better = true,
                     nlohmann::ordered_json config_snapshot = {});

void write_report(const EvalReport& report, const std::string& records_path,
                  const std::string& summary_path);

/// Prediction file: JSONL of {"item_id", "raw_text"} or {"item_id", "payload"}.
std::vector<Prediction> load_predictions(const std::string& path,
                                         const std::map<std::string, scene::PayloadKind>& kinds);

}  // namespace ekit::eval

#endif  // EKIT_EVAL_REPORT_HPP
