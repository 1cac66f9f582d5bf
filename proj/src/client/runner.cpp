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

#include "ekit/client/runner.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <thread>
#include <vector>

#include "ekit/eval/reward.hpp"

namespace ekit::client {

using eval::ItemRecord;
using eval::Prediction;
using scene::QAItem;

Scorer default_scorer() {
  return [](const QAItem& item, const Prediction& prediction) {
    if (!prediction.parsed()) return 0.0;
    return eval::score_payload(*prediction.payload, item);
  };
}

BenchmarkRun score_predictions(const std::vector<QAItem>& items,
                               std::vector<Prediction> predictions, const Scorer& scorer,
                               const RunOptions& options) {
  std::map<std::string, const Prediction*> by_id;
  for (const auto& prediction : predictions) by_id[prediction.item_id] = &prediction;

  BenchmarkRun run;
  std::vector<ItemRecord> records;
  for (const auto& item : items) {
    ItemRecord record;
    record.item_id = item.id;
    record.group = scene::family_name(item.family);
    const auto it = by_id.find(item.id);
    if (it == by_id.end()) {
      run.missing_ids.push_back(item.id);
      record.score = 0.0;
      record.diagnostics = {{"error", "missing prediction"}};
    } else {
      record.score = scorer(item, *it->second);
      if (!it->second->parsed()) {
        record.diagnostics = {{"parse_error", it->second->parse_error}};
      }
    }
    records.push_back(std::move(record));
  }
  run.report = eval::aggregate(options.benchmark_id, std::move(records),
                               options.higher_is_better);
  run.predictions = std::move(predictions);
  return run;
}

namespace {

void write_audit_log(const std::vector<QAItem>& items,
                     const std::map<std::string, std::pair<std::string, std::string>>& raw,
                     const std::string& path) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail("cannot write audit log: " + path);
  for (const auto& item : items) {
    const auto it = raw.find(item.id);
    if (it == raw.end()) continue;
    nlohmann::ordered_json j;
    j["item_id"] = item.id;
    j["prompt_hash"] = it->second.first;
    j["raw_text"] = it->second.second;
    out << j.dump() << '\n';
  }
}

}  // namespace

BenchmarkRun run_benchmark(const std::vector<QAItem>& items, const std::string& predictions_path,
                           const Scorer& scorer, const RunOptions& options) {
  std::map<std::string, scene::PayloadKind> kinds;
  for (const auto& item : items) kinds[item.id] = item.target_kind;
  auto predictions = eval::load_predictions(predictions_path, kinds);
  return score_predictions(items, std::move(predictions), scorer, options);
}

BenchmarkRun run_benchmark(const std::vector<QAItem>& items, const EndpointConfig& endpoint,
                           const Scorer& scorer, const RunOptions& options) {
  endpoint.validate();
  std::vector<Prediction> predictions(items.size());
  std::vector<std::string> prompt_hashes(items.size());

  // bounded fan-out: a fixed worker pool pulling from an atomic cursor never
  // exceeds max_in_flight concurrent requests
  std::atomic<std::size_t> cursor{0};
  std::vector<std::string> errors(items.size());
  const auto worker = [&]() {
    while (true) {
      const auto index = cursor.fetch_add(1);
      if (index >= items.size()) return;
      const auto& item = items[index];
      Prediction prediction;
      prediction.item_id = item.id;
      try {
        const auto prompt = build_prompt(item, options.thinking);
        prompt_hashes[index] = prompt.hash();
        prediction.raw_text = query(endpoint, prompt);
        const auto outcome = parse_answer(prediction.raw_text, item.target_kind);
        if (outcome.ok()) {
          prediction.payload = outcome.payload;
        } else {
          prediction.parse_error = outcome.error;
        }
      } catch (const std::exception& e) {
        prediction.parse_error = std::string("query failed: ") + e.what();
      }
      predictions[index] = std::move(prediction);
    }
  };
  std::vector<std::thread> pool;
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(endpoint.max_in_flight),
                                             std::max<std::size_t>(items.size(), 1));
  for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& thread : pool) thread.join();

  std::map<std::string, std::pair<std::string, std::string>> raw;
  for (std::size_t i = 0; i < items.size(); ++i) {
    raw[items[i].id] = {prompt_hashes[i], predictions[i].raw_text};
  }
  write_audit_log(items, raw, options.audit_log_path);
  return score_predictions(items, std::move(predictions), scorer, options);
}

}  // namespace ekit::client
