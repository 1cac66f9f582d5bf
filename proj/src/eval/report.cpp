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

#include "ekit/eval/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace ekit::eval {

EvalReport aggregate(const std::string& benchmark_id, std::vector<ItemRecord> records,
                     bool higher_is_better, nlohmann::ordered_json config_snapshot) {
  if (records.empty()) fail("aggregate: empty record set");
  std::sort(records.begin(), records.end(),
            [](const ItemRecord& a, const ItemRecord& b) { return a.item_id < b.item_id; });

  EvalReport report;
  report.benchmark_id = benchmark_id;
  report.higher_is_better = higher_is_better;
  report.config_snapshot = std::move(config_snapshot);

  double total = 0.0;
  for (const auto& record : records) {
    auto& group = report.groups[record.group.empty() ? "all" : record.group];
    group.mean += record.score;  // sum for now
    ++group.count;
    total += record.score;
  }
  for (auto& [name, stats] : report.groups) {
    stats.mean /= static_cast<double>(stats.count);
  }
  report.overall = total / static_cast<double>(records.size());
  report.records = std::move(records);
  return report;
}

nlohmann::ordered_json EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["benchmark_id"] = benchmark_id;
  j["orientation"] = higher_is_better ? "higher_is_better" : "lower_is_better";
  j["count"] = records.size();
  j["overall"] = overall;
  j["groups"] = nlohmann::ordered_json::object();
  for (const auto& [name, stats] : groups) {
    j["groups"][name] = {{"count", stats.count}, {"mean", stats.mean}};
  }
  if (!config_snapshot.is_null()) j["config"] = config_snapshot;
  return j;
}

std::string EvalReport::render_table() const {
  std::ostringstream out;
  out << "Benchmark: " << benchmark_id << "  ("
      << (higher_is_better ? "higher is better" : "lower is better") << ")\n";
  out << std::left << std::setw(24) << "group" << std::right << std::setw(10) << "count"
      << std::setw(12) << "mean" << "\n";
  out << std::string(46, '-') << "\n";
  for (const auto& [name, stats] : groups) {
    out << std::left << std::setw(24) << name << std::right << std::setw(10) << stats.count
        << std::setw(12) << std::fixed << std::setprecision(4) << stats.mean << "\n";
  }
  out << std::string(46, '-') << "\n";
  out << std::left << std::setw(24) << "overall" << std::right << std::setw(10) << records.size()
      << std::setw(12) << std::fixed << std::setprecision(4) << overall << "\n";
  return out.str();
}

void write_report(const EvalReport& report, const std::string& records_path,
                  const std::string& summary_path) {
  std::ostringstream records;
  for (const auto& record : report.records) {
    nlohmann::ordered_json j;
    j["item_id"] = record.item_id;
    j["group"] = record.group;
    j["score"] = record.score;
    if (!record.diagnostics.is_null()) j["diagnostics"] = record.diagnostics;
    records << j.dump() << '\n';
  }
  write_file(records_path, records.str());
  write_file(summary_path, report.to_json().dump(2) + "\n");
}

std::vector<Prediction> load_predictions(const std::string& path,
                                         const std::map<std::string, scene::PayloadKind>& kinds) {
  std::vector<Prediction> predictions;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(read_file(path))) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto j = nlohmann::ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) fail(path + ":" + std::to_string(line_no) + ": invalid JSON");
    Prediction prediction;
    prediction.item_id = j.at("item_id").get<std::string>();
    const auto kind = kinds.find(prediction.item_id);
    if (j.contains("payload")) {
      prediction.payload = scene::payload_from_json(j["payload"]);
      prediction.raw_text = scene::render_payload(*prediction.payload);
    } else if (j.contains("raw_text")) {
      prediction.raw_text = j["raw_text"].get<std::string>();
      if (kind != kinds.end()) {
        const auto block = scene::extract_answer_block(prediction.raw_text);
        const auto body = block ? *block : prediction.raw_text;
        auto parsed = scene::parse_payload(body, kind->second);
        if (parsed.ok()) {
          prediction.payload = std::move(*parsed.payload);
        } else {
          prediction.parse_error = parsed.error;
        }
      } else {
        prediction.parse_error = "unknown item id";
      }
    } else {
      fail(path + ":" + std::to_string(line_no) + ": need raw_text or payload");
    }
    predictions.push_back(std::move(prediction));
  }
  return predictions;
}

}  // namespace ekit::eval
