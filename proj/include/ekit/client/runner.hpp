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

#ifndef EKIT_CLIENT_RUNNER_HPP
#define EKIT_CLIENT_RUNNER_HPP

#include <functional>

#include "ekit/client/http.hpp"
#include "ekit/eval/report.hpp"

namespace ekit::client {

/// Per-item score + diagnostics, usually eval::score_payload behind the
/// scenes but injectable for custom benchmarks.
using Scorer = std::function<double(const scene::QAItem&, const eval::Prediction&)>;

Scorer default_scorer();

struct RunOptions {
  std::string benchmark_id = "benchmark";
  bool thinking = true;
  bool higher_is_better = true;
  std::string audit_log_path;  // JSONL of {item_id, prompt_hash, raw_text}; empty = no log
};

struct BenchmarkRun {
  eval::EvalReport report;
  std::vector<eval::Prediction> predictions;
  std::vector<std::string> missing_ids;  // items with no prediction
};

/// Offline mode: scores a prediction file with zero network traffic.
BenchmarkRun run_benchmark(const std::vector<scene::QAItem>& items,
                           const std::string& predictions_path, const Scorer& scorer,
                           const RunOptions& options = {});

/// Online mode: queries the endpoint per item with at most max_in_flight
/// concurrent requests, joins results by item id, then scores exactly as the
/// offline path would.
BenchmarkRun run_benchmark(const std::vector<scene::QAItem>& items,
                           const EndpointConfig& endpoint, const Scorer& scorer,
                           const RunOptions& options = {});

/// Shared scoring path: join predictions to items by id and aggregate.
BenchmarkRun score_predictions(const std::vector<scene::QAItem>& items,
                               std::vector<eval::Prediction> predictions, const Scorer& scorer,
                               const RunOptions& options);

}  // namespace ekit::client

#endif  // EKIT_CLIENT_RUNNER_HPP
