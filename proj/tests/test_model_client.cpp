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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ekit/client/runner.hpp"
#include "support/generators.hpp"
#include "support/mock_server.hpp"

using namespace ekit;
using namespace ekit::client;
using namespace ekit::scene;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

QAItem pointing_item() {
  QAItem item;
  item.id = "point_1";
  item.family = TaskFamily::Pointing;
  item.prompt = "Point out all instances of cup in the image.";
  item.images = {"frames/a.png"};
  item.image_size = {{640, 480}};
  item.target_kind = PayloadKind::Points;
  item.ground_truth = PointsPayload{{{296, 282}, {321, 256}}, {}};
  item.provenance = {"s", "t", 0};
  return item;
}

QAItem trajectory_item() {
  QAItem item;
  item.id = "traj_1";
  item.family = TaskFamily::Pointing;
  item.prompt = "Reach for the banana on the plate.";
  item.images = {"frames/b.png"};
  item.image_size = {{640, 480}};
  item.target_kind = PayloadKind::Trajectory;
  item.ground_truth = TrajectoryPayload{{{116, 114}, {153, 97}}};
  item.provenance = {"s", "t", 0};
  return item;
}

}  // namespace

TEST_CASE("pointing prompt carries the tuple-list format sentence") {
  const auto spec = build_prompt(pointing_item(), true);
  CHECK(spec.user_text.find("list of tuples") != std::string::npos);
  CHECK(spec.system_text.find("<think>") != std::string::npos);
  CHECK(spec.preamble_id == "pointing_v1");
}

TEST_CASE("trajectory prompt asks for up to 10 key trajectory points") {
  const auto spec = build_prompt(trajectory_item(), true);
  CHECK(spec.user_text.find("up to 10 key trajectory points") != std::string::npos);
}

TEST_CASE("format sentence is not duplicated when already present") {
  auto item = pointing_item();
  item.prompt += " Your answer should be formatted as a list of tuples, i.e. [(x1, y1), ...].";
  const auto spec = build_prompt(item, false);
  const auto first = spec.user_text.find("list of tuples");
  CHECK(first != std::string::npos);
  CHECK(spec.user_text.find("list of tuples", first + 1) == std::string::npos);
}

TEST_CASE("unregistered family is an error") {
  auto item = pointing_item();
  item.family = static_cast<TaskFamily>(99);
  CHECK_THROWS_AS(build_prompt(item, true), Error);
}

TEST_CASE("thinking flag switches the instruction") {
  const auto with = build_prompt(pointing_item(), true);
  const auto without = build_prompt(pointing_item(), false);
  CHECK(with.system_text.find("step by step") != std::string::npos);
  CHECK(without.system_text.find("step by step") == std::string::npos);
  CHECK(without.system_text.find("<answer>") != std::string::npos);
}

TEST_CASE("the three example payload shapes parse") {
  const auto points = parse_answer("<answer>[(296, 282), (321, 256)]</answer>",
                                   PayloadKind::Points);
  REQUIRE(points.ok());
  CHECK(std::get<PointsPayload>(*points.payload).points.size() == 2);
  CHECK(std::get<PointsPayload>(*points.payload).points[0] == PixelPoint{296, 282});

  const auto box = parse_answer("<answer>[915, 408, 1109, 533]</answer>", PayloadKind::Box);
  REQUIRE(box.ok());
  const auto& b = std::get<BoxPayload>(*box.payload).box;
  CHECK(b.x1 == 915);
  CHECK(b.y1 == 408);
  CHECK(b.x2 == 1109);
  CHECK(b.y2 == 533);

  const auto option = parse_answer("<answer>(A)</answer>", PayloadKind::Option);
  REQUIRE(option.ok());
  CHECK(std::get<OptionPayload>(*option.payload).letter == 'A');
}

TEST_CASE("think block is tolerated and the last answer block wins") {
  const auto outcome = parse_answer(
      "<think>first guess</think><answer>(A)</answer> wait, actually <answer>(C)</answer> done",
      PayloadKind::Option);
  REQUIRE(outcome.ok());
  CHECK(std::get<OptionPayload>(*outcome.payload).letter == 'C');

  const auto truncated_list = parse_answer(
      "<think>...</think><answer>[(296, 282), (321, 256), \xe2\x80\xa6]</answer>",
      PayloadKind::Points);
  REQUIRE(truncated_list.ok());
  CHECK(std::get<PointsPayload>(*truncated_list.payload).points.size() == 2);
}

TEST_CASE("parse_answer never throws on arbitrary text") {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::string garbage;
    const auto n = rng.uniform_int(0, 60);
    for (int i = 0; i < n; ++i) {
      garbage.push_back(static_cast<char>(rng.uniform_int(32, 126)));
    }
    const auto kind = testsupport::random_payload_kind(rng);
    const auto outcome = parse_answer(garbage, kind);
    if (!outcome.ok()) CHECK(!outcome.error.empty());
  }
  const auto none = parse_answer("no tags at all", PayloadKind::Points);
  CHECK_FALSE(none.ok());
  CHECK(none.error == "no answer block");
}

TEST_CASE("render-parse identity over random payloads") {
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto kind = testsupport::random_payload_kind(rng);
    const auto payload = testsupport::random_payload(rng, kind);
    const auto rendered = "<answer>" + render_payload(payload) + "</answer>";
    const auto outcome = parse_answer(rendered, kind);
    REQUIRE(outcome.ok());
    CHECK(payload_to_json(*outcome.payload) == payload_to_json(payload));
  }
}

TEST_CASE("query returns the mock body verbatim") {
  testsupport::MockEndpoint mock([](const std::string&) { return "echo body"; });
  EndpointConfig endpoint;
  endpoint.base_url = mock.base_url();
  const auto raw = query(endpoint, build_prompt(pointing_item(), true));
  CHECK(raw == "echo body");
}

TEST_CASE("two 500s then success within the retry budget") {
  testsupport::MockEndpoint mock([](const std::string&) { return "ok after retries"; },
                                 /*fail_first=*/2);
  EndpointConfig endpoint;
  endpoint.base_url = mock.base_url();
  endpoint.max_retries = 2;
  const auto raw = query(endpoint, build_prompt(pointing_item(), true));
  CHECK(raw == "ok after retries");
  CHECK(mock.hits() == 3);
}

TEST_CASE("retry budget exhausted surfaces a structured error") {
  testsupport::MockEndpoint mock([](const std::string&) { return "never"; }, /*fail_first=*/10);
  EndpointConfig endpoint;
  endpoint.base_url = mock.base_url();
  endpoint.max_retries = 1;
  CHECK_THROWS_AS(query(endpoint, build_prompt(pointing_item(), true)), Error);
}

TEST_CASE("unreachable host is a structured transport error") {
  EndpointConfig endpoint;
  endpoint.base_url = "http://127.0.0.1:1";  // nothing listens there
  endpoint.max_retries = 0;
  endpoint.timeout_seconds = 1.0;
  CHECK_THROWS_WITH_AS(query(endpoint, build_prompt(pointing_item(), true)),
                       doctest::Contains("unreachable"), Error);
}

TEST_CASE("offline run with GT-as-predictions is a perfect self-score") {
  Rng rng(5);
  std::vector<QAItem> items;
  for (int i = 0; i < 20; ++i) items.push_back(testsupport::random_item(rng, i));
  const auto path = temp_path("ekit_gt_predictions.jsonl");
  std::ofstream out(path, std::ios::trunc);
  for (const auto& item : items) {
    nlohmann::ordered_json j;
    j["item_id"] = item.id;
    j["payload"] = payload_to_json(item.ground_truth);
    out << j.dump() << '\n';
  }
  out.close();
  const auto run = run_benchmark(items, path, default_scorer(), {});
  CHECK(run.missing_ids.empty());
  CHECK(run.report.overall == 1.0);
}

TEST_CASE("shuffled prediction file yields the same report as the sorted one") {
  Rng rng(6);
  std::vector<QAItem> items;
  for (int i = 0; i < 15; ++i) items.push_back(testsupport::random_item(rng, i));
  std::vector<std::string> lines;
  for (const auto& item : items) {
    nlohmann::ordered_json j;
    j["item_id"] = item.id;
    j["payload"] = payload_to_json(item.ground_truth);
    lines.push_back(j.dump());
  }
  const auto sorted_path = temp_path("ekit_sorted.jsonl");
  const auto shuffled_path = temp_path("ekit_shuffled.jsonl");
  {
    std::ofstream out(sorted_path, std::ios::trunc);
    for (const auto& line : lines) out << line << '\n';
  }
  rng.shuffle(lines);
  {
    std::ofstream out(shuffled_path, std::ios::trunc);
    for (const auto& line : lines) out << line << '\n';
  }
  const auto a = run_benchmark(items, sorted_path, default_scorer(), {});
  const auto b = run_benchmark(items, shuffled_path, default_scorer(), {});
  CHECK(a.report.to_json() == b.report.to_json());
}

TEST_CASE("missing predictions are reported per id and score zero") {
  Rng rng(7);
  std::vector<QAItem> items;
  for (int i = 0; i < 5; ++i) items.push_back(testsupport::random_item(rng, i));
  const auto path = temp_path("ekit_partial.jsonl");
  std::ofstream out(path, std::ios::trunc);
  nlohmann::ordered_json j;
  j["item_id"] = items[0].id;
  j["payload"] = payload_to_json(items[0].ground_truth);
  out << j.dump() << '\n';
  out.close();
  const auto run = run_benchmark(items, path, default_scorer(), {});
  CHECK(run.missing_ids.size() == 4);
  CHECK(run.report.overall == doctest::Approx(0.2));
}

TEST_CASE("online run against a scripted mock matches hand-scored values") {
  // mock replays the worked example payloads keyed on the question text
  testsupport::MockEndpoint mock([](const std::string& user_text) -> std::string {
    if (user_text.find("cup") != std::string::npos) {
      return "<think>scan</think><answer>[(296, 282), (321, 256)]</answer>";
    }
    if (user_text.find("banana") != std::string::npos) {
      return "<think>path</think><answer>[ [116, 114], [153, 97] ]</answer>";
    }
    return "<think>?</think><answer>(A)</answer>";
  });
  EndpointConfig endpoint;
  endpoint.base_url = mock.base_url();

  std::vector<QAItem> items = {pointing_item(), trajectory_item()};
  RunOptions options;
  options.benchmark_id = "mock_bench";
  options.audit_log_path = temp_path("ekit_audit.jsonl");
  const auto run = run_benchmark(items, endpoint, default_scorer(), options);
  // both answers equal the ground truth: self-score 1.0 each
  CHECK(run.report.overall == 1.0);
  CHECK(run.missing_ids.empty());

  // audit log has one record per item with the prompt hash
  const auto audit = read_file(options.audit_log_path);
  CHECK(split_lines(audit).size() == 2);
  CHECK(audit.find("point_1") != std::string::npos);
  CHECK(audit.find("prompt_hash") != std::string::npos);
}

TEST_CASE("in-flight requests never exceed the configured bound") {
  testsupport::MockEndpoint mock([](const std::string&) { return "<answer>(A)</answer>"; },
                                 /*fail_first=*/0, /*delay_ms=*/20);
  EndpointConfig endpoint;
  endpoint.base_url = mock.base_url();
  endpoint.max_in_flight = 3;

  Rng rng(8);
  std::vector<QAItem> items;
  for (int i = 0; i < 24; ++i) {
    QAItem item;
    item.id = "mc_" + std::to_string(i);
    item.family = TaskFamily::SpatialMC;
    item.prompt = "pick one";
    item.images = {};
    item.target_kind = PayloadKind::Option;
    item.ground_truth = OptionPayload{'A'};
    item.options = {"x", "y"};
    item.provenance = {"s", "t", 0};
    items.push_back(item);
  }
  const auto run = run_benchmark(items, endpoint, default_scorer(), {});
  CHECK(run.report.overall == 1.0);
  CHECK(mock.max_concurrent() <= 3);
  CHECK(mock.hits() == 24);
}

TEST_CASE("online and offline scoring agree on identical raw texts") {
  testsupport::MockEndpoint mock(
      [](const std::string&) { return "<think>t</think><answer>[(296, 282)]</answer>"; });
  EndpointConfig endpoint;
  endpoint.base_url = mock.base_url();
  std::vector<QAItem> items = {pointing_item()};

  RunOptions online_options;
  online_options.benchmark_id = "same";
  const auto online = run_benchmark(items, endpoint, default_scorer(), online_options);

  const auto path = temp_path("ekit_equiv.jsonl");
  std::ofstream out(path, std::ios::trunc);
  nlohmann::ordered_json j;
  j["item_id"] = items[0].id;
  j["raw_text"] = "<think>t</think><answer>[(296, 282)]</answer>";
  out << j.dump() << '\n';
  out.close();
  RunOptions offline_options;
  offline_options.benchmark_id = "same";
  const auto offline = run_benchmark(items, path, default_scorer(), offline_options);

  CHECK(online.report.to_json() == offline.report.to_json());
}
