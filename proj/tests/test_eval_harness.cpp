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

#include <cmath>

#include "ekit/eval/report.hpp"
#include "ekit/eval/reward.hpp"
#include "support/frechet_oracle.hpp"
#include "support/generators.hpp"

using namespace ekit;
using namespace ekit::eval;
using namespace ekit::scene;

namespace {

Polygon rect(double x1, double y1, double x2, double y2) {
  return {{x1, y1}, {x2, y1}, {x2, y2}, {x1, y2}};
}

QAItem option_item(char correct) {
  QAItem item;
  item.id = "mc_1";
  item.family = TaskFamily::SpatialMC;
  item.prompt = "q";
  item.images = {"f.png"};
  item.target_kind = PayloadKind::Option;
  item.ground_truth = OptionPayload{correct};
  item.options = {"a", "b", "c", "d"};
  item.provenance = {"s", "t", 0};
  return item;
}

}  // namespace

TEST_CASE("one of two points inside a rectangle scores one half") {
  const Region region = rect(0, 0, 5, 5);
  CHECK(point_in_region_score({{1, 1}, {9, 9}}, region) == 0.5);
}

TEST_CASE("all points inside score one, empty prediction scores zero") {
  const Region region = rect(0, 0, 5, 5);
  CHECK(point_in_region_score({{1, 1}, {2, 3}, {4, 4}}, region) == 1.0);
  CHECK(point_in_region_score({}, region) == 0.0);
}

TEST_CASE("boundary points are strictly outside") {
  const Region region = rect(0, 0, 5, 5);
  CHECK_FALSE(point_strictly_inside({0, 2}, region));
  CHECK_FALSE(point_strictly_inside({5, 2}, region));
  CHECK_FALSE(point_strictly_inside({2, 0}, region));
  CHECK(point_strictly_inside({2, 2}, region));
}

TEST_CASE("point-in-region is invariant to point order") {
  Rng rng(7);
  const Region region = rect(10, 10, 100, 80);
  std::vector<PixelPoint> points;
  for (int i = 0; i < 20; ++i) {
    points.push_back({rng.uniform_double(0, 120), rng.uniform_double(0, 100)});
  }
  const double base = point_in_region_score(points, region);
  for (int trial = 0; trial < 10; ++trial) {
    rng.shuffle(points);
    CHECK(point_in_region_score(points, region) == base);
  }
}

TEST_CASE("mask regions score by pixel membership") {
  Mask2D mask;
  mask.width = 4;
  mask.height = 4;
  mask.runs = {5, 2, 2, 2, 5};  // 2x2 block at (1,1)
  const Region region = mask;
  CHECK(point_in_region_score({{1, 1}, {2, 2}, {0, 0}, {3, 3}}, region) == 0.5);
}

TEST_CASE("degenerate regions are rejected") {
  CHECK_THROWS_AS(point_in_region_score({{1, 1}}, Region{Polygon{{0, 0}, {1, 1}}}), Error);
}

TEST_CASE("box IoU basics") {
  CHECK(box_iou({0, 0, 2, 2}, {0, 0, 2, 2}) == 1.0);
  CHECK(box_iou({0, 0, 2, 2}, {1, 1, 3, 3}) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
  CHECK(box_iou({0, 0, 1, 1}, {2, 2, 3, 3}) == 0.0);
}

TEST_CASE("box IoU symmetry on random boxes") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = testsupport::random_box(rng, 640, 480);
    const auto b = testsupport::random_box(rng, 640, 480);
    CHECK(box_iou(a, b) == box_iou(b, a));
    CHECK(box_iou(a, a) == 1.0);
  }
}

TEST_CASE("affordance score applies the 0.5 hit threshold") {
  const auto hit = affordance_score({0, 0, 10, 10}, {0, 0, 10, 12});
  CHECK(hit.hit);
  const auto miss = affordance_score({0, 0, 2, 2}, {1, 1, 3, 3});
  CHECK_FALSE(miss.hit);
  CHECK(miss.iou == doctest::Approx(1.0 / 7.0));
}

TEST_CASE("Frechet of identical sequences is zero") {
  const std::vector<PixelPoint> a = {{0, 0}, {3, 4}, {9, 2}};
  CHECK(discrete_frechet(a, a) == 0.0);
}

TEST_CASE("parallel segments at distance one") {
  const std::vector<PixelPoint> a = {{0, 0}, {1, 0}};
  const std::vector<PixelPoint> b = {{0, 1}, {1, 1}};
  CHECK(discrete_frechet(a, b) == 1.0);
}

TEST_CASE("hand-derived Frechet case equals sqrt(5)") {
  const std::vector<PixelPoint> a = {{0, 0}, {2, 0}, {4, 0}};
  const std::vector<PixelPoint> b = {{0, 1}, {4, 1}};
  const double expected = std::sqrt(5.0);
  CHECK(std::abs(discrete_frechet(a, b) - expected) < 1e-9);
  CHECK(std::abs(testsupport::frechet_bruteforce(a, b) - expected) < 1e-9);
}

TEST_CASE("Frechet equals the brute-force coupling enumeration on short curves") {
  Rng rng(2025);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<PixelPoint> a, b;
    const auto na = rng.uniform_int(1, 6);
    const auto nb = rng.uniform_int(1, 6);
    for (int i = 0; i < na; ++i) {
      a.push_back({static_cast<double>(rng.uniform_int(-20, 20)),
                   static_cast<double>(rng.uniform_int(-20, 20))});
    }
    for (int i = 0; i < nb; ++i) {
      b.push_back({static_cast<double>(rng.uniform_int(-20, 20)),
                   static_cast<double>(rng.uniform_int(-20, 20))});
    }
    CHECK(discrete_frechet(a, b) == testsupport::frechet_bruteforce(a, b));
  }
}

TEST_CASE("Frechet symmetry and zero-iff-identical on random curves") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PixelPoint> a, b;
    const auto na = rng.uniform_int(1, 8);
    const auto nb = rng.uniform_int(1, 8);
    for (int i = 0; i < na; ++i) a.push_back({rng.uniform_double(0, 10), rng.uniform_double(0, 10)});
    for (int i = 0; i < nb; ++i) b.push_back({rng.uniform_double(0, 10), rng.uniform_double(0, 10)});
    const double d = discrete_frechet(a, b);
    CHECK(d == discrete_frechet(b, a));
    CHECK(d >= 0.0);
  }
}

TEST_CASE("Frechet normalization divides by image dimensions") {
  const std::vector<PixelPoint> a = {{0, 0}, {640, 0}};
  const std::vector<PixelPoint> b = {{0, 480}, {640, 480}};
  CHECK(discrete_frechet(a, b, {{640, 480}}) == doctest::Approx(1.0));
}

TEST_CASE("empty trajectory is an error") {
  CHECK_THROWS_AS(discrete_frechet({}, {{0, 0}}), Error);
}

TEST_CASE("MC accuracy counts exact letter matches; failures are wrong") {
  std::vector<QAItem> items;
  for (int i = 0; i < 4; ++i) {
    auto item = option_item('A');
    item.id = "mc_" + std::to_string(i);
    items.push_back(item);
  }
  std::vector<Prediction> predictions;
  for (int i = 0; i < 3; ++i) {
    predictions.push_back({"mc_" + std::to_string(i), "(A)", OptionPayload{'A'}, ""});
  }
  predictions.push_back({"mc_3", "(B)", OptionPayload{'B'}, ""});
  CHECK(mc_accuracy(predictions, items) == 0.75);

  std::vector<Prediction> failures;
  for (int i = 0; i < 4; ++i) {
    failures.push_back({"mc_" + std::to_string(i), "garbage", std::nullopt, "no parse"});
  }
  CHECK(mc_accuracy(failures, items) == 0.0);

  std::vector<Prediction> unknown = {{"mc_99", "(A)", OptionPayload{'A'}, ""}};
  CHECK_THROWS_AS(mc_accuracy(unknown, items), Error);
}

TEST_CASE("random-letter baseline sits in the binomial band") {
  std::vector<QAItem> items;
  std::vector<Prediction> predictions;
  Rng rng(404);
  for (int i = 0; i < 10000; ++i) {
    auto item = option_item(static_cast<char>('A' + rng.uniform_int(0, 3)));
    item.id = "mc_" + std::to_string(i);
    items.push_back(item);
    const char guess = static_cast<char>('A' + rng.uniform_int(0, 3));
    predictions.push_back({item.id, std::string(1, guess), OptionPayload{guess}, ""});
  }
  const double accuracy = mc_accuracy(predictions, items);
  CHECK(accuracy > 0.25 - 0.013);
  CHECK(accuracy < 0.25 + 0.013);
}

namespace {

temporal::WorkflowGraph two_node_reference() {
  temporal::WorkflowGraph ref;
  temporal::Subtask t1;
  t1.id = "t1";
  t1.robot = "argo";
  t1.description = "Fetch the mug and hand it over at user area";
  temporal::Subtask t2;
  t2.id = "t2";
  t2.robot = "argo";
  t2.description = "Confirm the goal is met and report completion";
  t2.predecessors = {"t1"};
  ref.subtasks = {t1, t2};
  return ref;
}

}  // namespace

TEST_CASE("plan score: identity scores one") {
  const auto ref = two_node_reference();
  CHECK(plan_score(ref, ref).score == 1.0);
}

TEST_CASE("plan score: one missing subtask gives the hand-computed harmonic mean") {
  const auto ref = two_node_reference();
  temporal::WorkflowGraph pred;
  pred.subtasks = {ref.subtasks[0]};
  const auto result = plan_score(pred, ref);
  // F1 = 2/3, precedence vacuous = 1, harmonic mean = 0.8
  CHECK(result.score == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("plan score: cyclic prediction scores zero with a cycle diagnostic") {
  auto pred = two_node_reference();
  pred.subtasks[0].predecessors = {"t2"};  // t1 <-> t2
  const auto result = plan_score(pred, two_node_reference());
  CHECK(result.score == 0.0);
  CHECK(result.diagnostics == "invalid: cycle");
}

TEST_CASE("plan score: fully reversed precedence zeroes the harmonic mean") {
  const auto ref = two_node_reference();
  auto pred = ref;
  pred.subtasks[0].predecessors = {"t2"};
  pred.subtasks[1].predecessors = {};
  const auto result = plan_score(pred, ref);
  CHECK(result.score == 0.0);
  CHECK(result.diagnostics.find("matched 2") != std::string::npos);
}

TEST_CASE("plan score: partial precedence agreement lands strictly between 0 and 1") {
  temporal::WorkflowGraph ref;
  for (int i = 1; i <= 3; ++i) {
    temporal::Subtask t;
    t.id = "t" + std::to_string(i);
    t.robot = "argo";
    t.description = "step " + std::to_string(i);
    if (i > 1) t.predecessors = {"t" + std::to_string(i - 1)};
    ref.subtasks.push_back(t);
  }
  auto pred = ref;  // drop the t2 -> t3 edge: (t1,t2) agrees, (t1,t3)/(t2,t3) differ
  pred.subtasks[2].predecessors = {};
  const auto result = plan_score(pred, ref);
  // F1 = 1, precedence = 1/3, harmonic mean = 0.5
  CHECK(result.score == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("rlvr reward: correct option with think tags gives (1, 1.0, 1.1)") {
  const auto item = option_item('B');
  const auto reward = rlvr_reward("<think>steps...</think><answer>(B)</answer>", item);
  CHECK(reward.format == 1);
  CHECK(reward.accuracy == 1.0);
  CHECK(reward.composite == doctest::Approx(1.1));
}

TEST_CASE("rlvr reward: correct answer without think tags gives (0, 1.0, 1.0)") {
  const auto item = option_item('B');
  const auto reward = rlvr_reward("<answer>(B)</answer>", item);
  CHECK(reward.format == 0);
  CHECK(reward.accuracy == 1.0);
  CHECK(reward.composite == doctest::Approx(1.0));
}

TEST_CASE("rlvr reward: malformed payload scores zero accuracy") {
  const auto item = option_item('B');
  const auto reward = rlvr_reward("<think>...</think><answer>maybe B?</answer>", item);
  CHECK(reward.format == 1);
  CHECK(reward.accuracy == 0.0);
  CHECK(reward.composite == doctest::Approx(0.1));
  const auto no_answer = rlvr_reward("I think the answer is B", item);
  CHECK(no_answer.format == 0);
  CHECK(no_answer.accuracy == 0.0);
  CHECK(no_answer.composite == 0.0);
}

TEST_CASE("rlvr reward never throws on arbitrary text") {
  const auto item = option_item('A');
  for (const auto* text : {"", "<answer>", "</answer><answer>", "<think><think></think>",
                           "\xff\xfe garbage", "<answer>[(1,2)</answer>"}) {
    const auto reward = rlvr_reward(text, item);
    CHECK(reward.accuracy >= 0.0);
  }
}

TEST_CASE("rlvr composite is monotone in accuracy at fixed format") {
  // two-point ground truth without region: one hit vs two hits
  QAItem item;
  item.id = "p";
  item.family = TaskFamily::Pointing;
  item.prompt = "q";
  item.images = {"f.png"};
  item.image_size = {{640, 480}};
  item.target_kind = PayloadKind::Points;
  item.ground_truth = PointsPayload{{{100, 100}, {300, 300}}, {}};
  item.provenance = {"s", "t", 0};
  const auto low = rlvr_reward("<think>.</think><answer>[(100, 100), (50, 400)]</answer>", item);
  const auto high = rlvr_reward("<think>.</think><answer>[(100, 100), (300, 300)]</answer>", item);
  CHECK(low.format == high.format);
  CHECK(high.accuracy > low.accuracy);
  CHECK(high.composite > low.composite);
}

TEST_CASE("self-score: ground truth as the prediction maxes every family") {
  Rng rng(606);
  // option
  CHECK(score_payload(OptionPayload{'C'}, option_item('C')) == 1.0);
  // box
  QAItem box_item;
  box_item.id = "b";
  box_item.family = TaskFamily::Grounding;
  box_item.prompt = "q";
  box_item.images = {"f.png"};
  box_item.target_kind = PayloadKind::Box;
  box_item.ground_truth = BoxPayload{{10, 20, 200, 180}};
  CHECK(score_payload(box_item.ground_truth, box_item) == 1.0);
  // points with region
  QAItem point_item;
  point_item.id = "p";
  point_item.family = TaskFamily::Placement;
  point_item.prompt = "q";
  point_item.images = {"f.png"};
  point_item.target_kind = PayloadKind::Points;
  point_item.ground_truth = PointsPayload{{{50, 50}, {60, 60}}, Region{rect(40, 40, 80, 80)}};
  CHECK(score_payload(point_item.ground_truth, point_item) == 1.0);
  // points without region
  QAItem point_item2 = point_item;
  point_item2.ground_truth = PointsPayload{{{50, 50}, {60, 60}}, {}};
  CHECK(score_payload(point_item2.ground_truth, point_item2) == 1.0);
  // trajectory: DFD 0 -> accuracy 1
  QAItem traj_item;
  traj_item.id = "t";
  traj_item.family = TaskFamily::Pointing;
  traj_item.prompt = "q";
  traj_item.images = {"f.png"};
  traj_item.target_kind = PayloadKind::Trajectory;
  traj_item.ground_truth = TrajectoryPayload{{{0, 0}, {10, 10}, {20, 5}}};
  CHECK(score_payload(traj_item.ground_truth, traj_item) == 1.0);
  // free text
  QAItem text_item;
  text_item.id = "ft";
  text_item.family = TaskFamily::CloseLoop;
  text_item.prompt = "q";
  text_item.images = {"f.png"};
  text_item.target_kind = PayloadKind::FreeText;
  text_item.ground_truth = FreeTextPayload{"Pour oil."};
  CHECK(score_payload(text_item.ground_truth, text_item) == 1.0);
  // workflow
  QAItem wf_item;
  wf_item.id = "wf";
  wf_item.family = TaskFamily::MultiRobot;
  wf_item.prompt = "q";
  wf_item.images = {"f.png"};
  wf_item.target_kind = PayloadKind::Workflow;
  wf_item.ground_truth = WorkflowPayload{temporal::workflow_to_json(two_node_reference())};
  CHECK(score_payload(wf_item.ground_truth, wf_item) == 1.0);
  (void)rng;
}

TEST_CASE("aggregate: item-weighted overall mean over groups") {
  std::vector<ItemRecord> records;
  for (int i = 0; i < 698; ++i) records.push_back({"seen_" + std::to_string(i), "seen", 0.6433, {}});
  for (int i = 0; i < 302; ++i) {
    records.push_back({"unseen_" + std::to_string(i), "unseen", 0.6188, {}});
  }
  const auto report = aggregate("placement_bench", std::move(records));
  CHECK(report.groups.at("seen").mean == doctest::Approx(0.6433));
  CHECK(report.groups.at("unseen").mean == doctest::Approx(0.6188));
  const double expected = (698 * 0.6433 + 302 * 0.6188) / 1000.0;
  CHECK(report.overall == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("aggregate: single record equals itself; empty set is an error") {
  const auto report = aggregate("one", {{"only", "all", 0.42, {}}});
  CHECK(report.overall == 0.42);
  CHECK(report.groups.at("all").count == 1);
  CHECK_THROWS_AS(aggregate("none", {}), Error);
}

TEST_CASE("trajectory reports carry the lower-is-better orientation") {
  const auto report =
      aggregate("trajectory_bench", {{"item_1", "all", 0.2368, {}}}, /*higher_is_better=*/false);
  CHECK(report.to_json()["orientation"] == "lower_is_better");
  CHECK(report.render_table().find("lower is better") != std::string::npos);
  CHECK(report.overall == doctest::Approx(0.2368));
}
