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
#include <filesystem>
#include <set>

#include "ekit/scene/shard.hpp"
#include "ekit/spatial/forge.hpp"
#include "support/generators.hpp"

using namespace ekit;
using namespace ekit::scene;
using namespace ekit::spatial;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

SceneGraph mugs_scene() {
  SceneGraph g;
  g.scene_id = "mugs";
  g.frames.push_back({"frame_0", "mugs.png", 640, 480, std::nullopt, std::nullopt, std::nullopt});
  ObjectNode a;
  a.id = "mug_0";
  a.category = "mug";
  a.box = {90, 90, 110, 110};  // center (100, 100)
  ObjectNode b;
  b.id = "mug_1";
  b.category = "mug";
  b.box = {190, 140, 210, 160};  // center (200, 150)
  g.nodes.push_back(a);
  g.nodes.push_back(b);
  g.validate();
  return g;
}

}  // namespace

TEST_CASE("single cup: unique caption equals the coarse caption") {
  const auto g = testsupport::cups_scene({100});
  const auto tiers = caption_hierarchy(g, "cup_0");
  REQUIRE(tiers.size() >= 2);
  const auto& unique = tiers.back();
  CHECK(unique.level == CaptionLevel::Unique);
  CHECK(unique.text == "cup");
  CHECK(resolve(g, unique.resolver) == std::vector<std::string>{"cup_0"});
}

TEST_CASE("three cups: ordinal caption reproduces 'the third cup from the left'") {
  const auto g = testsupport::cups_scene({10, 50, 90});
  const auto tier = unique_caption(g, "cup_2");  // x = 90
  CHECK(tier.text == "the third cup from the left");
  CHECK(resolve(g, tier.resolver) == std::vector<std::string>{"cup_2"});
}

TEST_CASE("co-located twins: uniqueness unattainable") {
  SceneGraph g;
  g.scene_id = "twins";
  g.frames.push_back({"frame_0", "twins.png", 640, 480, std::nullopt, std::nullopt, std::nullopt});
  for (int i = 0; i < 2; ++i) {
    ObjectNode node;
    node.id = "box_" + std::to_string(i);
    node.category = "box";
    node.box = {100, 100, 200, 200};  // identical boxes, identical centers
    g.nodes.push_back(std::move(node));
  }
  g.validate();
  CHECK_THROWS_WITH_AS(unique_caption(g, "box_0"), doctest::Contains("uniqueness unattainable"),
                       Error);
}

TEST_CASE("nearest-anchor resolver matches an exhaustive distance scan") {
  const auto g = testsupport::cups_scene({10, 290, 500});  // sink box center is (350, 250)
  ResolverSpec spec;
  spec.category = "cup";
  RelationConstraint constraint;
  constraint.kind = RelationConstraint::Kind::NearestAnchor;
  constraint.anchor_id = "sink_0";
  spec.constraints.push_back(constraint);
  const auto resolved = resolve(g, spec);

  // exhaustive scan oracle
  const auto& sink = g.node_or_fail("sink_0");
  std::string best;
  double best_d = 1e300;
  for (const auto& node : g.nodes) {
    if (node.category != "cup") continue;
    const double dx = node.box.center_x() - sink.box.center_x();
    const double dy = node.box.center_y() - sink.box.center_y();
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d < best_d) {
      best_d = d;
      best = node.id;
    }
  }
  REQUIRE(resolved.size() == 1);
  CHECK(resolved[0] == best);
}

TEST_CASE("pointing over two mugs uses box centers") {
  const auto g = mugs_scene();
  SpatialForgeOptions options;
  options.seed = 5;
  const auto out = gen_pointing(g, options);
  REQUIRE(out.items.size() == 1);
  const auto& gt = std::get<PointsPayload>(out.items[0].ground_truth);
  REQUIRE(gt.points.size() == 2);
  CHECK(gt.points[0] == PixelPoint{100, 100});
  CHECK(gt.points[1] == PixelPoint{200, 150});
  CHECK(out.items[0].prompt.find("mug") != std::string::npos);
}

TEST_CASE("fourteen books resample to ten points, deterministic per seed") {
  SceneGraph g;
  g.scene_id = "books";
  g.frames.push_back({"frame_0", "books.png", 640, 480, std::nullopt, std::nullopt, std::nullopt});
  for (int i = 0; i < 14; ++i) {
    ObjectNode node;
    node.id = "book_" + std::to_string(i);
    node.category = "book";
    node.box = {10.0 + 40 * i % 600, 50, 30.0 + 40 * i % 600, 90};
    if (!(node.box.x1 < node.box.x2)) node.box.x2 = node.box.x1 + 5;
    g.nodes.push_back(std::move(node));
  }
  g.validate();
  SpatialForgeOptions options;
  options.seed = 9;
  const auto a = gen_pointing(g, options);
  const auto b = gen_pointing(g, options);
  REQUIRE(a.items.size() == 1);
  CHECK(std::get<PointsPayload>(a.items[0].ground_truth).points.size() == 10);
  CHECK(a.items[0] == b.items[0]);
}

TEST_CASE("pointing answers render to the tuple-list grammar and parse back") {
  const auto g = mugs_scene();
  const auto out = gen_pointing(g, SpatialForgeOptions{});
  const auto rendered = render_payload(out.items[0].ground_truth);
  CHECK(rendered == "[(100, 100), (200, 150)]");
  const auto parsed = parse_payload(rendered, PayloadKind::Points);
  REQUIRE(parsed.ok());
  CHECK(std::get<PointsPayload>(*parsed.payload).points.size() == 2);
}

TEST_CASE("grounding a sole laptop emits its box verbatim") {
  SceneGraph g;
  g.scene_id = "laptop";
  g.frames.push_back({"frame_0", "laptop.png", 640, 480, std::nullopt, std::nullopt, std::nullopt});
  ObjectNode node;
  node.id = "laptop_0";
  node.category = "laptop";
  node.box = {10, 20, 200, 180};
  g.nodes.push_back(node);
  g.validate();
  const auto out = gen_grounding(g, SpatialForgeOptions{});
  REQUIRE(out.items.size() == 1);
  const auto& box = std::get<BoxPayload>(out.items[0].ground_truth).box;
  CHECK(box.x1 == 10);
  CHECK(box.y1 == 20);
  CHECK(box.x2 == 200);
  CHECK(box.y2 == 180);
  CHECK(render_payload(out.items[0].ground_truth) == "[10, 20, 200, 180]");
}

TEST_CASE("identical anonymous objects produce no grounding item") {
  SceneGraph g;
  g.scene_id = "anon";
  g.frames.push_back({"frame_0", "anon.png", 640, 480, std::nullopt, std::nullopt, std::nullopt});
  for (int i = 0; i < 2; ++i) {
    ObjectNode node;
    node.id = "thing_" + std::to_string(i);
    node.category = "thing";
    node.box = {100, 100, 200, 200};
    g.nodes.push_back(std::move(node));
  }
  g.validate();
  const auto out = gen_grounding(g, SpatialForgeOptions{});
  CHECK(out.items.empty());
  CHECK(out.skips.size() == 2);
}

TEST_CASE("handbag handle affordance emits the part box") {
  SceneGraph g;
  g.scene_id = "handbag";
  g.frames.push_back({"frame_0", "bag.png", 640, 480, std::nullopt, std::nullopt, std::nullopt});
  ObjectNode node;
  node.id = "handbag_0";
  node.category = "handbag";
  node.box = {40, 30, 150, 120};
  node.parts.push_back({"handle", {50, 40, 90, 60}, "grasped to carry it"});
  g.nodes.push_back(node);
  g.validate();
  const auto out = gen_affordance(g, SpatialForgeOptions{});
  REQUIRE(out.items.size() == 1);
  const auto& box = std::get<BoxPayload>(out.items[0].ground_truth).box;
  CHECK(box.x1 == 50);
  CHECK(box.y1 == 40);
  CHECK(box.x2 == 90);
  CHECK(box.y2 == 60);
  CHECK(out.items[0].prompt.find("grasped to carry it") != std::string::npos);
}

TEST_CASE("whole-object affordance never names the category") {
  SceneGraph g;
  g.scene_id = "mouse";
  g.frames.push_back({"frame_0", "mouse.png", 640, 480, std::nullopt, std::nullopt, std::nullopt});
  ObjectNode node;
  node.id = "mouse_0";
  node.category = "mouse";
  node.box = {300, 300, 360, 340};
  node.functions.push_back("moved to control the cursor on a screen");
  // this one names the category and must be skipped
  node.functions.push_back("used as a mouse replacement");
  g.nodes.push_back(node);
  g.validate();
  const auto out = gen_affordance(g, SpatialForgeOptions{});
  REQUIRE(out.items.size() == 1);
  CHECK_FALSE(contains_word(out.items[0].prompt, "mouse"));
  REQUIRE(out.skips.size() == 1);
  CHECK(out.skips[0].reason.find("names the category") != std::string::npos);
}

TEST_CASE("objects without functional annotation are skipped") {
  const auto g = mugs_scene();
  const auto out = gen_affordance(g, SpatialForgeOptions{});
  CHECK(out.items.empty());
  CHECK(out.skips.size() == 2);
}

TEST_CASE("referring GT is always exactly one point") {
  Rng rng(71);
  for (int i = 0; i < 40; ++i) {
    const auto g = testsupport::random_spatial_scene(rng, i);
    const auto out = gen_referring(g, SpatialForgeOptions{});
    for (const auto& item : out.items) {
      CHECK(std::get<PointsPayload>(item.ground_truth).points.size() == 1);
    }
  }
}

TEST_CASE("tied nearest cups are skipped for referring") {
  SceneGraph g;
  g.scene_id = "tied";
  g.frames.push_back({"frame_0", "tied.png", 640, 480, std::nullopt, std::nullopt, std::nullopt});
  // two concentric cups: every ordinal axis and every anchor distance ties
  for (int i = 0; i < 2; ++i) {
    ObjectNode node;
    node.id = "cup_" + std::to_string(i);
    node.category = "cup";
    node.box = {100.0 - 10 * (i + 1), 100.0 - 10 * (i + 1), 100.0 + 10 * (i + 1),
                100.0 + 10 * (i + 1)};
    g.nodes.push_back(std::move(node));
  }
  ObjectNode sink;
  sink.id = "sink_0";
  sink.category = "sink";
  sink.box = {400, 200, 500, 300};
  g.nodes.push_back(sink);
  g.validate();
  const auto out = gen_referring(g, SpatialForgeOptions{});
  std::set<std::string> emitted;
  for (const auto& item : out.items) emitted.insert(item.id);
  CHECK(emitted.count("tied:referring:cup_0") == 0);
  CHECK(emitted.count("tied:referring:cup_1") == 0);
  CHECK(out.items.size() == 1);  // only the sink is referrable
}

TEST_CASE("emitted referring and grounding items resolve to their GT object") {
  Rng rng(123);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    const auto g = testsupport::random_spatial_scene(rng, i);
    SpatialForgeOptions options;
    options.seed = 17;
    for (const auto& out : {gen_referring(g, options), gen_grounding(g, options)}) {
      for (const auto& item : out.items) {
        // recover the node id from the item id, re-derive the caption, resolve
        const auto node_id = item.id.substr(item.id.rfind(':') + 1);
        const auto tier = unique_caption(g, node_id);
        const auto resolved = resolve(g, tier.resolver);
        REQUIRE(resolved.size() == 1);
        CHECK(resolved[0] == node_id);
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("placement prompts speak centimeters and satisfy the band oracle") {
  Rng rng(31);
  const auto g = testsupport::random_spatial_scene(rng, 7, /*force_3d=*/true);
  SpatialForgeOptions options;
  options.seed = 3;
  options.placement_offsets = {0.10};
  const auto grid = geom::build_occupancy(g, options.cell_size, {options.grid_margin});
  const auto out = gen_placement(g, grid, options);
  for (const auto& item : out.items) {
    CHECK(item.prompt.find("10cm") != std::string::npos);
    const auto& gt = std::get<PointsPayload>(item.ground_truth);
    CHECK(gt.points.size() <= 10);
    CHECK(!gt.points.empty());
  }
}

TEST_CASE("spatial MC: nearest question has the argmin as its correct option") {
  SceneGraph g;
  g.scene_id = "mc";
  g.frames.push_back({"frame_0", "mc.png", 640, 480, std::nullopt, std::nullopt, std::nullopt});
  const auto add = [&](const std::string& id, const std::string& category, double x, double y) {
    ObjectNode node;
    node.id = id;
    node.category = category;
    node.box = {x - 10, y - 10, x + 10, y + 10};
    g.nodes.push_back(std::move(node));
  };
  add("sofa_0", "sofa", 320, 240);
  add("lamp_0", "lamp", 330, 240);   // nearest
  add("table_0", "table", 500, 240);
  add("plant_0", "plant", 100, 100);
  g.validate();
  const auto out = gen_spatial_mc(g, SpatialForgeOptions{});
  const QAItem* nearest_item = nullptr;
  for (const auto& item : out.items) {
    if (item.id.find(":nearest") != std::string::npos) nearest_item = &item;
  }
  REQUIRE(nearest_item != nullptr);

  // exhaustive-scan oracle: recover the anchor from the question, then argmin
  const auto& question = nearest_item->prompt;
  const auto prefix = std::string("Which object is nearest the ");
  REQUIRE(question.rfind(prefix, 0) == 0);
  const auto anchor_category = question.substr(prefix.size(), question.find('?') - prefix.size());
  const ObjectNode* anchor = nullptr;
  for (const auto& node : g.nodes) {
    if (node.category == anchor_category) anchor = &node;
  }
  REQUIRE(anchor != nullptr);
  std::string best_category;
  double best_d = 1e300;
  for (const auto& node : g.nodes) {
    if (node.id == anchor->id) continue;
    const double dx = node.box.center_x() - anchor->box.center_x();
    const double dy = node.box.center_y() - anchor->box.center_y();
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d < best_d) {
      best_d = d;
      best_category = node.category;
    }
  }
  const char letter = std::get<OptionPayload>(nearest_item->ground_truth).letter;
  const auto& text = nearest_item->options[static_cast<std::size_t>(letter - 'A')];
  CHECK(text == "the " + best_category);
}

TEST_CASE("spatial MC distance option equals the relation engine value") {
  Rng rng(91);
  const auto g = testsupport::random_spatial_scene(rng, 3, /*force_3d=*/true);
  const auto out = gen_spatial_mc(g, SpatialForgeOptions{});
  for (const auto& item : out.items) {
    if (item.id.find(":distance") == std::string::npos) continue;
    const char letter = std::get<OptionPayload>(item.ground_truth).letter;
    const auto& text = item.options[static_cast<std::size_t>(letter - 'A')];
    // recompute through the relation engine oracle
    std::vector<const ObjectNode*> reps;
    std::map<std::string, const ObjectNode*> by_category;
    for (const auto& node : g.nodes) {
      auto& slot = by_category[node.category];
      if (!slot || node.id < slot->id) slot = &node;
    }
    std::vector<const ObjectNode*> three_d;
    for (const auto& [category, node] : by_category) {
      if (node->box3d) three_d.push_back(node);
    }
    REQUIRE(three_d.size() >= 2);
    const auto result = geom::evaluate_relation(
        g, {three_d[0]->id, {three_d[1]->id}, ConceptTag::DistanceBetween});
    char expected[32];
    std::snprintf(expected, sizeof(expected), "%.2f m", *result.scalar);
    CHECK(text == expected);
  }
}

TEST_CASE("MC option letters stay within A-D") {
  Rng rng(55);
  for (int i = 0; i < 30; ++i) {
    const auto g = testsupport::random_spatial_scene(rng, i);
    const auto out = gen_spatial_mc(g, SpatialForgeOptions{});
    for (const auto& item : out.items) {
      CHECK(item.options.size() >= 2);
      CHECK(item.options.size() <= 4);
      const char letter = std::get<OptionPayload>(item.ground_truth).letter;
      CHECK(letter >= 'A');
      CHECK(letter <= 'D');
    }
  }
}

TEST_CASE("forge output is deterministic and shards are byte-identical") {
  Rng rng(2);
  const auto g = testsupport::random_spatial_scene(rng, 1, /*force_3d=*/true);
  SpatialForgeOptions options;
  options.seed = 77;
  const auto a = forge_spatial(g, {}, options);
  const auto b = forge_spatial(g, {}, options);
  REQUIRE(a.items.size() == b.items.size());
  const auto path_a = temp_path("ekit_forge_a.jsonl");
  const auto path_b = temp_path("ekit_forge_b.jsonl");
  const auto ma = write_shard(a.items, path_a);
  const auto mb = write_shard(b.items, path_b);
  CHECK(ma.checksum == mb.checksum);
  CHECK(read_file(path_a) == read_file(path_b));
}

TEST_CASE("every pointing template is exercised over a large scene set") {
  Rng rng(888);
  std::set<std::string> used;
  SpatialForgeOptions options;
  options.seed = 1234;
  for (int i = 0; i < 400; ++i) {
    const auto g = testsupport::random_spatial_scene(rng, i);
    for (const auto& item : gen_pointing(g, options).items) {
      used.insert(item.provenance.template_id);
    }
  }
  CHECK(used.size() == 28);
}

TEST_CASE("no pointing or placement GT exceeds ten points and all stay in bounds") {
  Rng rng(99);
  for (int i = 0; i < 30; ++i) {
    const auto g = testsupport::random_spatial_scene(rng, i, /*force_3d=*/true);
    const auto out = forge_spatial(g, {}, SpatialForgeOptions{});
    for (const auto& item : out.items) {
      item.validate();  // bounds re-check
      if (item.target_kind == PayloadKind::Points) {
        CHECK(std::get<PointsPayload>(item.ground_truth).points.size() <= 10);
      }
    }
  }
}
