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

#include "ekit/spatial/forge.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ekit/geom/relations.hpp"

namespace ekit::spatial {

using geom::OccupancyGrid;
using geom::PlacementDirection;
using scene::ObjectNode;
using scene::Payload;
using scene::PayloadKind;
using scene::PixelPoint;
using scene::QAItem;
using scene::SceneGraph;
using scene::TaskFamily;

nlohmann::ordered_json ForgeSkip::to_json() const {
  nlohmann::ordered_json j;
  j["scene_id"] = scene_id;
  j["family"] = scene::family_name(family);
  j["subject"] = subject;
  j["reason"] = reason;
  return j;
}

void ForgeOutput::merge(ForgeOutput other) {
  items.insert(items.end(), std::make_move_iterator(other.items.begin()),
               std::make_move_iterator(other.items.end()));
  skips.insert(skips.end(), std::make_move_iterator(other.skips.begin()),
               std::make_move_iterator(other.skips.end()));
}

PixelPoint node_point(const ObjectNode& node, int width, int height) {
  double x, y;
  if (node.mask) {
    const auto [cx, cy] = node.mask->centroid();
    x = cx;
    y = cy;
  } else {
    x = std::llround(node.box.center_x());
    y = std::llround(node.box.center_y());
  }
  x = std::min(std::max(x, 0.0), static_cast<double>(width - 1));
  y = std::min(std::max(y, 0.0), static_cast<double>(height - 1));
  return {x, y};
}

namespace {

QAItem base_item(const SceneGraph& scene, TaskFamily family, const std::string& slug,
                 const std::string& template_id, std::uint64_t item_seed) {
  const auto& frame = scene.primary_frame();
  QAItem item;
  item.id = scene.scene_id + ":" + scene::family_name(family) + ":" + slug;
  item.family = family;
  item.images = {frame.image};
  item.image_size = {{frame.width, frame.height}};
  item.provenance = {scene.scene_id, template_id, item_seed};
  return item;
}

const SurfaceTemplate& pick_template(Rng& rng,
                                     const std::vector<const SurfaceTemplate*>& pool) {
  if (pool.empty()) fail("forge: empty template pool");
  return *pool[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
}

std::vector<const ObjectNode*> nodes_by_id(const SceneGraph& scene) {
  std::vector<const ObjectNode*> nodes;
  for (const auto& node : scene.nodes) nodes.push_back(&node);
  std::sort(nodes.begin(), nodes.end(),
            [](const ObjectNode* a, const ObjectNode* b) { return a->id < b->id; });
  return nodes;
}

scene::Box2D rounded_box(const scene::Box2D& box, int width, int height) {
  scene::Box2D out;
  out.x1 = std::max(0.0, std::floor(box.x1 + 0.5));
  out.y1 = std::max(0.0, std::floor(box.y1 + 0.5));
  out.x2 = std::min(static_cast<double>(width), std::floor(box.x2 + 0.5));
  out.y2 = std::min(static_cast<double>(height), std::floor(box.y2 + 0.5));
  if (!(out.x1 < out.x2)) out.x2 = out.x1 + 1;
  if (!(out.y1 < out.y2)) out.y2 = out.y1 + 1;
  return out;
}

struct McOption {
  std::string text;
  bool correct = false;
};

/// Shuffles options, assigns letters, renders the option block, and fills the
/// item's option fields. Returns false when fewer than two options remain.
bool finalize_mc(QAItem& item, std::vector<McOption> options, const std::string& question,
                 Rng& rng, int max_options) {
  if (options.size() > static_cast<std::size_t>(max_options)) {
    options.resize(static_cast<std::size_t>(max_options));
  }
  if (options.size() < 2) return false;
  rng.shuffle(options);
  std::ostringstream prompt;
  prompt << question << "\nOptions:";
  char letter = 'A';
  char correct_letter = 0;
  for (const auto& option : options) {
    prompt << " (" << letter << ") " << option.text;
    item.options.push_back(option.text);
    if (option.correct) correct_letter = letter;
    ++letter;
  }
  prompt << "\n" << option_format_sentence();
  if (correct_letter == 0) return false;
  item.prompt = prompt.str();
  item.target_kind = PayloadKind::Option;
  item.ground_truth = scene::OptionPayload{correct_letter};
  return true;
}

}  // namespace

ForgeOutput gen_pointing(const SceneGraph& scene, const SpatialForgeOptions& options) {
  ForgeOutput out;
  const auto& frame = scene.primary_frame();
  const auto pool = options.pack().for_family(TaskFamily::Pointing);

  std::map<std::string, std::vector<const ObjectNode*>> by_category;
  for (const auto& node : scene.nodes) by_category[node.category].push_back(&node);

  for (auto& [category, instances] : by_category) {
    std::sort(instances.begin(), instances.end(),
              [](const ObjectNode* a, const ObjectNode* b) { return a->id < b->id; });
    const auto item_seed = derive_seed(options.seed, {scene.scene_id, "pointing", category});
    Rng rng(item_seed);

    std::vector<PixelPoint> points;
    points.reserve(instances.size());
    for (const auto* node : instances) {
      points.push_back(node_point(*node, frame.width, frame.height));
    }
    if (points.size() > options.max_points) {
      const auto keep = rng.sample_without_replacement(points.size(), options.max_points);
      std::vector<PixelPoint> kept;
      for (const auto index : keep) kept.push_back(points[index]);
      points = std::move(kept);
    }

    const auto& tmpl = pick_template(rng, pool);
    auto item = base_item(scene, TaskFamily::Pointing, category, tmpl.id, item_seed);
    item.prompt = fill_template(tmpl.text, {{"label", category}}) + " " +
                  point_list_format_sentence();
    item.target_kind = PayloadKind::Points;
    item.ground_truth = scene::PointsPayload{std::move(points), {}};
    item.validate();
    out.items.push_back(std::move(item));
  }
  return out;
}

ForgeOutput gen_grounding(const SceneGraph& scene, const SpatialForgeOptions& options) {
  ForgeOutput out;
  const auto& frame = scene.primary_frame();
  const auto pool = options.pack().for_family(TaskFamily::Grounding);

  for (const auto* node : nodes_by_id(scene)) {
    CaptionTier caption;
    try {
      caption = unique_caption(scene, node->id);
    } catch (const Error& e) {
      out.skips.push_back({scene.scene_id, TaskFamily::Grounding, node->id, e.what()});
      continue;
    }
    const auto resolved = resolve(scene, caption.resolver);
    if (resolved.size() != 1 || resolved[0] != node->id) {
      out.skips.push_back(
          {scene.scene_id, TaskFamily::Grounding, node->id, "resolver did not isolate the node"});
      continue;
    }
    const auto item_seed = derive_seed(options.seed, {scene.scene_id, "grounding", node->id});
    Rng rng(item_seed);
    const auto& tmpl = pick_template(rng, pool);
    auto item = base_item(scene, TaskFamily::Grounding, node->id, tmpl.id, item_seed);
    item.prompt =
        fill_template(tmpl.text, {{"caption", caption.text}}) + " " + box_format_sentence();
    item.target_kind = PayloadKind::Box;
    item.ground_truth = scene::BoxPayload{rounded_box(node->box, frame.width, frame.height)};
    item.validate();
    out.items.push_back(std::move(item));
  }
  return out;
}

ForgeOutput gen_affordance(const SceneGraph& scene, const SpatialForgeOptions& options) {
  ForgeOutput out;
  const auto& frame = scene.primary_frame();
  const auto& pack = options.pack();

  for (const auto* node : nodes_by_id(scene)) {
    for (const auto& part : node->parts) {
      const auto slug = node->id + ":part:" + part.name;
      const auto item_seed = derive_seed(options.seed, {scene.scene_id, "affordance", slug});
      Rng rng(item_seed);
      std::string prompt;
      std::string template_id;
      if (part.function) {
        std::vector<const SurfaceTemplate*> pool;
        for (const auto& t : pack.templates) {
          if (t.id.rfind("affordance_part_0", 0) == 0 && t.id != "affordance_part_03") {
            pool.push_back(&t);
          }
        }
        const auto& tmpl = pick_template(rng, pool);
        template_id = tmpl.id;
        prompt = fill_template(tmpl.text,
                               {{"category", node->category}, {"function", *part.function}});
      } else {
        template_id = "affordance_part_03";
        for (const auto& t : pack.templates) {
          if (t.id == template_id) {
            prompt =
                fill_template(t.text, {{"part", part.name}, {"category", node->category}});
          }
        }
      }
      auto item = base_item(scene, TaskFamily::Affordance, slug, template_id, item_seed);
      item.prompt = prompt;
      item.target_kind = PayloadKind::Box;
      item.ground_truth = scene::BoxPayload{rounded_box(part.box, frame.width, frame.height)};
      item.validate();
      out.items.push_back(std::move(item));
    }

    for (std::size_t fi = 0; fi < node->functions.size(); ++fi) {
      const auto& function = node->functions[fi];
      const auto slug = node->id + ":whole:" + std::to_string(fi);
      const auto item_seed = derive_seed(options.seed, {scene.scene_id, "affordance", slug});
      Rng rng(item_seed);
      std::vector<const SurfaceTemplate*> pool;
      for (const auto& t : pack.templates) {
        if (t.id.rfind("affordance_whole_", 0) == 0) pool.push_back(&t);
      }
      const auto& tmpl = pick_template(rng, pool);
      const auto prompt = fill_template(tmpl.text, {{"function", function}});
      // whole-object questions must not name the object
      if (contains_word(prompt, node->category)) {
        out.skips.push_back({scene.scene_id, TaskFamily::Affordance, slug,
                             "function phrase names the category"});
        continue;
      }
      auto item = base_item(scene, TaskFamily::Affordance, slug, tmpl.id, item_seed);
      item.prompt = prompt;
      item.target_kind = PayloadKind::Box;
      item.ground_truth = scene::BoxPayload{rounded_box(node->box, frame.width, frame.height)};
      item.validate();
      out.items.push_back(std::move(item));
    }

    if (node->parts.empty() && node->functions.empty()) {
      out.skips.push_back(
          {scene.scene_id, TaskFamily::Affordance, node->id, "no functional annotation"});
    }
  }
  return out;
}

ForgeOutput gen_referring(const SceneGraph& scene, const SpatialForgeOptions& options) {
  ForgeOutput out;
  const auto& frame = scene.primary_frame();
  const auto pool = options.pack().for_family(TaskFamily::Referring);

  for (const auto* node : nodes_by_id(scene)) {
    CaptionTier caption;
    try {
      caption = unique_caption(scene, node->id);
    } catch (const Error& e) {
      out.skips.push_back({scene.scene_id, TaskFamily::Referring, node->id, e.what()});
      continue;
    }
    const auto resolved = resolve(scene, caption.resolver);
    if (resolved.size() != 1 || resolved[0] != node->id) {
      out.skips.push_back(
          {scene.scene_id, TaskFamily::Referring, node->id, "resolver did not isolate the node"});
      continue;
    }
    const auto item_seed = derive_seed(options.seed, {scene.scene_id, "referring", node->id});
    Rng rng(item_seed);
    const auto& tmpl = pick_template(rng, pool);
    auto item = base_item(scene, TaskFamily::Referring, node->id, tmpl.id, item_seed);
    item.prompt =
        fill_template(tmpl.text, {{"caption", caption.text}}) + " " + point_list_format_sentence();
    item.target_kind = PayloadKind::Points;
    item.ground_truth =
        scene::PointsPayload{{node_point(*node, frame.width, frame.height)}, {}};
    item.validate();
    out.items.push_back(std::move(item));
  }
  return out;
}

namespace {

const std::string& direction_phrase(PlacementDirection direction) {
  static const std::string phrases[] = {"left", "right", "in front", "to the rear"};
  return phrases[static_cast<int>(direction)];
}

}  // namespace

ForgeOutput gen_placement(const SceneGraph& scene, const OccupancyGrid& grid,
                          const SpatialForgeOptions& options) {
  ForgeOutput out;
  const auto& frame = scene.primary_frame();
  if (!grid.intrinsics) {
    out.skips.push_back({scene.scene_id, TaskFamily::Placement, "*",
                         "scene has no intrinsics; image-space answers unavailable"});
    return out;
  }
  if (grid.free_count() == 0) fail("gen_placement: no free cell in occupancy grid");
  const auto pool = options.pack().for_family(TaskFamily::Placement);

  for (const auto* node : nodes_by_id(scene)) {
    if (!grid.footprints.count(node->id)) continue;
    CaptionTier caption;
    try {
      caption = unique_caption(scene, node->id);
    } catch (const Error& e) {
      out.skips.push_back({scene.scene_id, TaskFamily::Placement, node->id, e.what()});
      continue;
    }
    const auto item_seed = derive_seed(options.seed, {scene.scene_id, "placement", node->id});
    Rng rng(item_seed);

    // seeded shuffle over (direction, offset) pairs; first feasible wins
    std::vector<std::pair<PlacementDirection, double>> combos;
    for (const auto direction :
         {PlacementDirection::Left, PlacementDirection::Right, PlacementDirection::Front,
          PlacementDirection::Behind}) {
      for (const auto offset : options.placement_offsets) combos.emplace_back(direction, offset);
    }
    rng.shuffle(combos);

    bool emitted = false;
    for (const auto& [direction, offset] : combos) {
      const auto candidates = geom::placement_candidates(grid, node->id, direction, offset);
      if (candidates.empty()) continue;
      const auto n = std::min<std::size_t>(options.max_points, candidates.size());
      const auto samples =
          geom::sample_placement(grid, node->id, direction, offset, n, item_seed);
      std::vector<PixelPoint> points;
      points.reserve(samples.size());
      for (const auto& sample : samples) {
        if (!sample.pixel) continue;
        const double x = std::min(std::max(std::floor(sample.pixel->x + 0.5), 0.0),
                                  static_cast<double>(frame.width - 1));
        const double y = std::min(std::max(std::floor(sample.pixel->y + 0.5), 0.0),
                                  static_cast<double>(frame.height - 1));
        points.push_back({x, y});
      }
      if (points.empty()) continue;

      const auto& tmpl = pick_template(rng, pool);
      auto item = base_item(scene, TaskFamily::Placement, node->id, tmpl.id, item_seed);
      item.prompt = fill_template(tmpl.text,
                                  {{"anchor", caption.text},
                                   {"offset_cm", std::to_string(static_cast<int>(
                                                     std::llround(offset * 100.0)))},
                                   {"direction", direction_phrase(direction)}}) +
                    " " + point_list_format_sentence();
      item.target_kind = PayloadKind::Points;
      item.ground_truth = scene::PointsPayload{std::move(points), {}};
      item.validate();
      out.items.push_back(std::move(item));
      emitted = true;
      break;
    }
    if (!emitted) {
      out.skips.push_back({scene.scene_id, TaskFamily::Placement, node->id,
                           "no free cell satisfies any direction/offset band"});
    }
  }
  return out;
}

namespace {

/// One representative node per category, id-sorted, categories unique.
std::vector<const ObjectNode*> category_representatives(const SceneGraph& scene) {
  std::map<std::string, const ObjectNode*> reps;
  for (const auto& node : scene.nodes) {
    auto& slot = reps[node.category];
    if (!slot || node.id < slot->id) slot = &node;
  }
  std::vector<const ObjectNode*> out;
  for (const auto& [category, node] : reps) out.push_back(node);
  return out;
}

const std::string& bearing_phrase(const std::string& concept_name) {
  static const std::map<std::string, std::string> phrases = {
      {"dir_front", "in front of"},      {"dir_front_right", "front-right of"},
      {"dir_right", "right of"},         {"dir_back_right", "back-right of"},
      {"dir_back", "behind"},            {"dir_back_left", "back-left of"},
      {"dir_left", "left of"},           {"dir_front_left", "front-left of"},
  };
  return phrases.at(concept_name);
}

}  // namespace

ForgeOutput gen_spatial_mc(const SceneGraph& scene, const SpatialForgeOptions& options) {
  ForgeOutput out;
  const auto reps = category_representatives(scene);

  // nearest: which category is closest to a unique-category anchor
  for (const auto* anchor : reps) {
    if (scene.nodes_of_category(anchor->category).size() != 1 || reps.size() < 3) break;
    std::vector<std::string> candidate_ids;
    for (const auto* rep : reps) {
      if (rep != anchor) candidate_ids.push_back(rep->id);
    }
    const auto result =
        geom::evaluate_relation(scene, {anchor->id, candidate_ids, scene::ConceptTag::Nearest});
    if (!result.applicable || result.tie) break;

    // distances ascending give the correct answer and rank-step distractors
    std::vector<std::pair<double, const ObjectNode*>> ranked;
    for (const auto& id : candidate_ids) {
      const auto r = geom::evaluate_relation(scene, {anchor->id, {id}, scene::ConceptTag::Nearest});
      ranked.emplace_back(*r.scalar, scene.find_node(id));
    }
    std::sort(ranked.begin(), ranked.end());
    const auto item_seed = derive_seed(options.seed, {scene.scene_id, "mc", "nearest"});
    Rng rng(item_seed);
    std::vector<McOption> mc_options;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      mc_options.push_back({"the " + ranked[i].second->category, i == 0});
    }
    auto item = base_item(scene, TaskFamily::SpatialMC, "nearest", "spatial_mc_01", item_seed);
    if (finalize_mc(item, std::move(mc_options),
                    "Which object is nearest the " + anchor->category + "?", rng,
                    options.mc_options)) {
      item.validate();
      out.items.push_back(std::move(item));
    }
    break;
  }

  // metric distance between the first 3D pair of distinct categories
  {
    std::vector<const ObjectNode*> three_d;
    for (const auto* rep : reps) {
      if (rep->box3d) three_d.push_back(rep);
    }
    if (three_d.size() >= 2) {
      const auto* a = three_d[0];
      const auto* b = three_d[1];
      const auto result = geom::evaluate_relation(
          scene, {a->id, {b->id}, scene::ConceptTag::DistanceBetween});
      if (result.applicable) {
        const double d = *result.scalar;
        const auto fmt = [](double v) {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%.2f m", v);
          return std::string(buf);
        };
        std::vector<McOption> mc_options = {{fmt(d), true},
                                            {fmt(d * 0.5), false},
                                            {fmt(d * 1.5), false},
                                            {fmt(d * 2.0), false}};
        std::set<std::string> texts;
        bool collision = false;
        for (const auto& option : mc_options) {
          if (!texts.insert(option.text).second) collision = true;
        }
        if (!collision) {
          const auto item_seed = derive_seed(options.seed, {scene.scene_id, "mc", "distance"});
          Rng rng(item_seed);
          auto item =
              base_item(scene, TaskFamily::SpatialMC, "distance", "spatial_mc_01", item_seed);
          if (finalize_mc(item, std::move(mc_options),
                          "What is the distance between the " + a->category + " and the " +
                              b->category + "?",
                          rng, options.mc_options)) {
            item.validate();
            out.items.push_back(std::move(item));
          }
        }
      }
    }
  }

  // left/right yes-no over the first pair with distinct center x
  for (std::size_t i = 0; i + 1 < reps.size(); ++i) {
    const auto* a = reps[i];
    const auto* b = reps[i + 1];
    const auto result = geom::evaluate_relation(scene, {a->id, {b->id}, scene::ConceptTag::LeftOf});
    if (!result.applicable) continue;
    const auto mirror =
        geom::evaluate_relation(scene, {a->id, {b->id}, scene::ConceptTag::RightOf});
    if (!*result.boolean && !*mirror.boolean) continue;  // tied centers
    const auto item_seed = derive_seed(options.seed, {scene.scene_id, "mc", "leftright"});
    Rng rng(item_seed);
    std::vector<McOption> mc_options = {{"Yes", *result.boolean}, {"No", !*result.boolean}};
    auto item = base_item(scene, TaskFamily::SpatialMC, "leftright", "spatial_mc_01", item_seed);
    if (finalize_mc(item, std::move(mc_options),
                    "Is the " + a->category + " to the left of the " + b->category + "?", rng,
                    options.mc_options)) {
      item.validate();
      out.items.push_back(std::move(item));
    }
    break;
  }

  // tallest among 3D categories
  {
    std::vector<const ObjectNode*> three_d;
    for (const auto* rep : reps) {
      if (rep->box3d) three_d.push_back(rep);
    }
    if (three_d.size() >= 2) {
      std::vector<std::string> ids;
      for (const auto* node : three_d) ids.push_back(node->id);
      const auto result =
          geom::evaluate_relation(scene, {ids[0], ids, scene::ConceptTag::Tallest});
      if (result.applicable && !result.tie) {
        const auto item_seed = derive_seed(options.seed, {scene.scene_id, "mc", "tallest"});
        Rng rng(item_seed);
        std::vector<McOption> mc_options;
        for (const auto* node : three_d) {
          mc_options.push_back({"the " + node->category, node->id == *result.object_id});
        }
        auto item = base_item(scene, TaskFamily::SpatialMC, "tallest", "spatial_mc_01", item_seed);
        if (finalize_mc(item, std::move(mc_options), "Which object is the tallest?", rng,
                        options.mc_options)) {
          item.validate();
          out.items.push_back(std::move(item));
        }
      }
    }
  }

  // 8-way bearing with adjacent-sector distractors
  {
    std::vector<const ObjectNode*> three_d;
    for (const auto* rep : reps) {
      if (rep->box3d) three_d.push_back(rep);
    }
    if (three_d.size() >= 2) {
      const auto* a = three_d[0];
      const auto* b = three_d[1];
      const auto result =
          geom::evaluate_relation(scene, {b->id, {a->id}, scene::ConceptTag::DirFront});
      if (result.applicable && result.object_id) {
        const auto& correct_name = *result.object_id;  // sector concept name
        const auto& catalog = scene::concept_catalog();
        std::vector<std::string> sector_names;
        for (const auto& info : catalog) {
          if (info.family == scene::ConceptFamily::Direction) sector_names.push_back(info.name);
        }
        const auto it = std::find(sector_names.begin(), sector_names.end(), correct_name);
        const auto index = static_cast<std::size_t>(it - sector_names.begin());
        std::vector<McOption> mc_options = {{bearing_phrase(correct_name), true}};
        // distractors one sector step away, then two
        for (const std::size_t delta : {1u, 7u, 2u}) {
          mc_options.push_back({bearing_phrase(sector_names[(index + delta) % 8]), false});
        }
        const auto item_seed = derive_seed(options.seed, {scene.scene_id, "mc", "bearing"});
        Rng rng(item_seed);
        auto item = base_item(scene, TaskFamily::SpatialMC, "bearing", "spatial_mc_01", item_seed);
        if (finalize_mc(item, std::move(mc_options),
                        "From the viewer's perspective, where is the " + a->category +
                            " relative to the " + b->category + "?",
                        rng, options.mc_options)) {
          item.validate();
          out.items.push_back(std::move(item));
        }
      }
    }
  }

  return out;
}

ForgeOutput forge_spatial(const SceneGraph& scene, const std::set<TaskFamily>& families,
                          const SpatialForgeOptions& options) {
  ForgeOutput out;
  const auto wants = [&](TaskFamily family) {
    return families.empty() || families.count(family) > 0;
  };
  if (wants(TaskFamily::Pointing)) out.merge(gen_pointing(scene, options));
  if (wants(TaskFamily::Grounding)) out.merge(gen_grounding(scene, options));
  if (wants(TaskFamily::Affordance)) out.merge(gen_affordance(scene, options));
  if (wants(TaskFamily::Referring)) out.merge(gen_referring(scene, options));
  if (wants(TaskFamily::Placement)) {
    try {
      const auto grid =
          geom::build_occupancy(scene, options.cell_size, {options.grid_margin});
      out.merge(gen_placement(scene, grid, options));
    } catch (const Error& e) {
      out.skips.push_back({scene.scene_id, TaskFamily::Placement, "*", e.what()});
    }
  }
  if (wants(TaskFamily::SpatialMC)) out.merge(gen_spatial_mc(scene, options));
  return out;
}

}  // namespace ekit::spatial
