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

#include "ekit/spatial/captions.hpp"

#include <algorithm>
#include <cmath>

namespace ekit::spatial {

using geom::OrdinalAxis;
using scene::ObjectNode;
using scene::SceneGraph;

namespace {

std::vector<const ObjectNode*> category_candidates(const SceneGraph& scene,
                                                   const std::string& category) {
  auto candidates = scene.nodes_of_category(category);
  std::sort(candidates.begin(), candidates.end(),
            [](const ObjectNode* a, const ObjectNode* b) { return a->id < b->id; });
  return candidates;
}

bool has_attribute(const ObjectNode& node, const std::string& attribute) {
  return std::find(node.attributes.begin(), node.attributes.end(), attribute) !=
         node.attributes.end();
}

/// Stable ordinal sort of an arbitrary candidate set, same key semantics as
/// geom::ordinal_rank.
void ordinal_sort(std::vector<const ObjectNode*>& candidates, OrdinalAxis axis) {
  std::sort(candidates.begin(), candidates.end(),
            [axis](const ObjectNode* a, const ObjectNode* b) {
              const double ka = geom::ordinal_sort_key(*a, axis);
              const double kb = geom::ordinal_sort_key(*b, axis);
              if (ka != kb) return ka < kb;
              return a->id < b->id;
            });
}

bool ordinal_tied(const std::vector<const ObjectNode*>& sorted_candidates, OrdinalAxis axis) {
  for (std::size_t i = 1; i < sorted_candidates.size(); ++i) {
    if (geom::ordinal_sort_key(*sorted_candidates[i - 1], axis) ==
        geom::ordinal_sort_key(*sorted_candidates[i], axis)) {
      return true;
    }
  }
  return false;
}

/// Distance between node centers: 3D when both carry boxes, image plane
/// otherwise. Matches the relation engine's argmin policy for homogeneous
/// scenes, which is what the forge generates.
double center_distance(const ObjectNode& a, const ObjectNode& b) {
  if (a.box3d && b.box3d) {
    const auto ca = a.box3d->center();
    const auto cb = b.box3d->center();
    const double dx = ca[0] - cb[0], dy = ca[1] - cb[1], dz = ca[2] - cb[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  }
  const double dx = a.box.center_x() - b.box.center_x();
  const double dy = a.box.center_y() - b.box.center_y();
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

std::vector<std::string> resolve(const SceneGraph& scene, const ResolverSpec& spec) {
  auto candidates = category_candidates(scene, spec.category);
  for (const auto& constraint : spec.constraints) {
    switch (constraint.kind) {
      case RelationConstraint::Kind::Attribute: {
        std::vector<const ObjectNode*> kept;
        for (const auto* node : candidates) {
          if (has_attribute(*node, constraint.attribute)) kept.push_back(node);
        }
        candidates = std::move(kept);
        break;
      }
      case RelationConstraint::Kind::Ordinal: {
        ordinal_sort(candidates, constraint.axis);
        if (constraint.k < 1 || static_cast<std::size_t>(constraint.k) > candidates.size()) {
          candidates.clear();
        } else {
          candidates = {candidates[static_cast<std::size_t>(constraint.k) - 1]};
        }
        break;
      }
      case RelationConstraint::Kind::NearestAnchor:
      case RelationConstraint::Kind::FarthestAnchor: {
        const auto* anchor = scene.find_node(constraint.anchor_id);
        if (!anchor || candidates.empty()) {
          candidates.clear();
          break;
        }
        const bool want_min = constraint.kind == RelationConstraint::Kind::NearestAnchor;
        const ObjectNode* best = nullptr;
        double best_key = 0.0;
        for (const auto* node : candidates) {
          const double key = center_distance(*node, *anchor);
          if (!best || (want_min ? key < best_key : key > best_key)) {
            best = node;
            best_key = key;
          }
        }
        candidates = {best};
        break;
      }
    }
  }
  std::vector<std::string> ids;
  ids.reserve(candidates.size());
  for (const auto* node : candidates) ids.push_back(node->id);
  return ids;
}

const std::string& ordinal_word(int k) {
  static const std::vector<std::string> words = {"zeroth", "first", "second", "third",
                                                 "fourth", "fifth", "sixth", "seventh",
                                                 "eighth", "ninth", "tenth"};
  if (k >= 1 && k <= 10) return words[static_cast<std::size_t>(k)];
  static thread_local std::string big;
  big = std::to_string(k) + "th";
  return big;
}

namespace {

std::optional<CaptionTier> try_ordinal_caption(const SceneGraph& scene, const ObjectNode& node,
                                               std::vector<const ObjectNode*> candidates) {
  static const OrdinalAxis axes[] = {OrdinalAxis::FromLeft, OrdinalAxis::FromRight,
                                     OrdinalAxis::FromTop, OrdinalAxis::FromFront};
  for (const auto axis : axes) {
    ordinal_sort(candidates, axis);
    if (ordinal_tied(candidates, axis)) continue;
    const auto it = std::find(candidates.begin(), candidates.end(), &node);
    const int k = static_cast<int>(it - candidates.begin()) + 1;
    CaptionTier tier;
    tier.level = CaptionLevel::Unique;
    tier.text = "the " + ordinal_word(k) + " " + node.category + " from the " +
                geom::ordinal_axis_name(axis);
    tier.resolver.category = node.category;
    RelationConstraint constraint;
    constraint.kind = RelationConstraint::Kind::Ordinal;
    constraint.axis = axis;
    constraint.k = k;
    tier.resolver.constraints.push_back(constraint);
    return tier;
  }
  return std::nullopt;
}

std::optional<CaptionTier> try_anchor_caption(const SceneGraph& scene, const ObjectNode& node,
                                              const std::vector<const ObjectNode*>& candidates) {
  // anchors must themselves be unambiguous: single instance of their category
  std::vector<const ObjectNode*> anchors;
  for (const auto& other : scene.nodes) {
    if (other.category == node.category) continue;
    if (scene.nodes_of_category(other.category).size() == 1) anchors.push_back(&other);
  }
  std::sort(anchors.begin(), anchors.end(),
            [](const ObjectNode* a, const ObjectNode* b) { return a->id < b->id; });
  for (const auto* anchor : anchors) {
    for (const bool nearest : {true, false}) {
      const ObjectNode* best = nullptr;
      double best_key = 0.0;
      bool tie = false;
      for (const auto* candidate : candidates) {
        const double key = center_distance(*candidate, *anchor);
        if (!best || (nearest ? key < best_key : key > best_key)) {
          best = candidate;
          best_key = key;
          tie = false;
        } else if (key == best_key) {
          tie = true;
        }
      }
      if (tie || best != &node) continue;
      CaptionTier tier;
      tier.level = CaptionLevel::Unique;
      tier.text = nearest ? "the " + node.category + " nearest the " + anchor->category
                          : "the " + node.category + " farthest from the " + anchor->category;
      tier.resolver.category = node.category;
      RelationConstraint constraint;
      constraint.kind = nearest ? RelationConstraint::Kind::NearestAnchor
                                : RelationConstraint::Kind::FarthestAnchor;
      constraint.anchor_id = anchor->id;
      tier.resolver.constraints.push_back(constraint);
      return tier;
    }
  }
  return std::nullopt;
}

std::optional<CaptionTier> try_attribute_caption(const SceneGraph& scene, const ObjectNode& node,
                                                 const std::vector<const ObjectNode*>& candidates) {
  for (const auto& attribute : node.attributes) {
    std::vector<const ObjectNode*> subset;
    for (const auto* candidate : candidates) {
      if (has_attribute(*candidate, attribute)) subset.push_back(candidate);
    }
    if (subset.size() == 1 && subset[0] == &node) {
      CaptionTier tier;
      tier.level = CaptionLevel::Unique;
      tier.text = "the " + attribute + " " + node.category;
      tier.resolver.category = node.category;
      RelationConstraint constraint;
      constraint.kind = RelationConstraint::Kind::Attribute;
      constraint.attribute = attribute;
      tier.resolver.constraints.push_back(constraint);
      return tier;
    }
    if (subset.size() > 1 &&
        std::find(subset.begin(), subset.end(), &node) != subset.end()) {
      // attribute plus ordinal within the attributed subset
      auto tier = try_ordinal_caption(scene, node, subset);
      if (tier) {
        tier->text = "the " + ordinal_word(tier->resolver.constraints[0].k) + " " + attribute +
                     " " + node.category + " from the " +
                     geom::ordinal_axis_name(tier->resolver.constraints[0].axis);
        RelationConstraint attr_constraint;
        attr_constraint.kind = RelationConstraint::Kind::Attribute;
        attr_constraint.attribute = attribute;
        tier->resolver.constraints.insert(tier->resolver.constraints.begin(), attr_constraint);
        return tier;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<CaptionTier> caption_hierarchy(const SceneGraph& scene, const std::string& node_id) {
  const auto& node = scene.node_or_fail(node_id);
  std::vector<CaptionTier> tiers;

  CaptionTier coarse;
  coarse.level = CaptionLevel::Coarse;
  coarse.text = node.captions.coarse.value_or(node.category);
  coarse.resolver.category = node.category;
  tiers.push_back(coarse);

  if (!node.attributes.empty()) {
    CaptionTier attributed;
    attributed.level = CaptionLevel::Attributed;
    attributed.text = node.captions.attributed.value_or(node.attributes[0] + " " + node.category);
    attributed.resolver.category = node.category;
    RelationConstraint constraint;
    constraint.kind = RelationConstraint::Kind::Attribute;
    constraint.attribute = node.attributes[0];
    attributed.resolver.constraints.push_back(constraint);
    tiers.push_back(attributed);
  }

  const auto candidates = category_candidates(scene, node.category);
  if (candidates.size() == 1) {
    CaptionTier unique = coarse;
    unique.level = CaptionLevel::Unique;
    tiers.push_back(unique);
    return tiers;
  }

  if (auto tier = try_ordinal_caption(scene, node, candidates)) {
    tiers.push_back(*tier);
    return tiers;
  }
  if (auto tier = try_anchor_caption(scene, node, candidates)) {
    tiers.push_back(*tier);
    return tiers;
  }
  if (auto tier = try_attribute_caption(scene, node, candidates)) {
    tiers.push_back(*tier);
    return tiers;
  }
  fail("uniqueness unattainable: " + node_id + " in scene " + scene.scene_id);
}

CaptionTier unique_caption(const SceneGraph& scene, const std::string& node_id) {
  const auto tiers = caption_hierarchy(scene, node_id);
  for (const auto& tier : tiers) {
    if (tier.level == CaptionLevel::Unique) return tier;
  }
  fail("no unique caption for " + node_id);
}

}  // namespace ekit::spatial
