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

#ifndef EKIT_SPATIAL_CAPTIONS_HPP
#define EKIT_SPATIAL_CAPTIONS_HPP

#include <string>
#include <vector>

#include "ekit/geom/relations.hpp"
#include "ekit/scene/types.hpp"

namespace ekit::spatial {

enum class CaptionLevel { Coarse, Attributed, Unique };

/// One constraint in a resolver chain. Constraints are applied in order to a
/// shrinking candidate set.
struct RelationConstraint {
  enum class Kind { Attribute, Ordinal, NearestAnchor, FarthestAnchor };
  Kind kind = Kind::Attribute;
  std::string attribute;                                    // Attribute
  geom::OrdinalAxis axis = geom::OrdinalAxis::FromLeft;     // Ordinal
  int k = 1;                                                // Ordinal, 1-based
  std::string anchor_id;                                    // Nearest/Farthest
};

/// Category filter plus ordered relation constraints. Evaluating a spec
/// against a scene is independent of how the caption was constructed.
struct ResolverSpec {
  std::string category;
  std::vector<RelationConstraint> constraints;
};

struct CaptionTier {
  CaptionLevel level = CaptionLevel::Coarse;
  std::string text;
  ResolverSpec resolver;
};

/// Applies the spec to the scene and returns all matching node ids.
/// A unique caption is valid iff this returns exactly one id.
std::vector<std::string> resolve(const scene::SceneGraph& scene, const ResolverSpec& spec);

/// Builds coarse / attributed / unique caption tiers for a node. The unique
/// tier is constructed greedily: category alone, then ordinal phrasings, then
/// nearest/farthest relative to a unique-category anchor, then a
/// discriminative attribute, then attribute + ordinal. Throws
/// "uniqueness unattainable" when nothing separates identical twins.
std::vector<CaptionTier> caption_hierarchy(const scene::SceneGraph& scene,
                                           const std::string& node_id);

/// The unique tier only; convenience for the forges.
CaptionTier unique_caption(const scene::SceneGraph& scene, const std::string& node_id);

const std::string& ordinal_word(int k);  // "first", "second", ... "10th", ...

}  // namespace ekit::spatial

#endif  // EKIT_SPATIAL_CAPTIONS_HPP
