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

#ifndef EKIT_GEOM_RELATIONS_HPP
#define EKIT_GEOM_RELATIONS_HPP

#include <optional>
#include <string>
#include <vector>

#include "ekit/scene/types.hpp"

namespace ekit::geom {

struct RelationQuery {
  std::string subject;
  std::vector<std::string> objects;  // one object for binary concepts; a set for argmin/argmax
  scene::ConceptTag tag = scene::ConceptTag::LeftOf;
  int k = 1;  // ordinal rank, 1-based
};

/// Outcome of a relation evaluation. `applicable` is false when the scene
/// lacks the geometry the concept needs; `error` then says what was missing.
/// Ties are broken lexicographically by id and flagged.
struct RelationResult {
  bool applicable = false;
  std::string error;
  std::optional<bool> boolean;
  std::optional<double> scalar;
  std::optional<std::string> unit;
  std::optional<std::string> object_id;
  bool tie = false;
  std::string frame = "camera";  // +x right, +y down, +z forward
};

struct RelationOptions {
  double contact_tolerance = 0.05;  // meters, for on_top_of
};

RelationResult evaluate_relation(const scene::SceneGraph& scene, const RelationQuery& query,
                                 const RelationOptions& options = {});

enum class OrdinalAxis { FromLeft, FromRight, FromTop, FromFront };

OrdinalAxis ordinal_axis_from_tag(scene::ConceptTag tag);
const std::string& ordinal_axis_name(OrdinalAxis axis);

/// k-th (1-based) instance of `category` sorted by Box2D center along the
/// axis: ascending x for FromLeft, descending x for FromRight, ascending y
/// for FromTop, descending y for FromFront (image bottom is nearest the
/// viewer). Ties break on id, so the result is permutation-invariant.
/// Throws when fewer than k instances exist.
std::string ordinal_rank(const scene::SceneGraph& scene, const std::string& category,
                         OrdinalAxis axis, int k);

/// True when two instances of the category share the exact sort key on this
/// axis; ordinal phrasing cannot distinguish them verbally in that case.
bool ordinal_has_ties(const scene::SceneGraph& scene, const std::string& category,
                      OrdinalAxis axis);

/// Sort key used by ordinal_rank (ascending). Exposed so resolvers can rank
/// arbitrary candidate sets with identical semantics.
double ordinal_sort_key(const scene::ObjectNode& node, OrdinalAxis axis);

}  // namespace ekit::geom

#endif  // EKIT_GEOM_RELATIONS_HPP
