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

#include "ekit/geom/relations.hpp"

#include <algorithm>
#include <cmath>

namespace ekit::geom {

using scene::ConceptFamily;
using scene::ConceptTag;
using scene::ObjectNode;
using scene::SceneGraph;

namespace {

constexpr double kPi = 3.14159265358979323846;

RelationResult inapplicable(const std::string& why) {
  RelationResult result;
  result.applicable = false;
  result.error = why;
  return result;
}

RelationResult boolean_result(bool value) {
  RelationResult result;
  result.applicable = true;
  result.boolean = value;
  return result;
}

double distance3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double distance2(const ObjectNode& a, const ObjectNode& b) {
  const double dx = a.box.center_x() - b.box.center_x();
  const double dy = a.box.center_y() - b.box.center_y();
  return std::sqrt(dx * dx + dy * dy);
}

/// Center coordinate along axis 0=x, 1=y: 3D when both nodes carry a Box3D,
/// image plane otherwise.
std::optional<std::pair<double, double>> axis_pair(const ObjectNode& a, const ObjectNode& b,
                                                   int axis) {
  if (a.box3d && b.box3d) {
    return std::make_pair(a.box3d->center()[static_cast<std::size_t>(axis)],
                          b.box3d->center()[static_cast<std::size_t>(axis)]);
  }
  if (axis == 0) return std::make_pair(a.box.center_x(), b.box.center_x());
  if (axis == 1) return std::make_pair(a.box.center_y(), b.box.center_y());
  return std::nullopt;  // z needs 3D geometry
}

bool intervals_overlap(double a_lo, double a_hi, double b_lo, double b_hi) {
  return a_lo < b_hi && b_lo < a_hi;
}

/// argmin/argmax by distance from subject over the candidate set; candidates
/// sorted by id first, so equal keys resolve to the lexicographically
/// smallest id and the tie is flagged.
RelationResult extremum_by(const SceneGraph& scene, const ObjectNode& subject,
                           std::vector<const ObjectNode*> candidates, bool want_min) {
  if (candidates.empty()) return inapplicable("no candidate objects");
  const bool all_3d = subject.box3d && std::all_of(candidates.begin(), candidates.end(),
                                                   [](const ObjectNode* n) { return bool(n->box3d); });
  std::sort(candidates.begin(), candidates.end(),
            [](const ObjectNode* a, const ObjectNode* b) { return a->id < b->id; });
  const ObjectNode* best = nullptr;
  double best_key = 0.0;
  bool tie = false;
  for (const auto* candidate : candidates) {
    const double key = all_3d ? distance3(subject.box3d->center(), candidate->box3d->center())
                              : distance2(subject, *candidate);
    if (!best || (want_min ? key < best_key : key > best_key)) {
      best = candidate;
      best_key = key;
      tie = false;
    } else if (key == best_key) {
      tie = true;
    }
  }
  RelationResult result;
  result.applicable = true;
  result.object_id = best->id;
  result.scalar = best_key;
  result.unit = all_3d ? "m" : "px";
  result.tie = tie;
  return result;
}

double size_key(const ObjectNode& node, ConceptTag tag) {
  const auto& box = *node.box3d;
  switch (tag) {
    case ConceptTag::Tallest:
    case ConceptTag::Shortest:
      return box.extent_y();
    case ConceptTag::Largest:
    case ConceptTag::Smallest:
      return box.volume();
    default:
      return box.volume();
  }
}

}  // namespace

OrdinalAxis ordinal_axis_from_tag(ConceptTag tag) {
  switch (tag) {
    case ConceptTag::OrdinalFromLeft: return OrdinalAxis::FromLeft;
    case ConceptTag::OrdinalFromRight: return OrdinalAxis::FromRight;
    case ConceptTag::OrdinalFromTop: return OrdinalAxis::FromTop;
    case ConceptTag::OrdinalFromFront: return OrdinalAxis::FromFront;
    default: fail("not an ordinal concept");
  }
}

const std::string& ordinal_axis_name(OrdinalAxis axis) {
  static const std::string names[] = {"left", "right", "top", "front"};
  return names[static_cast<int>(axis)];
}

double ordinal_sort_key(const ObjectNode& node, OrdinalAxis axis) {
  switch (axis) {
    case OrdinalAxis::FromLeft: return node.box.center_x();
    case OrdinalAxis::FromRight: return -node.box.center_x();
    case OrdinalAxis::FromTop: return node.box.center_y();
    case OrdinalAxis::FromFront: return -node.box.center_y();  // image bottom is nearest
  }
  return 0.0;
}

namespace {

std::vector<const ObjectNode*> sorted_instances(const SceneGraph& scene,
                                                const std::string& category, OrdinalAxis axis) {
  auto instances = scene.nodes_of_category(category);
  std::sort(instances.begin(), instances.end(), [axis](const ObjectNode* a, const ObjectNode* b) {
    const double ka = ordinal_sort_key(*a, axis);
    const double kb = ordinal_sort_key(*b, axis);
    if (ka != kb) return ka < kb;
    return a->id < b->id;
  });
  return instances;
}

}  // namespace

std::string ordinal_rank(const SceneGraph& scene, const std::string& category, OrdinalAxis axis,
                         int k) {
  if (k < 1) fail("ordinal_rank: k must be >= 1");
  const auto instances = sorted_instances(scene, category, axis);
  if (static_cast<std::size_t>(k) > instances.size()) {
    fail("ordinal_rank: fewer than " + std::to_string(k) + " instances of " + category);
  }
  return instances[static_cast<std::size_t>(k) - 1]->id;
}

bool ordinal_has_ties(const SceneGraph& scene, const std::string& category, OrdinalAxis axis) {
  const auto instances = sorted_instances(scene, category, axis);
  for (std::size_t i = 1; i < instances.size(); ++i) {
    if (ordinal_sort_key(*instances[i - 1], axis) == ordinal_sort_key(*instances[i], axis)) {
      return true;
    }
  }
  return false;
}

RelationResult evaluate_relation(const SceneGraph& scene, const RelationQuery& query,
                                 const RelationOptions& options) {
  const auto* subject = scene.find_node(query.subject);
  if (!subject) fail("evaluate_relation: unknown subject " + query.subject);
  std::vector<const ObjectNode*> objects;
  for (const auto& id : query.objects) objects.push_back(&scene.node_or_fail(id));

  const auto need_one_object = [&]() -> const ObjectNode* {
    if (objects.size() != 1) fail("evaluate_relation: concept needs exactly one object");
    return objects[0];
  };

  const auto family = scene::concept_info(query.tag).family;
  switch (family) {
    case ConceptFamily::Position: {
      if (query.tag == ConceptTag::Between) {
        if (objects.size() != 2) fail("evaluate_relation: between needs two anchor objects");
        if (!subject->box3d || !objects[0]->box3d || !objects[1]->box3d) {
          return inapplicable("between needs 3D boxes");
        }
        const auto s = subject->box3d->center();
        const auto a = objects[0]->box3d->center();
        const auto b = objects[1]->box3d->center();
        const double ab[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
        const double as[3] = {s[0] - a[0], s[1] - a[1], s[2] - a[2]};
        const double len2 = ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2];
        if (len2 == 0.0) return inapplicable("between anchors coincide");
        const double t = (as[0] * ab[0] + as[1] * ab[1] + as[2] * ab[2]) / len2;
        const double proj[3] = {a[0] + t * ab[0], a[1] + t * ab[1], a[2] + t * ab[2]};
        const double perp = distance3(s, {proj[0], proj[1], proj[2]});
        const double slack = std::max({subject->box3d->extent_x(), subject->box3d->extent_y(),
                                       subject->box3d->extent_z()});
        return boolean_result(t > 0.0 && t < 1.0 && perp <= slack);
      }
      const auto* object = need_one_object();
      switch (query.tag) {
        case ConceptTag::LeftOf:
        case ConceptTag::RightOf: {
          const auto pair = axis_pair(*subject, *object, 0);
          const bool left = pair->first < pair->second;
          return boolean_result(query.tag == ConceptTag::LeftOf ? left
                                                                : pair->second < pair->first);
        }
        case ConceptTag::Above:
        case ConceptTag::Below: {
          // y grows downward, so "above" means a smaller y
          const auto pair = axis_pair(*subject, *object, 1);
          const bool above = pair->first < pair->second;
          return boolean_result(query.tag == ConceptTag::Above ? above
                                                               : pair->second < pair->first);
        }
        case ConceptTag::InFrontOf:
        case ConceptTag::Behind: {
          if (!subject->box3d || !object->box3d) {
            return inapplicable("front/behind needs 3D boxes");
          }
          const double sz = subject->box3d->center()[2];
          const double oz = object->box3d->center()[2];
          const bool front = sz < oz;  // smaller z is closer to the viewer
          return boolean_result(query.tag == ConceptTag::InFrontOf ? front : oz < sz);
        }
        case ConceptTag::OnTopOf: {
          if (!subject->box3d || !object->box3d) return inapplicable("on_top_of needs 3D boxes");
          const auto& s = *subject->box3d;
          const auto& o = *object->box3d;
          const bool contact = std::abs(s.max_y - o.min_y) <= options.contact_tolerance;
          const bool overlap = intervals_overlap(s.min_x, s.max_x, o.min_x, o.max_x) &&
                               intervals_overlap(s.min_z, s.max_z, o.min_z, o.max_z);
          return boolean_result(contact && overlap);
        }
        case ConceptTag::Inside: {
          if (subject->box3d && object->box3d) {
            const auto& s = *subject->box3d;
            const auto& o = *object->box3d;
            return boolean_result(s.min_x >= o.min_x && s.max_x <= o.max_x && s.min_y >= o.min_y &&
                                  s.max_y <= o.max_y && s.min_z >= o.min_z && s.max_z <= o.max_z);
          }
          const auto& s = subject->box;
          const auto& o = object->box;
          return boolean_result(s.x1 >= o.x1 && s.x2 <= o.x2 && s.y1 >= o.y1 && s.y2 <= o.y2);
        }
        default:
          break;
      }
      return inapplicable("unhandled position concept");
    }
    case ConceptFamily::Direction: {
      const auto* object = need_one_object();
      if (!subject->box3d || !object->box3d) return inapplicable("bearing needs 3D boxes");
      const auto s = subject->box3d->center();
      const auto o = object->box3d->center();
      const double dx = o[0] - s[0];
      const double dz = o[2] - s[2];
      if (dx == 0.0 && dz == 0.0) return inapplicable("coincident centers");
      // 0 deg = front (toward the viewer, -z), angles increase clockwise
      double angle = std::atan2(dx, -dz) * 180.0 / kPi;
      if (angle < 0.0) angle += 360.0;
      static const ConceptTag sectors[8] = {
          ConceptTag::DirFront,    ConceptTag::DirFrontRight, ConceptTag::DirRight,
          ConceptTag::DirBackRight, ConceptTag::DirBack,       ConceptTag::DirBackLeft,
          ConceptTag::DirLeft,     ConceptTag::DirFrontLeft,
      };
      const int sector = static_cast<int>(std::floor((angle + 22.5) / 45.0)) % 8;
      RelationResult result = boolean_result(sectors[sector] == query.tag);
      result.scalar = angle;
      result.unit = "deg";
      result.object_id = scene::concept_name(sectors[sector]);
      return result;
    }
    case ConceptFamily::Distance: {
      if (query.tag == ConceptTag::DistanceBetween) {
        const auto* object = need_one_object();
        if (!subject->box3d || !object->box3d) return inapplicable("metric distance needs 3D boxes");
        RelationResult result;
        result.applicable = true;
        result.scalar = distance3(subject->box3d->center(), object->box3d->center());
        result.unit = "m";
        return result;
      }
      std::vector<const ObjectNode*> candidates = objects;
      if (candidates.empty()) {
        for (const auto& node : scene.nodes) {
          if (node.id != subject->id) candidates.push_back(&node);
        }
      }
      return extremum_by(scene, *subject, std::move(candidates),
                         query.tag == ConceptTag::Nearest);
    }
    case ConceptFamily::Size: {
      switch (query.tag) {
        case ConceptTag::WiderThan:
        case ConceptTag::TallerThan:
        case ConceptTag::DeeperThan:
        case ConceptTag::LargerThan: {
          const auto* object = need_one_object();
          if (!subject->box3d || !object->box3d) return inapplicable("size comparison needs 3D boxes");
          double lhs = 0.0, rhs = 0.0;
          switch (query.tag) {
            case ConceptTag::WiderThan: lhs = subject->box3d->extent_x(); rhs = object->box3d->extent_x(); break;
            case ConceptTag::TallerThan: lhs = subject->box3d->extent_y(); rhs = object->box3d->extent_y(); break;
            case ConceptTag::DeeperThan: lhs = subject->box3d->extent_z(); rhs = object->box3d->extent_z(); break;
            default: lhs = subject->box3d->volume(); rhs = object->box3d->volume(); break;
          }
          RelationResult result = boolean_result(lhs > rhs);
          result.scalar = lhs - rhs;
          result.unit = query.tag == ConceptTag::LargerThan ? "m^3" : "m";
          return result;
        }
        default: {
          // superlatives over the object set, or the subject's whole category
          std::vector<const ObjectNode*> candidates = objects;
          if (candidates.empty()) {
            for (const auto* node : scene.nodes_of_category(subject->category)) {
              candidates.push_back(node);
            }
          }
          if (candidates.empty()) return inapplicable("no candidate objects");
          if (!std::all_of(candidates.begin(), candidates.end(),
                           [](const ObjectNode* n) { return bool(n->box3d); })) {
            return inapplicable("size superlative needs 3D boxes");
          }
          std::sort(candidates.begin(), candidates.end(),
                    [](const ObjectNode* a, const ObjectNode* b) { return a->id < b->id; });
          const bool want_max =
              query.tag == ConceptTag::Tallest || query.tag == ConceptTag::Largest;
          const ObjectNode* best = nullptr;
          double best_key = 0.0;
          bool tie = false;
          for (const auto* candidate : candidates) {
            const double key = size_key(*candidate, query.tag);
            if (!best || (want_max ? key > best_key : key < best_key)) {
              best = candidate;
              best_key = key;
              tie = false;
            } else if (key == best_key) {
              tie = true;
            }
          }
          RelationResult result;
          result.applicable = true;
          result.object_id = best->id;
          result.scalar = best_key;
          result.tie = tie;
          return result;
        }
      }
    }
    case ConceptFamily::Ordinal: {
      const auto axis = ordinal_axis_from_tag(query.tag);
      const auto instances = scene.nodes_of_category(subject->category);
      if (static_cast<std::size_t>(query.k) > instances.size()) {
        return inapplicable("fewer than k instances");
      }
      RelationResult result;
      result.applicable = true;
      result.object_id = ordinal_rank(scene, subject->category, axis, query.k);
      result.boolean = (*result.object_id == subject->id);
      result.tie = ordinal_has_ties(scene, subject->category, axis);
      return result;
    }
    case ConceptFamily::Orientation:
      return inapplicable("axis-aligned boxes carry no heading");
    case ConceptFamily::Vacancy:
      return inapplicable("vacancy is evaluated on occupancy grids");
  }
  return inapplicable("unknown concept family");
}

}  // namespace ekit::geom
