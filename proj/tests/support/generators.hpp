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

#ifndef EKIT_TESTS_SUPPORT_GENERATORS_HPP
#define EKIT_TESTS_SUPPORT_GENERATORS_HPP

#include <string>
#include <vector>

#include "ekit/common.hpp"
#include "ekit/scene/payload.hpp"
#include "ekit/scene/types.hpp"

namespace ekit::testsupport {

inline scene::PixelPoint random_pixel(Rng& rng, int width, int height) {
  return {static_cast<double>(rng.uniform_int(0, width - 1)),
          static_cast<double>(rng.uniform_int(0, height - 1))};
}

inline scene::Box2D random_box(Rng& rng, int width, int height) {
  const auto x1 = rng.uniform_int(0, width - 2);
  const auto y1 = rng.uniform_int(0, height - 2);
  const auto x2 = rng.uniform_int(x1 + 1, width);
  const auto y2 = rng.uniform_int(y1 + 1, height);
  return {static_cast<double>(x1), static_cast<double>(y1), static_cast<double>(x2),
          static_cast<double>(y2)};
}

inline scene::Payload random_payload(Rng& rng, scene::PayloadKind kind, int width = 640,
                                     int height = 480) {
  using namespace scene;
  switch (kind) {
    case PayloadKind::Points: {
      PointsPayload p;
      const auto n = rng.uniform_int(1, 10);
      for (int i = 0; i < n; ++i) p.points.push_back(random_pixel(rng, width, height));
      return p;
    }
    case PayloadKind::Trajectory: {
      TrajectoryPayload p;
      const auto n = rng.uniform_int(2, 10);
      for (int i = 0; i < n; ++i) p.points.push_back(random_pixel(rng, width, height));
      return p;
    }
    case PayloadKind::Box:
      return BoxPayload{random_box(rng, width, height)};
    case PayloadKind::Option:
      return OptionPayload{static_cast<char>('A' + rng.uniform_int(0, 3))};
    case PayloadKind::FreeText: {
      static const std::vector<std::string> verbs = {"Pour oil", "Open the cabinet",
                                                     "Pick up the mug", "Toggle on Coffee Machine"};
      return FreeTextPayload{verbs[static_cast<std::size_t>(rng.uniform_int(0, 3))]};
    }
    case PayloadKind::Workflow: {
      nlohmann::ordered_json graph;
      graph["task"] = "task_" + std::to_string(rng.uniform_int(0, 99));
      graph["nodes"] = nlohmann::ordered_json::array();
      const auto n = rng.uniform_int(1, 4);
      for (int i = 0; i < n; ++i) {
        graph["nodes"].push_back({{"id", "t" + std::to_string(i)},
                                  {"robot", "robot_" + std::to_string(rng.uniform_int(0, 2))},
                                  {"description", "step " + std::to_string(i)},
                                  {"rationale", "because"}});
      }
      graph["edges"] = nlohmann::ordered_json::array();
      for (int i = 0; i + 1 < n; ++i) {
        if (rng.bernoulli(0.6)) {
          graph["edges"].push_back({"t" + std::to_string(i), "t" + std::to_string(i + 1)});
        }
      }
      return WorkflowPayload{graph};
    }
  }
  fail("random_payload: unreachable");
}

inline scene::PayloadKind random_payload_kind(Rng& rng) {
  static const std::vector<scene::PayloadKind> kinds = {
      scene::PayloadKind::Points,  scene::PayloadKind::Box,     scene::PayloadKind::Trajectory,
      scene::PayloadKind::Option,  scene::PayloadKind::FreeText, scene::PayloadKind::Workflow,
  };
  return kinds[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(kinds.size()) - 1))];
}

inline scene::TaskFamily family_for_kind(scene::PayloadKind kind) {
  using namespace scene;
  switch (kind) {
    case PayloadKind::Points: return TaskFamily::Pointing;
    case PayloadKind::Box: return TaskFamily::Grounding;
    case PayloadKind::Trajectory: return TaskFamily::Pointing;
    case PayloadKind::Option: return TaskFamily::SpatialMC;
    case PayloadKind::FreeText: return TaskFamily::CloseLoop;
    case PayloadKind::Workflow: return TaskFamily::MultiRobot;
  }
  return TaskFamily::Pointing;
}

inline scene::QAItem random_item(Rng& rng, int index) {
  using namespace scene;
  QAItem item;
  const auto kind = random_payload_kind(rng);
  item.id = "item_" + std::to_string(index);
  item.family = family_for_kind(kind);
  item.prompt = "prompt " + std::to_string(rng.uniform_int(0, 1000));
  item.images = {"frames/frame_" + std::to_string(index) + ".png"};
  item.image_size = {{640, 480}};
  item.target_kind = kind;
  item.ground_truth = random_payload(rng, kind);
  if (kind == PayloadKind::Option) {
    item.options = {"alpha", "beta", "gamma", "delta"};
  }
  item.provenance = {"scene_" + std::to_string(index % 7), "tmpl_" + std::to_string(index % 5),
                     rng.next_u64()};
  return item;
}

/// Random but valid spatial scene: several categories (some duplicated),
/// optional attributes, optional 3D boxes + intrinsics (all-or-none so metric
/// relations stay applicable), occasional parts and function tags.
inline scene::SceneGraph random_spatial_scene(Rng& rng, int index, bool force_3d = false) {
  using namespace scene;
  static const std::vector<std::string> categories = {"cup",  "plate",  "book",   "laptop", "sink",
                                                      "sofa", "chair",  "mug",    "bottle", "lamp"};
  static const std::vector<std::string> attributes = {"red", "blue", "green", "small", "large"};
  static const std::vector<std::string> functions = {"grasped to carry it",
                                                     "pressed to turn it on",
                                                     "opened to access its contents"};
  SceneGraph g;
  g.scene_id = "synth_" + std::to_string(index);
  const bool with_3d = force_3d || rng.bernoulli(0.5);
  FrameRef frame{"frame_0", g.scene_id + ".png", 640, 480, std::nullopt, std::nullopt, std::nullopt};
  if (with_3d) {
    CameraIntrinsics k;
    k.fx = rng.uniform_double(400, 800);
    k.fy = rng.uniform_double(400, 800);
    k.cx = 320;
    k.cy = 240;
    k.width = 640;
    k.height = 480;
    frame.intrinsics = k;
  }
  g.frames.push_back(frame);

  const auto n = rng.uniform_int(3, 8);
  for (int i = 0; i < n; ++i) {
    ObjectNode node;
    node.id = "node_" + std::to_string(i);
    // duplicate categories with some probability so ordinal captions fire
    node.category = categories[static_cast<std::size_t>(
        rng.uniform_int(0, rng.bernoulli(0.4) ? 2 : static_cast<std::int64_t>(categories.size()) - 1))];
    node.box = random_box(rng, 620, 460);
    if (rng.bernoulli(0.3)) {
      node.attributes.push_back(attributes[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(attributes.size()) - 1))]);
    }
    if (with_3d) {
      const double cx = rng.uniform_double(-1.5, 1.5);
      const double cy = rng.uniform_double(-0.5, 1.0);
      const double cz = rng.uniform_double(1.0, 5.0);
      const double hx = rng.uniform_double(0.05, 0.4);
      const double hy = rng.uniform_double(0.05, 0.4);
      const double hz = rng.uniform_double(0.05, 0.4);
      node.box3d = Box3D{cx - hx, cy - hy, cz - hz, cx + hx, cy + hy, cz + hz};
    }
    if (rng.bernoulli(0.2)) {
      PartAnnotation part;
      part.name = "handle";
      part.function = "grasped to carry it";
      const double px = node.box.x1 + 1;
      const double py = node.box.y1 + 1;
      part.box = {px, py, std::min(px + 10, node.box.x2), std::min(py + 8, node.box.y2)};
      if (part.box.x1 < part.box.x2 && part.box.y1 < part.box.y2) node.parts.push_back(part);
    }
    if (rng.bernoulli(0.2)) {
      node.functions.push_back(functions[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(functions.size()) - 1))]);
    }
    g.nodes.push_back(std::move(node));
  }
  g.validate();
  return g;
}

/// A synthetic scene with `cup_xs.size()` cups on a table plus one sink,
/// used by caption and relation tests. Cups are 20x20 boxes at y=100.
inline scene::SceneGraph cups_scene(const std::vector<double>& cup_xs) {
  using namespace scene;
  SceneGraph g;
  g.scene_id = "cups";
  g.frames.push_back({"frame_0", "frame_0.png", 640, 480, std::nullopt, std::nullopt, std::nullopt});
  for (std::size_t i = 0; i < cup_xs.size(); ++i) {
    ObjectNode cup;
    cup.id = "cup_" + std::to_string(i);
    cup.category = "cup";
    cup.box = {cup_xs[i] - 10, 90, cup_xs[i] + 10, 110};
    g.nodes.push_back(std::move(cup));
  }
  ObjectNode sink;
  sink.id = "sink_0";
  sink.category = "sink";
  sink.box = {300, 200, 400, 300};
  g.nodes.push_back(std::move(sink));
  g.validate();
  return g;
}

}  // namespace ekit::testsupport

#endif  // EKIT_TESTS_SUPPORT_GENERATORS_HPP
