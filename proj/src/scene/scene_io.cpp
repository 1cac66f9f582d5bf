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

#include "ekit/scene/scene_io.hpp"

#include <cmath>
#include <cstring>

namespace ekit::scene {

namespace {

Box2D box2d_from_json(const nlohmann::ordered_json& arr, const std::string& context) {
  if (!arr.is_array() || arr.size() != 4) fail(context + ": box2d must be [x1, y1, x2, y2]");
  Box2D box{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>(), arr[3].get<double>()};
  box.validate(context);
  return box;
}

Box3D box3d_from_json(const nlohmann::ordered_json& arr, const std::string& context) {
  if (!arr.is_array() || arr.size() != 6) {
    fail(context + ": box3d must be [min_x, min_y, min_z, max_x, max_y, max_z]");
  }
  Box3D box{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>(),
            arr[3].get<double>(), arr[4].get<double>(), arr[5].get<double>()};
  box.validate(context);
  return box;
}

Mask2D mask_from_json(const nlohmann::ordered_json& j, const std::string& context) {
  Mask2D mask;
  mask.width = j.at("width").get<int>();
  mask.height = j.at("height").get<int>();
  mask.runs = j.at("runs").get<std::vector<std::uint32_t>>();
  mask.validate(context);
  return mask;
}

CameraIntrinsics intrinsics_from_json(const nlohmann::ordered_json& j, int width, int height,
                                      const std::string& context) {
  CameraIntrinsics k;
  k.fx = j.at("fx").get<double>();
  k.fy = j.at("fy").get<double>();
  k.cx = j.at("cx").get<double>();
  k.cy = j.at("cy").get<double>();
  k.width = width;
  k.height = height;
  try {
    k.validate();
  } catch (const Error& e) {
    fail(context + ": " + e.what());
  }
  return k;
}

}  // namespace

SceneGraph scene_from_json(const nlohmann::ordered_json& j, const std::string& context) {
  if (!j.is_object()) fail(context + ": scene file must be a JSON object");
  if (!j.contains("schema_version")) fail(context + ": missing schema_version");
  const int version = j["schema_version"].get<int>();
  if (version != kSceneSchemaVersion) {
    fail(context + ": unsupported schema_version " + std::to_string(version));
  }

  SceneGraph scene;
  scene.scene_id = j.at("scene_id").get<std::string>();

  for (const auto& fj : j.at("frames")) {
    FrameRef frame;
    frame.id = fj.at("id").get<std::string>();
    frame.image = fj.at("image").get<std::string>();
    frame.width = fj.at("width").get<int>();
    frame.height = fj.at("height").get<int>();
    if (fj.contains("intrinsics")) {
      frame.intrinsics = intrinsics_from_json(fj["intrinsics"], frame.width, frame.height,
                                              context + ", frame " + frame.id);
    }
    if (fj.contains("depth")) {
      frame.depth_path = fj["depth"].at("path").get<std::string>();
      frame.depth_sidecar = fj["depth"].at("sidecar").get<std::string>();
    }
    scene.frames.push_back(std::move(frame));
  }

  if (j.contains("gravity_rotation")) {
    const auto& rj = j["gravity_rotation"];
    if (!rj.is_array() || rj.size() != 3) fail(context + ": gravity_rotation must be 3x3");
    Rotation3 rot{};
    for (int r = 0; r < 3; ++r) {
      if (!rj[r].is_array() || rj[r].size() != 3) fail(context + ": gravity_rotation must be 3x3");
      for (int c = 0; c < 3; ++c) rot[r][c] = rj[r][c].get<double>();
    }
    scene.gravity_rotation = rot;
  }

  for (const auto& nj : j.at("nodes")) {
    ObjectNode node;
    node.id = nj.at("id").get<std::string>();
    const std::string node_context = context + ", node " + node.id;
    node.category = nj.at("category").get<std::string>();
    node.box = box2d_from_json(nj.at("box2d"), node_context);
    if (nj.contains("mask")) node.mask = mask_from_json(nj["mask"], node_context);
    if (nj.contains("point_cloud")) node.point_cloud = nj["point_cloud"].get<std::string>();
    if (nj.contains("box3d")) node.box3d = box3d_from_json(nj["box3d"], node_context);
    if (nj.contains("captions")) {
      const auto& cj = nj["captions"];
      if (cj.contains("coarse")) node.captions.coarse = cj["coarse"].get<std::string>();
      if (cj.contains("attributed")) node.captions.attributed = cj["attributed"].get<std::string>();
      if (cj.contains("unique")) node.captions.unique = cj["unique"].get<std::string>();
    }
    if (nj.contains("attributes")) node.attributes = nj["attributes"].get<std::vector<std::string>>();
    if (nj.contains("functions")) node.functions = nj["functions"].get<std::vector<std::string>>();
    if (nj.contains("parts")) {
      for (const auto& pj : nj["parts"]) {
        PartAnnotation part;
        part.name = pj.at("name").get<std::string>();
        part.box = box2d_from_json(pj.at("box2d"), node_context + ", part " + part.name);
        if (pj.contains("function")) part.function = pj["function"].get<std::string>();
        node.parts.push_back(std::move(part));
      }
    }
    scene.nodes.push_back(std::move(node));
  }

  if (j.contains("edges")) {
    for (const auto& ej : j["edges"]) {
      RelationEdge edge;
      edge.subject = ej.at("subject").get<std::string>();
      edge.object = ej.at("object").get<std::string>();
      const auto concept_name = ej.at("concept").get<std::string>();
      const auto tag = concept_from_name(concept_name);
      if (!tag) fail(context + ": edge concept '" + concept_name + "' not in catalog");
      edge.tag = *tag;
      if (ej.contains("value")) edge.value = ej["value"].get<double>();
      if (ej.contains("unit")) edge.unit = ej["unit"].get<std::string>();
      scene.edges.push_back(std::move(edge));
    }
  }

  if (j.contains("embodiment")) {
    const auto& bj = j["embodiment"];
    EmbodimentConfig config;
    config.name = bj.at("name").get<std::string>();
    config.type = bj.at("type").get<std::string>();
    if (bj.contains("objects")) config.objects = bj["objects"].get<std::vector<std::string>>();
    config.robot = bj.at("robot").get<std::string>();
    scene.embodiment = std::move(config);
  }

  scene.validate();
  return scene;
}

SceneGraph load_scene(const std::string& annotation_path) {
  const auto text = read_file(annotation_path);
  auto j = nlohmann::ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(annotation_path + ": invalid JSON");
  try {
    return scene_from_json(j, annotation_path);
  } catch (const nlohmann::json::exception& e) {
    fail(annotation_path + ": schema violation: " + e.what());
  }
}

nlohmann::ordered_json scene_to_json(const SceneGraph& scene) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSceneSchemaVersion;
  j["scene_id"] = scene.scene_id;
  j["frames"] = nlohmann::ordered_json::array();
  for (const auto& frame : scene.frames) {
    nlohmann::ordered_json fj;
    fj["id"] = frame.id;
    fj["image"] = frame.image;
    fj["width"] = frame.width;
    fj["height"] = frame.height;
    if (frame.intrinsics) {
      fj["intrinsics"] = {{"fx", frame.intrinsics->fx},
                          {"fy", frame.intrinsics->fy},
                          {"cx", frame.intrinsics->cx},
                          {"cy", frame.intrinsics->cy}};
    }
    if (frame.depth_path) {
      fj["depth"] = {{"path", *frame.depth_path}, {"sidecar", *frame.depth_sidecar}};
    }
    j["frames"].push_back(std::move(fj));
  }
  if (scene.gravity_rotation) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : *scene.gravity_rotation) rows.push_back({row[0], row[1], row[2]});
    j["gravity_rotation"] = std::move(rows);
  }
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& node : scene.nodes) {
    nlohmann::ordered_json nj;
    nj["id"] = node.id;
    nj["category"] = node.category;
    nj["box2d"] = {node.box.x1, node.box.y1, node.box.x2, node.box.y2};
    if (node.mask) {
      nj["mask"] = {{"width", node.mask->width},
                    {"height", node.mask->height},
                    {"runs", node.mask->runs}};
    }
    if (node.point_cloud) nj["point_cloud"] = *node.point_cloud;
    if (node.box3d) {
      nj["box3d"] = {node.box3d->min_x, node.box3d->min_y, node.box3d->min_z,
                     node.box3d->max_x, node.box3d->max_y, node.box3d->max_z};
    }
    if (node.captions.coarse || node.captions.attributed || node.captions.unique) {
      nlohmann::ordered_json cj;
      if (node.captions.coarse) cj["coarse"] = *node.captions.coarse;
      if (node.captions.attributed) cj["attributed"] = *node.captions.attributed;
      if (node.captions.unique) cj["unique"] = *node.captions.unique;
      nj["captions"] = std::move(cj);
    }
    if (!node.attributes.empty()) nj["attributes"] = node.attributes;
    if (!node.functions.empty()) nj["functions"] = node.functions;
    if (!node.parts.empty()) {
      auto parts = nlohmann::ordered_json::array();
      for (const auto& part : node.parts) {
        nlohmann::ordered_json pj;
        pj["name"] = part.name;
        pj["box2d"] = {part.box.x1, part.box.y1, part.box.x2, part.box.y2};
        if (part.function) pj["function"] = *part.function;
        parts.push_back(std::move(pj));
      }
      nj["parts"] = std::move(parts);
    }
    j["nodes"].push_back(std::move(nj));
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& edge : scene.edges) {
    nlohmann::ordered_json ej;
    ej["subject"] = edge.subject;
    ej["object"] = edge.object;
    ej["concept"] = concept_name(edge.tag);
    if (edge.value) ej["value"] = *edge.value;
    if (edge.unit) ej["unit"] = *edge.unit;
    j["edges"].push_back(std::move(ej));
  }
  if (scene.embodiment) {
    j["embodiment"] = {{"name", scene.embodiment->name},
                       {"type", scene.embodiment->type},
                       {"objects", scene.embodiment->objects},
                       {"robot", scene.embodiment->robot}};
  }
  return j;
}

DepthMap depth_from_bytes(const std::string& blob, int width, int height,
                          const std::string& context) {
  if (width <= 0 || height <= 0) fail(context + ": invalid dimensions in sidecar");
  const auto expected = static_cast<std::size_t>(width) * height * 4;
  if (blob.size() != expected) {
    fail(context + ": length mismatch: got " + std::to_string(blob.size()) + " bytes, expected " +
         std::to_string(expected));
  }
  DepthMap map;
  map.width = width;
  map.height = height;
  const auto count = static_cast<std::size_t>(width) * height;
  map.depth.resize(count);
  map.valid.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t word = 0;
    // little-endian 32-bit float
    word |= static_cast<std::uint8_t>(blob[i * 4 + 0]);
    word |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(blob[i * 4 + 1])) << 8;
    word |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(blob[i * 4 + 2])) << 16;
    word |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(blob[i * 4 + 3])) << 24;
    float value;
    std::memcpy(&value, &word, sizeof(value));
    map.depth[i] = value;
    map.valid[i] = (std::isfinite(value) && value > 0.0f) ? 1 : 0;
  }
  if (map.valid_count() == 0) fail(context + ": all-invalid depth map");
  return map;
}

DepthMap load_depth(const std::string& depth_path, const std::string& sidecar_path) {
  const auto sidecar_text = read_file(sidecar_path);
  auto sidecar = nlohmann::ordered_json::parse(sidecar_text, nullptr, false);
  if (sidecar.is_discarded()) fail(sidecar_path + ": invalid JSON sidecar");
  const int width = sidecar.at("width").get<int>();
  const int height = sidecar.at("height").get<int>();
  return depth_from_bytes(read_file(depth_path), width, height, depth_path);
}

}  // namespace ekit::scene
