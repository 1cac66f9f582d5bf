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

#ifndef EKIT_SCENE_SCENE_IO_HPP
#define EKIT_SCENE_SCENE_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "ekit/scene/types.hpp"

namespace ekit::scene {

inline constexpr int kSceneSchemaVersion = 1;

/// Loads and validates a scene annotation file (versioned JSON schema).
SceneGraph load_scene(const std::string& annotation_path);
SceneGraph scene_from_json(const nlohmann::ordered_json& j, const std::string& context);
nlohmann::ordered_json scene_to_json(const SceneGraph& scene);

/// Loads a flat little-endian float32 depth blob plus its JSON sidecar
/// ({"width": W, "height": H}). Validity = finite and > 0.
DepthMap load_depth(const std::string& depth_path, const std::string& sidecar_path);
DepthMap depth_from_bytes(const std::string& blob, int width, int height,
                          const std::string& context);

}  // namespace ekit::scene

#endif  // EKIT_SCENE_SCENE_IO_HPP
