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

#ifndef EKIT_SPATIAL_TEMPLATES_HPP
#define EKIT_SPATIAL_TEMPLATES_HPP

#include <map>
#include <string>
#include <vector>

#include "ekit/scene/types.hpp"

namespace ekit::spatial {

/// One surface template. Slots use {name} syntax: {label}, {caption},
/// {anchor}, {offset_cm}, {direction}, {function}, {part}, {category}.
struct SurfaceTemplate {
  std::string id;
  scene::TaskFamily family = scene::TaskFamily::Pointing;
  std::string text;
};

struct TemplatePack {
  int version = 1;
  std::vector<SurfaceTemplate> templates;

  std::vector<const SurfaceTemplate*> for_family(scene::TaskFamily family) const;
  void validate() const;
};

/// Built-in pack: 28 pointing surfaces plus the other spatial families.
const TemplatePack& default_template_pack();

TemplatePack load_template_pack(const std::string& path);
void save_template_pack(const TemplatePack& pack, const std::string& path);

std::string fill_template(const std::string& text,
                          const std::map<std::string, std::string>& slots);

/// Appended to prompts whose answers are point lists.
const std::string& point_list_format_sentence();
/// Appended to prompts whose answers are one bounding box.
const std::string& box_format_sentence();
/// Appended to multiple-choice prompts.
const std::string& option_format_sentence();

}  // namespace ekit::spatial

#endif  // EKIT_SPATIAL_TEMPLATES_HPP
