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

#include "ekit/spatial/templates.hpp"

#include <json.hpp>

#include <set>

namespace ekit::spatial {

using scene::TaskFamily;

std::vector<const SurfaceTemplate*> TemplatePack::for_family(TaskFamily family) const {
  std::vector<const SurfaceTemplate*> out;
  for (const auto& t : templates) {
    if (t.family == family) out.push_back(&t);
  }
  return out;
}

void TemplatePack::validate() const {
  std::set<std::string> ids;
  for (const auto& t : templates) {
    if (!ids.insert(t.id).second) fail("template pack: duplicate template id " + t.id);
  }
  if (for_family(TaskFamily::Pointing).size() < 28) {
    fail("template pack: pointing family needs at least 28 surface variants");
  }
}

namespace {

TemplatePack build_default_pack() {
  TemplatePack pack;
  pack.version = 1;
  const auto add = [&](const char* id, TaskFamily family, const char* text) {
    pack.templates.push_back({id, family, text});
  };

  // pointing: two canonical surfaces plus reconstructed variants, 28 total
  const char* pointing[] = {
      "Point out all instances of {label} in the image.",
      "Help me find {label} in the image by pointing to them.",
      "Point to every {label} you can see.",
      "Mark each {label} in the image with a point.",
      "Locate all instances of {label} by pointing at them.",
      "Identify every {label} in the picture with points.",
      "Place a point on each {label} present.",
      "Show me where the {label} are by pointing.",
      "Point at all occurrences of {label}.",
      "Find each {label} and point to it.",
      "Indicate every {label} with a point.",
      "Tap on all the {label} in the image.",
      "Can you point out each {label} in the scene?",
      "Select every {label} by pointing at it.",
      "Pinpoint all the {label} shown.",
      "Highlight each {label} with a single point.",
      "Point to the locations of all {label}.",
      "Where are the {label}? Point them out.",
      "Give me a point for each {label} in view.",
      "Mark the positions of every {label}.",
      "Locate each {label} with one point apiece.",
      "Point out the {label} wherever they appear.",
      "Find all {label} and mark them with points.",
      "Please point at every {label} in this image.",
      "Identify the {label} instances by pointing.",
      "Point to all visible {label}.",
      "Drop a point on every {label} you find.",
      "Show every {label} by placing a point on it.",
  };
  int index = 0;
  for (const char* text : pointing) {
    char id[32];
    std::snprintf(id, sizeof(id), "pointing_%02d", ++index);
    add(id, TaskFamily::Pointing, text);
  }

  add("grounding_01", TaskFamily::Grounding, "Provide the bounding box of {caption}.");
  add("grounding_02", TaskFamily::Grounding, "Locate {caption} and output its bounding box.");
  add("grounding_03", TaskFamily::Grounding, "Where is {caption}? Answer with a bounding box.");
  add("grounding_04", TaskFamily::Grounding, "Draw a box around {caption}.");

  add("referring_01", TaskFamily::Referring, "Point to {caption}.");
  add("referring_02", TaskFamily::Referring, "Locate {caption} with a single point.");
  add("referring_03", TaskFamily::Referring, "Place one point on {caption}.");
  add("referring_04", TaskFamily::Referring, "Mark {caption} with exactly one point.");

  add("placement_01", TaskFamily::Placement,
      "Locate points within the vacant area {offset_cm}cm {direction} of {anchor}.");
  add("placement_02", TaskFamily::Placement,
      "Find free space {offset_cm}cm to the {direction} of {anchor} and mark it with points.");
  add("placement_03", TaskFamily::Placement,
      "Point to open spots {offset_cm}cm {direction} of {anchor}.");

  add("affordance_part_01", TaskFamily::Affordance,
      "Which part of a {category} can be {function}? Answer with its bounding box.");
  add("affordance_part_02", TaskFamily::Affordance,
      "Point out the bounding box of the part of the {category} that can be {function}.");
  add("affordance_part_03", TaskFamily::Affordance,
      "Provide the bounding box of the {part} of the {category}.");
  add("affordance_whole_01", TaskFamily::Affordance,
      "Which object in the image can be {function}? Answer with its bounding box.");
  add("affordance_whole_02", TaskFamily::Affordance,
      "Find the object that can be {function} and output its bounding box.");
  add("affordance_whole_03", TaskFamily::Affordance,
      "What can be {function}? Give its bounding box.");

  add("spatial_mc_01", TaskFamily::SpatialMC, "{question}");
  return pack;
}

}  // namespace

const TemplatePack& default_template_pack() {
  static const TemplatePack pack = [] {
    auto p = build_default_pack();
    p.validate();
    return p;
  }();
  return pack;
}

TemplatePack load_template_pack(const std::string& path) {
  const auto text = read_file(path);
  auto j = nlohmann::ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(path + ": invalid template pack JSON");
  TemplatePack pack;
  pack.version = j.at("version").get<int>();
  for (const auto& tj : j.at("templates")) {
    SurfaceTemplate t;
    t.id = tj.at("id").get<std::string>();
    const auto family = scene::family_from_name(tj.at("family").get<std::string>());
    if (!family) fail(path + ": unknown family in template " + t.id);
    t.family = *family;
    t.text = tj.at("text").get<std::string>();
    pack.templates.push_back(std::move(t));
  }
  pack.validate();
  return pack;
}

void save_template_pack(const TemplatePack& pack, const std::string& path) {
  nlohmann::ordered_json j;
  j["version"] = pack.version;
  j["templates"] = nlohmann::ordered_json::array();
  for (const auto& t : pack.templates) {
    j["templates"].push_back(
        {{"id", t.id}, {"family", scene::family_name(t.family)}, {"text", t.text}});
  }
  write_file(path, j.dump(2) + "\n");
}

std::string fill_template(const std::string& text,
                          const std::map<std::string, std::string>& slots) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find('{', pos);
    if (open == std::string::npos) {
      out.append(text, pos, std::string::npos);
      break;
    }
    const auto close = text.find('}', open);
    if (close == std::string::npos) fail("template: unbalanced brace in '" + text + "'");
    out.append(text, pos, open - pos);
    const auto name = text.substr(open + 1, close - open - 1);
    const auto it = slots.find(name);
    if (it == slots.end()) fail("template: unfilled slot {" + name + "} in '" + text + "'");
    out.append(it->second);
    pos = close + 1;
  }
  return out;
}

const std::string& point_list_format_sentence() {
  static const std::string sentence =
      "Your answer should be formatted as a list of tuples, i.e. [(x1, y1), (x2, y2), ...], "
      "where each tuple contains the x and y coordinates of a point satisfying the conditions "
      "above.";
  return sentence;
}

const std::string& box_format_sentence() {
  static const std::string sentence =
      "Your answer should be a single bounding box formatted as [x_min, y_min, x_max, y_max].";
  return sentence;
}

const std::string& option_format_sentence() {
  static const std::string sentence = "Answer with the letter of the correct option, e.g. (A).";
  return sentence;
}

}  // namespace ekit::spatial
