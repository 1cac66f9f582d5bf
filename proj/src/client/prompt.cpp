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

#include "ekit/client/prompt.hpp"

#include <map>

namespace ekit::client {

using scene::TaskFamily;

namespace {

struct FamilyPrompt {
  std::string preamble_id;
  std::string role_text;
  std::string format_sentence;
  std::string format_signature;  // substring that marks the sentence as already present
};

const std::map<TaskFamily, FamilyPrompt>& family_prompts() {
  static const std::map<TaskFamily, FamilyPrompt> prompts = {
      {TaskFamily::Pointing,
       {"pointing_v1",
        "You are a robot with advanced visual and spatial analysis capabilities, identifying "
        "precise points in the image.",
        "Your answer should be formatted as a list of tuples, i.e. [(x1, y1), (x2, y2), ...], "
        "where each tuple contains the x and y coordinates of a point satisfying the conditions "
        "above.",
        "list of tuples"}},
      {TaskFamily::Referring,
       {"referring_v1",
        "You are a robot locating one unambiguous target in the image.",
        "Your answer should be formatted as a list of tuples, i.e. [(x1, y1), (x2, y2), ...], "
        "where each tuple contains the x and y coordinates of a point satisfying the conditions "
        "above.",
        "list of tuples"}},
      {TaskFamily::Placement,
       {"placement_v1",
        "You are a robot finding free space for object placement in the image.",
        "Your answer should be formatted as a list of tuples, i.e. [(x1, y1), (x2, y2), ...], "
        "where each tuple contains the x and y coordinates of a point satisfying the conditions "
        "above.",
        "list of tuples"}},
      {TaskFamily::Grounding,
       {"grounding_v1",
        "You are a robot localizing objects in the image.",
        "Output the bounding box as [x_min, y_min, x_max, y_max].",
        "x_min"}},
      {TaskFamily::Affordance,
       {"affordance_v1",
        "You are a robot identifying the area that affords the requested interaction.",
        "Output the affordance area as a bounding box [x_min, y_min, x_max, y_max].",
        "x_min"}},
      {TaskFamily::SpatialMC,
       {"spatial_mc_v1",
        "You are a robot answering questions about spatial relationships in the scene.",
        "Answer with the letter of the correct option, e.g. (A).",
        "letter of the correct option"}},
      {TaskFamily::EgoPlan,
       {"egoplan_v1",
        "You are a robot planning the next action from an egocentric view of task progress.",
        "Answer with the letter of the correct option, e.g. (A).",
        "letter of the correct option"}},
      {TaskFamily::MultiRobot,
       {"multirobot_v1",
        "You are the coordinator of a multi-robot team, producing structured plans.",
        "Answer with the JSON structure requested above.",
        "JSON"}},
      {TaskFamily::CloseLoop,
       {"closeloop_v1",
        "You are a robot in a closed-loop interaction, choosing the next action from feedback.",
        "Answer with the next action phrase, e.g. Toggle on the coffee machine.",
        "next action"}},
  };
  return prompts;
}

}  // namespace

std::string PromptSpec::hash() const {
  std::uint64_t h = fnv1a64(system_text);
  h = fnv1a64(user_text.data(), user_text.size(), h);
  for (const auto& image : images) h = fnv1a64(image.data(), image.size(), h);
  return to_hex(h);
}

PromptSpec build_prompt(const scene::QAItem& item, bool thinking) {
  const auto it = family_prompts().find(item.family);
  if (it == family_prompts().end()) {
    fail("build_prompt: no prompt template registered for this family");
  }
  const auto& fp = it->second;

  PromptSpec spec;
  spec.family = item.family;
  spec.preamble_id = fp.preamble_id;
  spec.thinking = thinking;
  spec.images = item.images;

  spec.system_text = fp.role_text;
  if (thinking) {
    spec.system_text +=
        " First reason step by step inside <think></think> tags, keeping the reasoning concise "
        "(200-500 words), then give the final answer inside <answer></answer> tags.";
  } else {
    spec.system_text += " Give the final answer directly inside <answer></answer> tags.";
  }

  // trajectory targets carry their own grammar regardless of family
  std::string format_sentence = fp.format_sentence;
  std::string format_signature = fp.format_signature;
  if (item.target_kind == scene::PayloadKind::Trajectory) {
    format_sentence =
        "Please predict up to 10 key trajectory points to complete the task. Your answer should "
        "be formatted as a list of tuples, i.e. [ [x1, y1], [x2, y2], ...], where each tuple "
        "contains the x and y coordinates of a point.";
    format_signature = "key trajectory points";
  }

  spec.user_text = item.prompt;
  if (spec.user_text.find(format_signature) == std::string::npos) {
    spec.user_text += " " + format_sentence;
  }
  return spec;
}

ParseOutcome parse_answer(const std::string& raw_text, scene::PayloadKind expected_kind) {
  ParseOutcome outcome;
  try {
    outcome.well_formed = scene::well_formed_think_answer(raw_text);
    const auto block = scene::extract_answer_block(raw_text);
    if (!block) {
      outcome.error = "no answer block";
      return outcome;
    }
    auto parsed = scene::parse_payload(*block, expected_kind);
    if (!parsed.ok()) {
      outcome.error = parsed.error;
      return outcome;
    }
    outcome.payload = std::move(*parsed.payload);
  } catch (const std::exception& e) {
    outcome.error = std::string("parse exception: ") + e.what();
  }
  return outcome;
}

}  // namespace ekit::client
