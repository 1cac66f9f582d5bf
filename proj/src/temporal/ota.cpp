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

#include "ekit/temporal/ota.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ekit::temporal {

using scene::PayloadKind;
using scene::QAItem;
using scene::TaskFamily;

namespace {

std::string human(const std::string& id) {
  std::string out = id;
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

/// Thought templates, one flavor per action role. Retries get a reflection
/// referring to the failure reason of the previous attempt.
std::string thought_for(const World& world, const Episode& episode, std::size_t index) {
  const auto& step = episode.steps[index];
  const bool retry = index > 0 && episode.steps[index - 1].action == step.action &&
                     !episode.steps[index - 1].feedback.success;
  if (retry) {
    return "The last attempt failed (" + episode.steps[index - 1].feedback.reason +
           "); adjusting and trying again.";
  }
  const auto name_of = [&](const std::string& id) {
    return world.things.count(id) ? world.thing(id).name : human(id);
  };
  switch (step.action.verb) {
    case ActionVerb::Navigate:
      return "The task is \"" + episode.goal.text + "\". The next waypoint is " +
             human(step.action.arg) + "; moving there.";
    case ActionVerb::Search:
      return "The target has not been seen yet; the " + name_of(step.action.arg) +
             " is the most likely spot, so I will search it.";
    case ActionVerb::Open:
      return "The " + name_of(step.action.arg) + " is closed and may hold what I need; opening it.";
    case ActionVerb::Close:
      return "Closing the " + name_of(step.action.arg) + " to leave the scene tidy.";
    case ActionVerb::Pick:
      return "The " + name_of(step.action.arg) + " is visible and within reach; picking it up.";
    case ActionVerb::Place:
      return "Placing the " + name_of(step.action.arg) + " at " + name_of(step.action.arg2) +
             " completes this part of the task.";
    case ActionVerb::Toggle:
      return "The " + name_of(step.action.arg) + " must change state for the goal; toggling it.";
    case ActionVerb::Done:
      return "Every goal condition checks out from here; reporting the task as done.";
  }
  return "";
}

}  // namespace

OTAResult synthesize_ota(const ScenarioInstance& instance, std::uint64_t seed,
                         double failure_rate, int max_steps) {
  const auto workflow = decompose(instance.goal, instance.world, instance.roster);
  const auto plans = emit_tool_plan(workflow, instance.world);
  OTAResult result;
  result.script = plan_actions(workflow, plans);

  SimOptions options;
  options.failure_rate = failure_rate;
  options.max_steps = max_steps;
  options.seed = seed;
  options.episode_id = instance.id + "_ota_" + std::to_string(seed);
  result.episode = simulate_episode(instance.world, instance.roster, instance.goal,
                                    scripted_policy(result.script), options);

  for (std::size_t i = 0; i < result.episode.steps.size(); ++i) {
    result.episode.steps[i].thought = thought_for(instance.world, result.episode, i);
    result.episode.steps[i].thought_generator = kThoughtGenerator;
  }
  return result;
}

std::optional<QAItem> gen_egoplan_item(const World& initial_world, const Episode& episode,
                                       std::size_t step_index, std::uint64_t seed,
                                       int n_distractors) {
  if (step_index == 0 || step_index >= episode.steps.size()) {
    fail("gen_egoplan_item: step index must have at least one prior step");
  }
  if (n_distractors < 0 || n_distractors > 3) fail("gen_egoplan_item: up to 3 distractors");
  const auto& step = episode.steps[step_index];
  const auto correct_text = render_action_text(initial_world, step.action);

  std::set<std::string> pool;
  for (const auto& action : grounded_actions(initial_world, step.robot)) {
    const auto text = render_action_text(initial_world, action);
    if (text != correct_text) pool.insert(text);
  }
  if (pool.empty()) return std::nullopt;

  Rng rng(derive_seed(seed, {episode.id, "egoplan", std::to_string(step_index)}));
  std::vector<std::string> pool_vec(pool.begin(), pool.end());
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(n_distractors), pool_vec.size());
  const auto picks = rng.sample_without_replacement(pool_vec.size(), take);

  std::vector<std::pair<std::string, bool>> options;
  options.emplace_back(correct_text, true);
  for (const auto index : picks) options.emplace_back(pool_vec[index], false);
  rng.shuffle(options);

  QAItem item;
  item.id = episode.id + ":egoplan:" + std::to_string(step_index);
  item.family = TaskFamily::EgoPlan;
  for (std::size_t i = 0; i < step_index; ++i) item.images.push_back(episode.steps[i].frame_ref);
  item.images.push_back(step.frame_ref);

  std::ostringstream prompt;
  prompt << "Task: " << episode.goal.text
         << " The earlier frames show your progress so far; the last frame is the current view."
         << " What should you do next?\nOptions:";
  char letter = 'A';
  char correct_letter = 'A';
  for (const auto& [text, correct] : options) {
    prompt << " (" << letter << ") " << text << ".";
    item.options.push_back(text);
    if (correct) correct_letter = letter;
    ++letter;
  }
  prompt << "\nAnswer with the letter of the correct option, e.g. (A).";
  item.prompt = prompt.str();
  item.target_kind = PayloadKind::Option;
  item.ground_truth = scene::OptionPayload{correct_letter};
  item.provenance = {episode.scenario, "egoplan:v1", seed};
  item.validate();
  return item;
}

std::optional<QAItem> gen_closeloop_item(const World& initial_world, const Episode& episode,
                                         std::size_t step_index) {
  if (step_index == 0 || step_index >= episode.steps.size()) return std::nullopt;
  const auto& prev = episode.steps[step_index - 1];
  const auto& step = episode.steps[step_index];

  QAItem item;
  item.id = episode.id + ":closeloop:" + std::to_string(step_index);
  item.family = TaskFamily::CloseLoop;
  item.images = {step.frame_ref};
  std::ostringstream prompt;
  prompt << "The task is \"" << episode.goal.text << "\". After you have finished \""
         << render_action_text(initial_world, prev.action) << "\", you can see <image>, and the "
         << "feedback of the last action is "
         << (prev.feedback.success ? "success" : "failure: " + prev.feedback.reason)
         << ". What is your next action?";
  item.prompt = prompt.str();
  item.target_kind = PayloadKind::FreeText;
  item.ground_truth = scene::FreeTextPayload{render_action_text(initial_world, step.action)};
  item.provenance = {episode.scenario, "closeloop:v1", episode.seed};
  item.validate();
  return item;
}

namespace {

std::string roster_block(const std::vector<RobotSpec>& roster) {
  std::ostringstream out;
  for (const auto& robot : roster) {
    out << "- " << robot.name << " (" << robot.embodiment << ") at " << human(robot.location)
        << "; tools:";
    for (const auto& tool : robot.tools) out << " " << tool.name << tool.signature << ";";
    out << "\n";
  }
  return out.str();
}

nlohmann::ordered_json world_block(const World& world) {
  nlohmann::ordered_json j;
  j["locations"] = world.locations;
  j["things"] = nlohmann::ordered_json::array();
  for (const auto& [id, thing] : world.things) {
    nlohmann::ordered_json tj;
    tj["id"] = id;
    tj["name"] = thing.name;
    tj["kind"] = thing.kind == ThingKind::Item ? "item"
                 : thing.kind == ThingKind::Receptacle ? "receptacle"
                                                       : "device";
    tj["location"] = thing.location;
    if (!thing.inside.empty()) tj["inside"] = thing.inside;
    if (thing.openable) tj["open"] = thing.open;
    if (thing.kind == ThingKind::Device) tj["powered"] = thing.powered;
    j["things"].push_back(std::move(tj));
  }
  return j;
}

}  // namespace

QAItem make_workflow_item(const ScenarioInstance& instance, const WorkflowGraph& workflow) {
  QAItem item;
  item.id = instance.id + ":multirobot:workflow";
  item.family = TaskFamily::MultiRobot;
  item.images = {};
  std::ostringstream prompt;
  prompt << "You coordinate a team of robots.\nScene graph: " << world_block(instance.world).dump()
         << "\nRobots:\n" << roster_block(instance.roster)
         << "Task goal: " << instance.goal.text << "\n"
         << "Decompose the goal into a workflow graph of robot-assigned subtasks with a short "
            "rationale per subtask. Answer with JSON of the form {\"task\": str, \"nodes\": "
            "[{\"id\": str, \"robot\": str, \"description\": str, \"rationale\": str}], "
            "\"edges\": [[from_id, to_id]]}.";
  item.prompt = prompt.str();
  item.target_kind = PayloadKind::Workflow;
  item.ground_truth = scene::WorkflowPayload{workflow_to_json(workflow)};
  item.provenance = {instance.id, "multirobot_workflow:v1", 0};
  item.validate();
  return item;
}

std::vector<QAItem> make_toolplan_items(const ScenarioInstance& instance,
                                        const WorkflowGraph& workflow,
                                        const std::vector<ToolPlan>& plans) {
  std::vector<QAItem> items;
  for (const auto& plan : plans) {
    const auto* subtask = workflow.find(plan.subtask_id);
    if (!subtask) fail("make_toolplan_items: tool plan for unknown subtask " + plan.subtask_id);
    const auto robot = std::find_if(instance.roster.begin(), instance.roster.end(),
                                    [&](const RobotSpec& r) { return r.name == plan.robot; });
    QAItem item;
    item.id = instance.id + ":multirobot:toolplan:" + plan.subtask_id;
    item.family = TaskFamily::MultiRobot;
    std::ostringstream prompt;
    prompt << "You are robot " << plan.robot;
    if (robot != instance.roster.end()) {
      prompt << " (" << robot->embodiment << "). Your tools:";
      for (const auto& tool : robot->tools) prompt << " " << tool.name << tool.signature << ";";
    }
    prompt << "\nScene graph: " << world_block(instance.world).dump()
           << "\nYour subtask: " << subtask->description << "\n"
           << "Translate the subtask into low-level observation-action pairs. Answer with JSON "
              "of the form {\"subtask\": str, \"nodes\": [{\"observation\": str, \"tool\": str, "
              "\"arguments\": [str]}]}.";
    item.prompt = prompt.str();
    item.target_kind = PayloadKind::Workflow;
    item.ground_truth = scene::WorkflowPayload{tool_plan_to_json(plan)};
    item.provenance = {instance.id, "multirobot_toolplan:v1", 0};
    item.validate();
    items.push_back(std::move(item));
  }
  return items;
}

scene::ShardManifest write_episode_shard(const std::vector<Episode>& episodes,
                                         const std::string& path) {
  std::ostringstream buffer;
  for (const auto& episode : episodes) buffer << episode.to_json().dump() << '\n';
  const auto bytes = buffer.str();
  write_file(path, bytes);
  scene::ShardManifest manifest;
  manifest.shard_path = path;
  manifest.count = episodes.size();
  manifest.checksum = to_hex(fnv1a64(bytes));
  write_file(path + ".manifest.json", manifest.to_json().dump(2) + "\n");
  return manifest;
}

std::vector<Episode> read_episode_shard(const std::string& path) {
  std::vector<Episode> episodes;
  for (const auto& line : split_lines(read_file(path))) {
    if (trim(line).empty()) continue;
    auto j = nlohmann::ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) fail(path + ": invalid episode JSON line");
    episodes.push_back(Episode::from_json(j));
  }
  return episodes;
}

TemporalForgeOutput forge_temporal(const std::vector<ScenarioTemplate>& templates,
                                   const TemporalForgeOptions& options) {
  TemporalForgeOutput out;
  const auto wants = [&](const char* family) {
    return options.families.empty() || options.families.count(family) > 0;
  };
  for (const auto& tmpl : templates) {
    for (int k = 0; k < options.scenarios_per_template; ++k) {
      const auto instance_seed = derive_seed(options.seed, {tmpl.id, std::to_string(k)});
      const auto instance = instantiate_scenario(tmpl, instance_seed);
      const auto workflow = decompose(instance.goal, instance.world, instance.roster);
      const auto plans = emit_tool_plan(workflow, instance.world);

      if (wants("workflow")) out.items.push_back(make_workflow_item(instance, workflow));
      if (wants("toolplan")) {
        auto items = make_toolplan_items(instance, workflow, plans);
        out.items.insert(out.items.end(), std::make_move_iterator(items.begin()),
                         std::make_move_iterator(items.end()));
      }

      if (wants("closeloop") || wants("egoplan")) {
        const auto ota = synthesize_ota(instance, instance_seed, options.failure_rate,
                                        options.max_steps);
        // replay guarantee check at p = 0
        SimOptions replay;
        replay.failure_rate = 0.0;
        replay.max_steps = options.max_steps;
        replay.seed = instance_seed;
        replay.episode_id = ota.episode.id + "_replay";
        const auto replayed = simulate_episode(instance.world, instance.roster, instance.goal,
                                               scripted_policy(ota.script), replay);
        ++out.replay_total;
        if (replayed.outcome == Episode::Outcome::Success) ++out.replay_successes;

        out.episodes.push_back(ota.episode);
        if (wants("closeloop")) {
          for (std::size_t i = 1; i < ota.episode.steps.size(); ++i) {
            if (auto item = gen_closeloop_item(instance.world, ota.episode, i)) {
              out.items.push_back(std::move(*item));
            }
          }
        }
        if (wants("egoplan")) {
          const auto steps = ota.episode.steps.size();
          int emitted = 0;
          for (std::size_t i = 1; i < steps && emitted < options.egoplan_per_episode; ++i) {
            if (auto item = gen_egoplan_item(instance.world, ota.episode, i,
                                             derive_seed(instance_seed, {std::to_string(i)}))) {
              out.items.push_back(std::move(*item));
              ++emitted;
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace ekit::temporal
