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

#include "ekit/temporal/simulator.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

namespace ekit::temporal {

namespace {

const std::vector<std::pair<ActionVerb, std::string>>& verb_table() {
  static const std::vector<std::pair<ActionVerb, std::string>> table = {
      {ActionVerb::Navigate, "navigate"}, {ActionVerb::Open, "open"},
      {ActionVerb::Close, "close"},       {ActionVerb::Pick, "pick"},
      {ActionVerb::Place, "place"},       {ActionVerb::Toggle, "toggle"},
      {ActionVerb::Search, "search"},     {ActionVerb::Done, "done"},
  };
  return table;
}

const std::vector<std::string>& failure_table(ActionVerb verb) {
  static const std::map<ActionVerb, std::vector<std::string>> tables = {
      {ActionVerb::Navigate, {"path blocked by an obstacle", "localization drift, stopped short"}},
      {ActionVerb::Open, {"handle slipped", "door jammed"}},
      {ActionVerb::Close, {"door jammed"}},
      {ActionVerb::Pick,
       {"object slipped from the gripper", "object occluded, grasp aborted", "out of reach"}},
      {ActionVerb::Place, {"placement unstable, retracted", "target surface cluttered"}},
      {ActionVerb::Toggle, {"button stuck"}},
      {ActionVerb::Search, {"view obstructed"}},
  };
  return tables.at(verb);
}

std::string human(const std::string& id) {
  std::string out = id;
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

void discover_at(World& world, const std::string& location) {
  for (const auto& [id, thing] : world.things) {
    if (thing.location != location) continue;
    if (thing.kind != ThingKind::Item) {
      world.discovered.insert(id);
    } else if (thing.inside.empty() || world.thing(thing.inside).open) {
      world.discovered.insert(id);
    }
  }
}

bool is_held(const World& world, const std::string& id, std::string* holder = nullptr) {
  for (const auto& [name, robot] : world.robots) {
    if (std::find(robot.holding.begin(), robot.holding.end(), id) != robot.holding.end()) {
      if (holder) *holder = name;
      return true;
    }
  }
  return false;
}

/// Empty string when the precondition holds, otherwise the failure reason.
std::string precondition_failure(const World& world, const Action& action) {
  const auto robot_it = world.robots.find(action.robot);
  if (robot_it == world.robots.end()) return "unknown robot " + action.robot;
  const auto& robot = robot_it->second;

  switch (action.verb) {
    case ActionVerb::Navigate:
      if (!world.has_location(action.arg)) return "unknown location " + action.arg;
      return "";
    case ActionVerb::Open:
    case ActionVerb::Close: {
      if (!world.things.count(action.arg)) return "unknown object " + action.arg;
      const auto& t = world.thing(action.arg);
      if (t.kind != ThingKind::Receptacle || !t.openable) {
        return human(t.name) + " cannot be opened or closed";
      }
      if (t.location != robot.location) return human(t.name) + " is not at your location";
      if (action.verb == ActionVerb::Open && t.open) return human(t.name) + " is already open";
      if (action.verb == ActionVerb::Close && !t.open) return human(t.name) + " is already closed";
      return "";
    }
    case ActionVerb::Pick: {
      if (!world.things.count(action.arg)) return "unknown object " + action.arg;
      const auto& t = world.thing(action.arg);
      if (t.kind != ThingKind::Item) return human(t.name) + " is fixed in place";
      if (is_held(world, action.arg)) return human(t.name) + " is already being carried";
      if (t.location != robot.location) return human(t.name) + " is not at your location";
      if (!world.discovered.count(action.arg)) return "you have not located " + human(t.name);
      if (!world.visible(t)) return human(world.thing(t.inside).name) + " is closed";
      if (static_cast<int>(robot.holding.size()) >= arm_capacity_of(robot.embodiment)) {
        return "grippers are full";
      }
      return "";
    }
    case ActionVerb::Place: {
      if (std::find(robot.holding.begin(), robot.holding.end(), action.arg) ==
          robot.holding.end()) {
        return "not holding " + human(action.arg);
      }
      if (world.things.count(action.arg2)) {
        const auto& target = world.thing(action.arg2);
        if (target.kind != ThingKind::Receptacle) return human(target.name) + " cannot hold items";
        if (target.location != robot.location) {
          return human(target.name) + " is not at your location";
        }
        if (target.openable && !target.open) return human(target.name) + " is closed";
        return "";
      }
      if (!world.has_location(action.arg2)) return "unknown place target " + action.arg2;
      if (action.arg2 != robot.location) return "you are not at " + human(action.arg2);
      return "";
    }
    case ActionVerb::Toggle: {
      if (!world.things.count(action.arg)) return "unknown object " + action.arg;
      const auto& t = world.thing(action.arg);
      if (t.kind != ThingKind::Device) return human(t.name) + " has no switch";
      if (t.location != robot.location) return human(t.name) + " is not at your location";
      return "";
    }
    case ActionVerb::Search: {
      if (world.things.count(action.arg)) {
        const auto& t = world.thing(action.arg);
        if (t.location != robot.location) return human(t.name) + " is not at your location";
        return "";
      }
      if (world.has_location(action.arg)) {
        if (action.arg != robot.location) return "you are not at " + human(action.arg);
        return "";
      }
      return "unknown search target " + action.arg;
    }
    case ActionVerb::Done:
      return "";
  }
  return "unhandled verb";
}

void apply_effects(World& world, const Action& action) {
  auto& robot = world.robots.at(action.robot);
  switch (action.verb) {
    case ActionVerb::Navigate:
      robot.location = action.arg;
      discover_at(world, action.arg);
      break;
    case ActionVerb::Open: {
      auto& t = world.thing_mut(action.arg);
      t.open = true;
      discover_at(world, t.location);
      break;
    }
    case ActionVerb::Close:
      world.thing_mut(action.arg).open = false;
      break;
    case ActionVerb::Pick: {
      auto& t = world.thing_mut(action.arg);
      t.inside.clear();
      robot.holding.push_back(action.arg);
      break;
    }
    case ActionVerb::Place: {
      auto& t = world.thing_mut(action.arg);
      robot.holding.erase(
          std::find(robot.holding.begin(), robot.holding.end(), action.arg));
      if (world.things.count(action.arg2)) {
        const auto& target = world.thing(action.arg2);
        t.location = target.location;
        t.inside = action.arg2;
      } else {
        t.location = action.arg2;
        t.inside.clear();
      }
      world.discovered.insert(action.arg);
      break;
    }
    case ActionVerb::Toggle: {
      auto& t = world.thing_mut(action.arg);
      t.powered = !t.powered;
      break;
    }
    case ActionVerb::Search: {
      const auto& robot_loc = robot.location;
      if (world.things.count(action.arg)) {
        const auto& target = world.thing(action.arg);
        if (target.kind == ThingKind::Receptacle) {
          // peeking reveals contents without opening
          for (const auto& [id, thing] : world.things) {
            if (thing.inside == action.arg) world.discovered.insert(id);
          }
        }
      }
      discover_at(world, robot_loc);
      world.searched.insert(action.arg);
      break;
    }
    case ActionVerb::Done:
      break;
  }
}

}  // namespace

bool apply_action(World& world, const Action& action, std::string* reason) {
  const auto failure = precondition_failure(world, action);
  if (!failure.empty()) {
    if (reason) *reason = failure;
    return false;
  }
  apply_effects(world, action);
  return true;
}

const std::string& verb_name(ActionVerb verb) {
  for (const auto& [v, name] : verb_table()) {
    if (v == verb) return name;
  }
  fail("unknown action verb");
}

std::optional<ActionVerb> verb_from_name(const std::string& name) {
  for (const auto& [v, n] : verb_table()) {
    if (n == name) return v;
  }
  return std::nullopt;
}

std::size_t Episode::injected_failures() const {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(),
                    [](const OTAStep& step) { return step.feedback.injected; }));
}

std::size_t Episode::eligible_actions() const {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const OTAStep& s) {
    return s.action.verb != ActionVerb::Done && (s.feedback.success || s.feedback.injected);
  }));
}

const std::string& outcome_name(Episode::Outcome outcome) {
  static const std::string names[] = {"success", "failure", "step-limit"};
  return names[static_cast<int>(outcome)];
}

std::string render_observation(const World& world, const std::string& robot_name) {
  const auto& robot = world.robots.at(robot_name);
  std::ostringstream out;
  out << "You are at " << human(robot.location) << ".";
  std::vector<std::string> visible;
  std::vector<std::string> fixtures;
  for (const auto& [id, thing] : world.things) {
    if (thing.location != robot.location || is_held(world, id)) continue;
    if (thing.kind == ThingKind::Receptacle) {
      fixtures.push_back(thing.name + (thing.openable ? (thing.open ? " (open)" : " (closed)") : ""));
    } else if (thing.kind == ThingKind::Device) {
      fixtures.push_back(thing.name + (thing.powered ? " (on)" : " (off)"));
    } else if (world.discovered.count(id) && world.visible(thing)) {
      visible.push_back(thing.name);
    }
  }
  std::sort(fixtures.begin(), fixtures.end());
  std::sort(visible.begin(), visible.end());
  out << " Fixtures:";
  if (fixtures.empty()) out << " none";
  for (const auto& f : fixtures) out << " " << f << ";";
  out << " Objects in view:";
  if (visible.empty()) out << " none";
  for (const auto& v : visible) out << " " << v << ";";
  out << " Holding:";
  if (robot.holding.empty()) out << " nothing";
  for (const auto& id : robot.holding) out << " " << world.thing(id).name << ";";
  return out.str();
}

std::string render_action_text(const World& world, const Action& action) {
  const auto name_of = [&](const std::string& id) {
    return world.things.count(id) ? world.thing(id).name : human(id);
  };
  switch (action.verb) {
    case ActionVerb::Navigate: return "Navigate to the " + human(action.arg);
    case ActionVerb::Open: return "Open the " + name_of(action.arg);
    case ActionVerb::Close: return "Close the " + name_of(action.arg);
    case ActionVerb::Pick: return "Pick up the " + name_of(action.arg);
    case ActionVerb::Place: {
      const bool into = world.things.count(action.arg2) > 0;
      return "Place the " + name_of(action.arg) + (into ? " into the " : " at the ") +
             name_of(action.arg2);
    }
    case ActionVerb::Toggle: {
      const bool on = world.things.count(action.arg) && !world.thing(action.arg).powered;
      return std::string("Toggle ") + (on ? "on" : "off") + " the " + name_of(action.arg);
    }
    case ActionVerb::Search: return "Search the " + name_of(action.arg);
    case ActionVerb::Done: return "Report the task done";
  }
  return "";
}

Episode simulate_episode(World world, const std::vector<RobotSpec>& roster, const Goal& goal,
                         const Policy& policy, const SimOptions& options) {
  if (options.failure_rate < 0.0 || options.failure_rate > 1.0) {
    fail("simulate_episode: failure_rate must be in [0, 1]");
  }
  if (options.max_steps < 1) fail("simulate_episode: max_steps must be >= 1");

  Episode episode;
  episode.id = options.episode_id;
  episode.scenario = world.scenario_id;
  episode.seed = options.seed;
  episode.failure_rate = options.failure_rate;
  episode.goal = goal;

  Rng rng(derive_seed(options.seed, {options.episode_id, "sim"}));
  PolicyContext context;

  if (world.goal_satisfied(goal)) {
    episode.outcome = Episode::Outcome::Success;
    return episode;
  }

  for (int step_index = 0; step_index < options.max_steps; ++step_index) {
    context.step_index = step_index;
    context.observations.clear();
    for (const auto& [name, state] : world.robots) {
      context.observations[name] = render_observation(world, name);
    }
    const auto maybe_action = policy(context);
    if (!maybe_action) {
      episode.outcome = world.goal_satisfied(goal) ? Episode::Outcome::Success
                                                   : Episode::Outcome::Failure;
      return episode;
    }
    const Action action = *maybe_action;

    OTAStep step;
    step.index = step_index;
    step.robot = action.robot;
    step.observation = context.observations.count(action.robot)
                           ? context.observations[action.robot]
                           : "unknown robot";
    step.frame_ref =
        "frames/" + options.episode_id + "/step_" + std::to_string(step_index) + ".png";
    step.action = action;

    const auto reason = precondition_failure(world, action);
    if (!reason.empty()) {
      step.feedback = {false, reason, false};
    } else if (action.verb != ActionVerb::Done && rng.bernoulli(options.failure_rate)) {
      const auto& table = failure_table(action.verb);
      step.feedback = {false,
                       table[static_cast<std::size_t>(
                           rng.uniform_int(0, static_cast<std::int64_t>(table.size()) - 1))],
                       true};
    } else {
      step.feedback = {true, "", false};
      apply_effects(world, action);
      world.check_invariants();
    }

    episode.steps.push_back(step);
    context.last_action = &episode.steps.back().action;
    context.last_feedback = &episode.steps.back().feedback;

    if (action.verb == ActionVerb::Done && step.feedback.success) {
      episode.outcome = world.goal_satisfied(goal) ? Episode::Outcome::Success
                                                   : Episode::Outcome::Failure;
      return episode;
    }
    if (world.goal_satisfied(goal)) {
      episode.outcome = Episode::Outcome::Success;
      return episode;
    }
  }
  episode.outcome = Episode::Outcome::StepLimit;
  return episode;
}

Policy scripted_policy(std::vector<Action> script) {
  auto cursor = std::make_shared<std::size_t>(0);
  return [script = std::move(script), cursor](const PolicyContext& context)
             -> std::optional<Action> {
    if (context.last_feedback && !context.last_feedback->success && *cursor > 0) {
      --*cursor;  // retry the failed action
    }
    if (*cursor >= script.size()) return std::nullopt;
    return script[(*cursor)++];
  };
}

std::vector<Action> plan_actions(const WorkflowGraph& workflow,
                                 const std::vector<ToolPlan>& plans) {
  std::vector<Action> actions;
  for (const auto& id : workflow.topological_order()) {
    const auto plan = std::find_if(plans.begin(), plans.end(),
                                   [&](const ToolPlan& p) { return p.subtask_id == id; });
    if (plan == plans.end()) fail("plan_actions: missing tool plan for subtask " + id);
    for (const auto& pair : plan->pairs) {
      Action action;
      action.robot = plan->robot;
      if (pair.tool == "report") {
        action.verb = ActionVerb::Done;
      } else {
        const auto verb = verb_from_name(pair.tool);
        if (!verb) fail("plan_actions: unknown tool " + pair.tool);
        action.verb = *verb;
      }
      if (!pair.arguments.empty()) action.arg = pair.arguments[0];
      if (pair.arguments.size() > 1) action.arg2 = pair.arguments[1];
      actions.push_back(std::move(action));
    }
  }
  return actions;
}

Episode replay_tool_plans(const World& world, const std::vector<RobotSpec>& roster,
                          const Goal& goal, const WorkflowGraph& workflow,
                          const std::vector<ToolPlan>& plans, const SimOptions& options) {
  return simulate_episode(world, roster, goal, scripted_policy(plan_actions(workflow, plans)),
                          options);
}

std::vector<Action> grounded_actions(const World& world, const std::string& robot) {
  std::vector<Action> actions;
  for (const auto& location : world.locations) {
    actions.push_back({robot, ActionVerb::Navigate, location, ""});
    actions.push_back({robot, ActionVerb::Search, location, ""});
  }
  for (const auto& [id, thing] : world.things) {
    switch (thing.kind) {
      case ThingKind::Item:
        actions.push_back({robot, ActionVerb::Pick, id, ""});
        for (const auto& location : world.locations) {
          actions.push_back({robot, ActionVerb::Place, id, location});
        }
        break;
      case ThingKind::Receptacle:
        if (thing.openable) {
          actions.push_back({robot, ActionVerb::Open, id, ""});
          actions.push_back({robot, ActionVerb::Close, id, ""});
        }
        for (const auto& [item_id, item] : world.things) {
          if (item.kind == ThingKind::Item) {
            actions.push_back({robot, ActionVerb::Place, item_id, id});
          }
        }
        break;
      case ThingKind::Device:
        actions.push_back({robot, ActionVerb::Toggle, id, ""});
        break;
    }
  }
  actions.push_back({robot, ActionVerb::Done, "", ""});
  return actions;
}

std::optional<Action> parse_action_text(const World& world, const std::string& robot,
                                        const std::string& text) {
  const auto canonical = canonical_text(text);
  for (const auto& action : grounded_actions(world, robot)) {
    if (canonical_text(render_action_text(world, action)) == canonical) return action;
  }
  // tolerate the bare fixture name form, e.g. "Toggle on Coffee Machine"
  for (const auto& action : grounded_actions(world, robot)) {
    auto rendered = canonical_text(render_action_text(world, action));
    const auto pos = rendered.find(" the ");
    if (pos != std::string::npos) rendered.erase(pos, 4);
    if (rendered == canonical) return action;
  }
  return std::nullopt;
}

nlohmann::ordered_json Episode::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["scenario"] = scenario;
  j["seed"] = seed;
  j["failure_rate"] = failure_rate;
  j["goal"] = {{"schema", goal.schema_id}, {"text", goal.text}};
  auto conditions = nlohmann::ordered_json::array();
  for (const auto& condition : goal.conditions) {
    const char* kind = condition.kind == Condition::Kind::ItemAtLocation ? "item_at_location"
                       : condition.kind == Condition::Kind::ItemInReceptacle ? "item_in_receptacle"
                                                                             : "device_powered";
    conditions.push_back({{"kind", kind}, {"a", condition.a}, {"b", condition.b}});
  }
  j["goal"]["conditions"] = std::move(conditions);
  j["steps"] = nlohmann::ordered_json::array();
  for (const auto& step : steps) {
    nlohmann::ordered_json sj;
    sj["index"] = step.index;
    sj["robot"] = step.robot;
    sj["observation"] = step.observation;
    sj["frame"] = step.frame_ref;
    if (step.thought) {
      sj["thought"] = *step.thought;
      sj["thought_generator"] = step.thought_generator;
    }
    sj["action"] = {{"verb", verb_name(step.action.verb)},
                    {"arg", step.action.arg},
                    {"arg2", step.action.arg2}};
    sj["feedback"] = {{"success", step.feedback.success},
                      {"reason", step.feedback.reason},
                      {"injected", step.feedback.injected}};
    j["steps"].push_back(std::move(sj));
  }
  j["outcome"] = outcome_name(outcome);
  return j;
}

Episode Episode::from_json(const nlohmann::ordered_json& j) {
  Episode episode;
  episode.id = j.at("id").get<std::string>();
  episode.scenario = j.at("scenario").get<std::string>();
  episode.seed = j.at("seed").get<std::uint64_t>();
  episode.failure_rate = j.at("failure_rate").get<double>();
  episode.goal.schema_id = j.at("goal").at("schema").get<std::string>();
  episode.goal.text = j.at("goal").at("text").get<std::string>();
  for (const auto& cj : j.at("goal").at("conditions")) {
    Condition condition;
    const auto kind = cj.at("kind").get<std::string>();
    condition.kind = kind == "item_at_location" ? Condition::Kind::ItemAtLocation
                     : kind == "item_in_receptacle" ? Condition::Kind::ItemInReceptacle
                                                    : Condition::Kind::DevicePowered;
    condition.a = cj.at("a").get<std::string>();
    condition.b = cj.at("b").get<std::string>();
    episode.goal.conditions.push_back(condition);
  }
  for (const auto& sj : j.at("steps")) {
    OTAStep step;
    step.index = sj.at("index").get<int>();
    step.robot = sj.at("robot").get<std::string>();
    step.observation = sj.at("observation").get<std::string>();
    step.frame_ref = sj.at("frame").get<std::string>();
    if (sj.contains("thought")) {
      step.thought = sj["thought"].get<std::string>();
      step.thought_generator = sj.value("thought_generator", "");
    }
    step.action.robot = step.robot;
    const auto verb = verb_from_name(sj.at("action").at("verb").get<std::string>());
    if (!verb) fail("episode json: unknown verb");
    step.action.verb = *verb;
    step.action.arg = sj.at("action").value("arg", "");
    step.action.arg2 = sj.at("action").value("arg2", "");
    step.feedback.success = sj.at("feedback").at("success").get<bool>();
    step.feedback.reason = sj.at("feedback").value("reason", "");
    step.feedback.injected = sj.at("feedback").value("injected", false);
    episode.steps.push_back(std::move(step));
  }
  const auto outcome = j.at("outcome").get<std::string>();
  episode.outcome = outcome == "success" ? Episode::Outcome::Success
                    : outcome == "failure" ? Episode::Outcome::Failure
                                           : Episode::Outcome::StepLimit;
  return episode;
}

}  // namespace ekit::temporal
