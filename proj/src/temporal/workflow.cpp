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

#include "ekit/temporal/workflow.hpp"

#include "ekit/temporal/simulator.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace ekit::temporal {

const Subtask* WorkflowGraph::find(const std::string& id) const {
  for (const auto& subtask : subtasks) {
    if (subtask.id == id) return &subtask;
  }
  return nullptr;
}

std::vector<std::pair<std::string, std::string>> WorkflowGraph::edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& subtask : subtasks) {
    for (const auto& pred : subtask.predecessors) out.emplace_back(pred, subtask.id);
  }
  return out;
}

std::vector<std::string> WorkflowGraph::topological_order() const {
  std::map<std::string, int> in_degree;
  std::map<std::string, std::vector<std::string>> successors;
  for (const auto& subtask : subtasks) in_degree[subtask.id] = 0;
  for (const auto& subtask : subtasks) {
    for (const auto& pred : subtask.predecessors) {
      if (!in_degree.count(pred)) fail("workflow: predecessor " + pred + " does not exist");
      successors[pred].push_back(subtask.id);
      ++in_degree[subtask.id];
    }
  }
  // min-heap keyed by id keeps the order deterministic
  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [id, degree] : in_degree) {
    if (degree == 0) ready.push(id);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    const auto id = ready.top();
    ready.pop();
    order.push_back(id);
    for (const auto& next : successors[id]) {
      if (--in_degree[next] == 0) ready.push(next);
    }
  }
  if (order.size() != subtasks.size()) fail("workflow: cycle detected");
  return order;
}

void WorkflowGraph::validate(const std::vector<RobotSpec>& roster) const {
  topological_order();
  for (const auto& subtask : subtasks) {
    const auto robot = std::find_if(roster.begin(), roster.end(),
                                    [&](const RobotSpec& r) { return r.name == subtask.robot; });
    if (robot == roster.end()) {
      fail("workflow: subtask " + subtask.id + " assigned to unknown robot " + subtask.robot);
    }
    for (const auto& tool : subtask.required_tools) {
      if (!robot->has_tool(tool)) {
        fail("workflow: subtask " + subtask.id + " needs tool " + tool + " that " + robot->name +
             " lacks");
      }
    }
  }
}

namespace {

std::string human(const std::string& id) {
  std::string out = id;
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

struct WorkUnit {
  std::string kind;  // "fetch" | "relocate" | "operate" | "report"
  std::string arg;
  std::string arg2;
  std::string description;
  std::vector<std::string> required_tools;
  std::string primary_location;
};

/// Static tool needs for acquiring an item, given where it currently sits.
std::vector<std::string> acquisition_tools(const World& world, const std::string& item_id) {
  std::vector<std::string> tools = {"navigate", "pick", "place"};
  const auto& item = world.thing(item_id);
  if (!world.discovered.count(item_id)) tools.push_back("search");
  if (!item.inside.empty() && !world.thing(item.inside).open) tools.push_back("open");
  return tools;
}

}  // namespace

WorkflowGraph decompose(const Goal& goal, const World& world,
                        const std::vector<RobotSpec>& roster) {
  std::vector<WorkUnit> units;
  for (const auto& condition : goal.conditions) {
    switch (condition.kind) {
      case Condition::Kind::ItemAtLocation: {
        const auto& item = world.thing(condition.a);
        WorkUnit unit;
        unit.arg = condition.a;
        unit.arg2 = condition.b;
        unit.required_tools = acquisition_tools(world, condition.a);
        unit.primary_location = item.location;
        if (condition.b == world.user_location) {
          unit.kind = "fetch";
          unit.description = "Fetch the " + item.name + " and hand it over at " +
                             human(world.user_location);
        } else {
          unit.kind = "relocate";
          unit.description = "Move the " + item.name + " to " + human(condition.b);
        }
        units.push_back(std::move(unit));
        break;
      }
      case Condition::Kind::ItemInReceptacle: {
        const auto& item = world.thing(condition.a);
        const auto& receptacle = world.thing(condition.b);
        WorkUnit unit;
        unit.kind = "relocate";
        unit.arg = condition.a;
        unit.arg2 = condition.b;
        unit.required_tools = acquisition_tools(world, condition.a);
        if (receptacle.openable && !receptacle.open &&
            std::find(unit.required_tools.begin(), unit.required_tools.end(), "open") ==
                unit.required_tools.end()) {
          unit.required_tools.push_back("open");
        }
        unit.primary_location = item.location;
        unit.description = "Put the " + item.name + " into the " + receptacle.name;
        units.push_back(std::move(unit));
        break;
      }
      case Condition::Kind::DevicePowered: {
        const auto& device = world.thing(condition.a);
        WorkUnit unit;
        unit.kind = "operate";
        unit.arg = condition.a;
        unit.required_tools = {"navigate", "toggle"};
        unit.primary_location = device.location;
        unit.description = "Switch on the " + device.name;
        units.push_back(std::move(unit));
        break;
      }
    }
  }
  WorkUnit report;
  report.kind = "report";
  report.required_tools = {"navigate", "report"};
  report.primary_location = world.user_location;
  report.description = "Confirm the goal is met and report completion";
  units.push_back(std::move(report));

  WorkflowGraph graph;
  graph.task = goal.text;

  std::map<std::string, std::string> robot_location;
  for (const auto& robot : roster) robot_location[robot.name] = robot.location;

  int counter = 0;
  std::vector<std::string> work_ids;
  for (const auto& unit : units) {
    // capability match, then proximity, then name
    std::vector<const RobotSpec*> capable;
    for (const auto& robot : roster) {
      const bool ok = std::all_of(unit.required_tools.begin(), unit.required_tools.end(),
                                  [&](const std::string& tool) { return robot.has_tool(tool); });
      if (ok) capable.push_back(&robot);
    }
    if (capable.empty()) {
      for (const auto& tool : unit.required_tools) {
        const bool anyone = std::any_of(roster.begin(), roster.end(),
                                        [&](const RobotSpec& r) { return r.has_tool(tool); });
        if (!anyone) fail("no capable robot: " + tool);
      }
      fail("no capable robot: " + unit.required_tools.front());
    }
    std::sort(capable.begin(), capable.end(), [&](const RobotSpec* a, const RobotSpec* b) {
      const int prox_a = robot_location[a->name] == unit.primary_location ? 0 : 1;
      const int prox_b = robot_location[b->name] == unit.primary_location ? 0 : 1;
      if (prox_a != prox_b) return prox_a < prox_b;
      return a->name < b->name;
    });
    const auto& chosen = *capable.front();

    Subtask subtask;
    subtask.id = "t" + std::to_string(++counter);
    subtask.robot = chosen.name;
    subtask.description = unit.description;
    subtask.required_tools = unit.required_tools;
    subtask.kind = unit.kind;
    subtask.arg = unit.arg;
    subtask.arg2 = unit.arg2;
    std::string tool_list;
    for (std::size_t i = 0; i < unit.required_tools.size(); ++i) {
      if (i) tool_list += ", ";
      tool_list += unit.required_tools[i];
    }
    subtask.rationale = "Assigned to " + chosen.name + ": it provides [" + tool_list + "]" +
                        (robot_location[chosen.name] == unit.primary_location
                             ? " and already stands at " + human(unit.primary_location)
                             : " and is the closest eligible robot by the tie-break order") +
                        ".";
    if (unit.kind != "report") work_ids.push_back(subtask.id);
    graph.subtasks.push_back(std::move(subtask));
  }

  // every work unit precedes the final report
  auto& report_subtask = graph.subtasks.back();
  report_subtask.predecessors = work_ids;

  // a robot executes its own subtasks sequentially
  std::map<std::string, std::vector<Subtask*>> by_robot;
  for (auto& subtask : graph.subtasks) {
    if (subtask.kind != "report") by_robot[subtask.robot].push_back(&subtask);
  }
  for (auto& [robot, tasks] : by_robot) {
    for (std::size_t i = 1; i < tasks.size(); ++i) {
      tasks[i]->predecessors.push_back(tasks[i - 1]->id);
    }
  }

  graph.validate(roster);
  return graph;
}

std::vector<ToolPlan> emit_tool_plan(const WorkflowGraph& workflow, const World& world) {
  // A forward model rolls the state through the expansion in execution order,
  // so a later subtask never re-opens a container an earlier one left open.
  World model = world;
  std::map<std::string, ToolPlan> by_subtask;

  for (const auto& id : workflow.topological_order()) {
    const auto* subtask = workflow.find(id);
    ToolPlan plan;
    plan.subtask_id = subtask->id;
    plan.robot = subtask->robot;

    const auto check_thing = [&](const std::string& thing_id) {
      if (!model.things.count(thing_id)) fail("tool call references unknown object: " + thing_id);
    };
    const auto check_location = [&](const std::string& location_id) {
      if (!model.has_location(location_id)) {
        fail("tool call references unknown location: " + location_id);
      }
    };
    const auto emit = [&](const std::string& observation, const std::string& tool,
                          std::vector<std::string> arguments) {
      plan.pairs.push_back({observation, tool, arguments});
      Action action;
      action.robot = plan.robot;
      action.verb = tool == "report" ? ActionVerb::Done : *verb_from_name(tool);
      if (!arguments.empty()) action.arg = arguments[0];
      if (arguments.size() > 1) action.arg2 = arguments[1];
      std::string reason;
      if (action.verb != ActionVerb::Done && !apply_action(model, action, &reason)) {
        fail("emit_tool_plan: expansion produced an infeasible step (" + tool + "): " + reason);
      }
    };

    if (subtask->kind == "fetch" || subtask->kind == "relocate") {
      check_thing(subtask->arg);
      const auto item = model.thing(subtask->arg);  // copy: model mutates below
      emit(human(item.location) + " ahead", "navigate", {item.location});
      if (!model.discovered.count(subtask->arg)) {
        const std::string search_target = item.inside.empty() ? item.location : item.inside;
        emit(item.name + " not located yet", "search", {search_target});
      }
      if (!item.inside.empty() && !model.thing(item.inside).open) {
        emit(model.thing(item.inside).name + " closed", "open", {item.inside});
      }
      emit(item.name + " visible", "pick", {subtask->arg});

      std::string dest_location;
      std::string place_target;
      if (subtask->kind == "fetch") {
        dest_location = model.user_location;
        place_target = model.user_location;
      } else if (model.things.count(subtask->arg2)) {
        const auto& receptacle = model.thing(subtask->arg2);
        dest_location = receptacle.location;
        place_target = subtask->arg2;
      } else {
        check_location(subtask->arg2);
        dest_location = subtask->arg2;
        place_target = subtask->arg2;
      }
      emit("holding " + item.name, "navigate", {dest_location});
      if (model.things.count(place_target)) {
        const auto& receptacle = model.thing(place_target);
        if (receptacle.openable && !receptacle.open) {
          emit(receptacle.name + " closed", "open", {place_target});
        }
      }
      emit("at " + human(dest_location), "place", {subtask->arg, place_target});
    } else if (subtask->kind == "operate") {
      check_thing(subtask->arg);
      const auto& device = model.thing(subtask->arg);
      const auto device_location = device.location;
      const auto device_name = device.name;
      emit(human(device_location) + " ahead", "navigate", {device_location});
      emit(device_name + " in reach", "toggle", {subtask->arg});
    } else if (subtask->kind == "report") {
      emit("goal conditions observed", "navigate", {model.user_location});
      emit("at " + human(model.user_location), "report", {});
    } else {
      fail("emit_tool_plan: unknown subtask kind " + subtask->kind);
    }
    by_subtask[subtask->id] = std::move(plan);
  }

  // return plans in the workflow's subtask order
  std::vector<ToolPlan> plans;
  for (const auto& subtask : workflow.subtasks) plans.push_back(by_subtask.at(subtask.id));
  return plans;
}

nlohmann::ordered_json workflow_to_json(const WorkflowGraph& graph) {
  nlohmann::ordered_json j;
  j["task"] = graph.task;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& subtask : graph.subtasks) {
    j["nodes"].push_back({{"id", subtask.id},
                          {"robot", subtask.robot},
                          {"description", subtask.description},
                          {"rationale", subtask.rationale}});
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& [from, to] : graph.edges()) {
    j["edges"].push_back({from, to});
  }
  j["generator"] = kWorkflowGenerator;
  return j;
}

WorkflowGraph workflow_from_json(const nlohmann::ordered_json& j) {
  WorkflowGraph graph;
  graph.task = j.value("task", "");
  for (const auto& nj : j.at("nodes")) {
    Subtask subtask;
    subtask.id = nj.at("id").get<std::string>();
    subtask.robot = nj.value("robot", "");
    subtask.description = nj.value("description", "");
    subtask.rationale = nj.value("rationale", "");
    graph.subtasks.push_back(std::move(subtask));
  }
  if (j.contains("edges")) {
    for (const auto& ej : j["edges"]) {
      if (!ej.is_array() || ej.size() != 2) fail("workflow json: edge must be [from, to]");
      const auto from = ej[0].get<std::string>();
      const auto to = ej[1].get<std::string>();
      for (auto& subtask : graph.subtasks) {
        if (subtask.id == to) subtask.predecessors.push_back(from);
      }
    }
  }
  return graph;
}

nlohmann::ordered_json tool_plan_to_json(const ToolPlan& plan) {
  nlohmann::ordered_json j;
  j["subtask"] = plan.subtask_id;
  j["robot"] = plan.robot;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& pair : plan.pairs) {
    j["nodes"].push_back({{"observation", pair.expected_observation},
                          {"tool", pair.tool},
                          {"arguments", pair.arguments}});
  }
  j["generator"] = kWorkflowGenerator;
  return j;
}

}  // namespace ekit::temporal
