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

#ifndef EKIT_TEMPORAL_WORKFLOW_HPP
#define EKIT_TEMPORAL_WORKFLOW_HPP

#include "ekit/temporal/world.hpp"

namespace ekit::temporal {

inline constexpr const char* kWorkflowGenerator = "rule:v1";

struct Subtask {
  std::string id;  // "t1", "t2", ...
  std::string robot;
  std::string description;
  std::string rationale;
  std::vector<std::string> required_tools;
  std::vector<std::string> predecessors;
  // expansion fields
  std::string kind;  // "fetch" | "relocate" | "operate" | "report"
  std::string arg;   // thing id
  std::string arg2;  // destination location or receptacle id
};

struct WorkflowGraph {
  std::string task;
  std::vector<Subtask> subtasks;

  const Subtask* find(const std::string& id) const;
  std::vector<std::pair<std::string, std::string>> edges() const;
  /// Kahn toposort; throws on a cycle.
  std::vector<std::string> topological_order() const;
  /// DAG + assignment validity against the roster.
  void validate(const std::vector<RobotSpec>& roster) const;
};

/// Rule-based expansion of the goal into robot-assigned subtasks.
/// Assignment: capability match, then location proximity, then name order;
/// subtasks sharing a robot are serialized. Throws
/// "no capable robot: <tool>" when the roster cannot cover a required tool.
WorkflowGraph decompose(const Goal& goal, const World& world,
                        const std::vector<RobotSpec>& roster);

/// One Observation-Action pair: the observation predicate expected to hold
/// when the tool fires.
struct ObsAction {
  std::string expected_observation;
  std::string tool;
  std::vector<std::string> arguments;
};

struct ToolPlan {
  std::string subtask_id;
  std::string robot;
  std::vector<ObsAction> pairs;
};

/// Expands every subtask into the navigate -> locate -> manipulate skeleton,
/// inserting search for undiscovered items and open for closed containers.
/// Throws on a tool call naming an unknown object.
std::vector<ToolPlan> emit_tool_plan(const WorkflowGraph& workflow, const World& world);

nlohmann::ordered_json workflow_to_json(const WorkflowGraph& graph);
WorkflowGraph workflow_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json tool_plan_to_json(const ToolPlan& plan);

}  // namespace ekit::temporal

#endif  // EKIT_TEMPORAL_WORKFLOW_HPP
