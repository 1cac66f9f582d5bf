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

#ifndef EKIT_TESTS_SUPPORT_WORKFLOW_ORACLE_HPP
#define EKIT_TESTS_SUPPORT_WORKFLOW_ORACLE_HPP

#include <set>
#include <string>
#include <vector>

#include "ekit/temporal/workflow.hpp"

namespace ekit::testsupport {

/// Brute-force workflow validator, independent of the library's Kahn-based
/// check: acyclicity by exhaustive DFS from every node, tool coverage by set
/// inclusion, assignment validity per subtask. Returns a list of violations
/// (empty = valid).
inline std::vector<std::string> brute_force_validate(
    const temporal::WorkflowGraph& graph, const std::vector<temporal::RobotSpec>& roster,
    const temporal::Goal* goal = nullptr) {
  std::vector<std::string> violations;

  // exhaustive DFS: a graph has a cycle iff some node can reach itself
  const auto successors_of = [&](const std::string& id) {
    std::vector<std::string> successors;
    for (const auto& subtask : graph.subtasks) {
      for (const auto& pred : subtask.predecessors) {
        if (pred == id) successors.push_back(subtask.id);
      }
    }
    return successors;
  };
  for (const auto& start : graph.subtasks) {
    std::vector<std::string> stack = successors_of(start.id);
    std::set<std::string> seen;
    while (!stack.empty()) {
      const auto current = stack.back();
      stack.pop_back();
      if (current == start.id) {
        violations.push_back("cycle through " + start.id);
        break;
      }
      if (!seen.insert(current).second) continue;
      for (const auto& next : successors_of(current)) stack.push_back(next);
    }
  }

  // assignment validity: assigned robot's tool list covers required tools
  for (const auto& subtask : graph.subtasks) {
    const temporal::RobotSpec* robot = nullptr;
    for (const auto& candidate : roster) {
      if (candidate.name == subtask.robot) robot = &candidate;
    }
    if (!robot) {
      violations.push_back("subtask " + subtask.id + " assigned to unknown robot");
      continue;
    }
    std::set<std::string> owned;
    for (const auto& tool : robot->tools) owned.insert(tool.name);
    for (const auto& tool : subtask.required_tools) {
      if (!owned.count(tool)) {
        violations.push_back("subtask " + subtask.id + " requires uncovered tool " + tool);
      }
    }
  }

  // terminal coverage: every goal condition is covered by some subtask
  if (goal) {
    for (const auto& condition : goal->conditions) {
      bool covered = false;
      for (const auto& subtask : graph.subtasks) {
        if (subtask.arg == condition.a) covered = true;
      }
      if (!covered) violations.push_back("goal condition on " + condition.a + " uncovered");
    }
  }

  // predecessors must exist
  for (const auto& subtask : graph.subtasks) {
    for (const auto& pred : subtask.predecessors) {
      if (!graph.find(pred)) {
        violations.push_back("subtask " + subtask.id + " has unknown predecessor " + pred);
      }
    }
  }
  return violations;
}

}  // namespace ekit::testsupport

#endif  // EKIT_TESTS_SUPPORT_WORKFLOW_ORACLE_HPP
