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

#include "ekit/temporal/world.hpp"

#include <algorithm>
#include <set>

namespace ekit::temporal {

bool RobotSpec::has_tool(const std::string& tool) const {
  return std::any_of(tools.begin(), tools.end(),
                     [&](const ToolSpec& t) { return t.name == tool; });
}

void RobotSpec::validate() const {
  std::set<std::string> names;
  for (const auto& tool : tools) {
    if (!names.insert(tool.name).second) {
      fail("robot " + name + ": duplicate tool " + tool.name);
    }
  }
}

int arm_capacity(const RobotSpec& robot) { return arm_capacity_of(robot.embodiment); }

int arm_capacity_of(const std::string& embodiment) {
  return embodiment.find("dual-arm") != std::string::npos ? 2 : 1;
}

const Thing& World::thing(const std::string& id) const {
  const auto it = things.find(id);
  if (it == things.end()) fail("world: unknown thing " + id);
  return it->second;
}

Thing& World::thing_mut(const std::string& id) {
  const auto it = things.find(id);
  if (it == things.end()) fail("world: unknown thing " + id);
  return it->second;
}

bool World::has_location(const std::string& id) const {
  return std::find(locations.begin(), locations.end(), id) != locations.end();
}

bool World::visible(const Thing& t) const {
  if (t.kind != ThingKind::Item) return true;  // fixtures are always visible
  if (t.inside.empty()) return true;
  return thing(t.inside).open;
}

bool World::goal_satisfied(const Goal& goal) const {
  for (const auto& condition : goal.conditions) {
    switch (condition.kind) {
      case Condition::Kind::ItemAtLocation: {
        const auto& t = thing(condition.a);
        const bool held = [&] {
          for (const auto& [name, robot] : robots) {
            if (std::find(robot.holding.begin(), robot.holding.end(), condition.a) !=
                robot.holding.end()) {
              return true;
            }
          }
          return false;
        }();
        if (held || t.location != condition.b || !t.inside.empty()) return false;
        break;
      }
      case Condition::Kind::ItemInReceptacle: {
        const auto& t = thing(condition.a);
        if (t.inside != condition.b) return false;
        break;
      }
      case Condition::Kind::DevicePowered: {
        if (!thing(condition.a).powered) return false;
        break;
      }
    }
  }
  return true;
}

void World::check_invariants() const {
  std::set<std::string> held;
  for (const auto& [name, robot] : robots) {
    if (!has_location(robot.location)) fail("world: robot " + name + " at unknown location");
    for (const auto& id : robot.holding) {
      if (!held.insert(id).second) fail("world: " + id + " held by two robots");
    }
  }
  for (const auto& [id, t] : things) {
    const bool is_held = held.count(id) > 0;
    if (is_held) {
      if (t.kind != ThingKind::Item) fail("world: fixture " + id + " cannot be held");
      continue;
    }
    if (!has_location(t.location)) fail("world: thing " + id + " at unknown location");
    if (!t.inside.empty()) {
      const auto& container = thing(t.inside);
      if (container.kind != ThingKind::Receptacle) {
        fail("world: " + id + " inside non-receptacle " + t.inside);
      }
      if (container.location != t.location) {
        fail("world: " + id + " and its container disagree on location");
      }
      if (held.count(t.inside)) fail("world: container " + t.inside + " is held");
    }
  }
}

}  // namespace ekit::temporal
