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

#ifndef EKIT_TEMPORAL_WORLD_HPP
#define EKIT_TEMPORAL_WORLD_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ekit/common.hpp"

namespace ekit::temporal {

struct ToolSpec {
  std::string name;       // "navigate", "pick", ...
  std::string signature;  // human-readable parameter list
};

struct RobotSpec {
  std::string name;
  std::string embodiment;  // e.g. "single-arm", "dual-arm-wheeled"
  std::vector<ToolSpec> tools;
  std::string location;

  bool has_tool(const std::string& tool) const;
  void validate() const;  // tool names unique per robot
};

enum class ThingKind : std::uint8_t { Item, Receptacle, Device };

/// One physical entity. Items sit either directly at a location (surface) or
/// inside a receptacle; receptacles and devices are fixtures at a location.
struct Thing {
  std::string id;
  std::string name;  // category word, e.g. "mug"
  ThingKind kind = ThingKind::Item;
  std::string location;
  std::string inside;  // receptacle id; empty = on the location surface
  bool openable = false;
  bool open = false;
  bool powered = false;
};

struct RobotState {
  std::string location;
  std::vector<std::string> holding;  // thing ids
  std::string embodiment;            // capacity derives from this
};

/// Goal predicate: a conjunction of atomic conditions.
struct Condition {
  enum class Kind { ItemAtLocation, ItemInReceptacle, DevicePowered };
  Kind kind = Kind::ItemAtLocation;
  std::string a;  // thing id
  std::string b;  // location or receptacle id
};

struct Goal {
  std::string schema_id;
  std::string text;
  std::vector<Condition> conditions;
};

/// Mutable environment state plus the agents' knowledge of it. Containment
/// invariant: a thing is in exactly one place (a location surface or one
/// receptacle at that location); a closed receptacle hides its contents from
/// observations until it is opened or searched.
struct World {
  std::string scenario_id;
  std::vector<std::string> locations;
  std::map<std::string, Thing> things;
  std::map<std::string, RobotState> robots;
  std::set<std::string> discovered;  // thing ids known to the agents
  std::set<std::string> searched;    // searched location/receptacle ids
  std::string user_location;         // where deliveries go

  const Thing& thing(const std::string& id) const;
  Thing& thing_mut(const std::string& id);
  bool has_location(const std::string& id) const;
  bool goal_satisfied(const Goal& goal) const;

  /// A thing is visible when it is a fixture, sits on a surface, or sits in
  /// an open receptacle.
  bool visible(const Thing& thing) const;

  /// Verifies the containment invariants; throws on violation.
  void check_invariants() const;
};

int arm_capacity(const RobotSpec& robot);
int arm_capacity_of(const std::string& embodiment);

}  // namespace ekit::temporal

#endif  // EKIT_TEMPORAL_WORLD_HPP
