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

#ifndef EKIT_TEMPORAL_SCENARIO_HPP
#define EKIT_TEMPORAL_SCENARIO_HPP

#include "ekit/scene/types.hpp"
#include "ekit/temporal/world.hpp"

namespace ekit::temporal {

enum class Environment { Household, Supermarket, Restaurant };

const std::string& environment_name(Environment environment);
std::optional<Environment> environment_from_name(const std::string& name);

/// Skeleton of one fixture: receptacle or device placed at a location.
struct FixtureSpec {
  std::string id;
  std::string name;
  ThingKind kind = ThingKind::Receptacle;
  std::string location;
  bool openable = false;
  bool starts_open = false;
};

/// Goal vocabulary entry. Slot kinds determine how many concrete task types
/// the schema expands to.
struct GoalSchema {
  enum class SlotKind { Item, ItemPair, ItemReceptacle, ItemLocation, Device };
  std::string id;
  std::string text_template;  // slots {a}, {b}
  SlotKind slots = SlotKind::Item;
  std::vector<std::string> required_tools;
};

struct ScenarioTemplate {
  std::string id;
  Environment environment = Environment::Household;
  std::vector<std::string> locations;
  std::string user_location;
  std::vector<FixtureSpec> fixtures;
  std::vector<std::string> item_vocabulary;
  /// item name -> fixture id (functional container) or location id (surface);
  /// drives both initial placement and search-before-contact reasoning.
  std::map<std::string, std::string> affiliation;
  std::vector<RobotSpec> roster;
  std::vector<GoalSchema> goals;
  std::size_t items_per_instance = 6;

  /// Template invariants: affiliation acyclic over containment, every goal's
  /// required tools exist in the roster union, referenced ids exist.
  void validate() const;

  /// Distinct (goal schema, slot assignment) combinations at full expansion.
  std::size_t full_expansion_count() const;
};

/// Built-in scenario library: at least three templates per environment, with
/// a combined full expansion comfortably above 1,659 task types.
const std::vector<ScenarioTemplate>& builtin_templates();
const ScenarioTemplate& builtin_template(const std::string& id);
std::size_t library_full_expansion_count();

ScenarioTemplate template_from_json(const nlohmann::ordered_json& j, const std::string& context);
nlohmann::ordered_json template_to_json(const ScenarioTemplate& tmpl);
ScenarioTemplate load_scenario_template(const std::string& path);

struct ScenarioInstance {
  std::string id;
  World world;
  std::vector<RobotSpec> roster;
  Goal goal;
};

/// Concrete world with seeded item placement and a seeded goal whose slots
/// are filled from the placed items. Deterministic per seed.
ScenarioInstance instantiate_scenario(const ScenarioTemplate& tmpl, std::uint64_t seed);

/// Structured-JSON scene graph of the instantiated world, embodiment block
/// included; the multirobot prompt embeds this.
scene::SceneGraph world_scene_graph(const World& world, const std::vector<RobotSpec>& roster);

}  // namespace ekit::temporal

#endif  // EKIT_TEMPORAL_SCENARIO_HPP
