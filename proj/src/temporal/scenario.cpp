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

#include "ekit/temporal/scenario.hpp"

#include <algorithm>
#include <set>

namespace ekit::temporal {

const std::string& environment_name(Environment environment) {
  static const std::string names[] = {"household", "supermarket", "restaurant"};
  return names[static_cast<int>(environment)];
}

std::optional<Environment> environment_from_name(const std::string& name) {
  for (const auto env : {Environment::Household, Environment::Supermarket, Environment::Restaurant}) {
    if (environment_name(env) == name) return env;
  }
  return std::nullopt;
}

void ScenarioTemplate::validate() const {
  if (locations.empty()) fail("template " + id + ": no locations");
  if (std::find(locations.begin(), locations.end(), user_location) == locations.end()) {
    fail("template " + id + ": user_location not in locations");
  }
  std::set<std::string> fixture_ids;
  for (const auto& fixture : fixtures) {
    if (!fixture_ids.insert(fixture.id).second) {
      fail("template " + id + ": duplicate fixture " + fixture.id);
    }
    if (std::find(locations.begin(), locations.end(), fixture.location) == locations.end()) {
      fail("template " + id + ": fixture " + fixture.id + " at unknown location");
    }
    if (fixture.kind == ThingKind::Item) fail("template " + id + ": fixtures cannot be items");
  }
  // affiliation targets must exist and containment must stay acyclic: items
  // affiliate to fixtures or locations only, so one level deep by design
  for (const auto& [item, target] : affiliation) {
    const bool is_fixture = fixture_ids.count(target) > 0;
    const bool is_location = std::find(locations.begin(), locations.end(), target) != locations.end();
    if (!is_fixture && !is_location) {
      fail("template " + id + ": item " + item + " affiliated to unknown target " + target);
    }
  }
  for (const auto& robot : roster) {
    robot.validate();
    if (std::find(locations.begin(), locations.end(), robot.location) == locations.end()) {
      fail("template " + id + ": robot " + robot.name + " at unknown location");
    }
  }
  std::set<std::string> union_tools;
  for (const auto& robot : roster) {
    for (const auto& tool : robot.tools) union_tools.insert(tool.name);
  }
  for (const auto& goal : goals) {
    for (const auto& tool : goal.required_tools) {
      if (!union_tools.count(tool)) {
        fail("template " + id + ": goal " + goal.id + " needs tool '" + tool +
             "' that no robot in the roster provides");
      }
    }
  }
  if (item_vocabulary.empty()) fail("template " + id + ": empty item vocabulary");
}

std::size_t ScenarioTemplate::full_expansion_count() const {
  const std::size_t n = item_vocabulary.size();
  std::size_t openable = 0, devices = 0;
  for (const auto& fixture : fixtures) {
    if (fixture.kind == ThingKind::Receptacle && fixture.openable) ++openable;
    if (fixture.kind == ThingKind::Device) ++devices;
  }
  std::size_t total = 0;
  for (const auto& goal : goals) {
    switch (goal.slots) {
      case GoalSchema::SlotKind::Item: total += n; break;
      case GoalSchema::SlotKind::ItemPair: total += n * (n - 1) / 2; break;
      case GoalSchema::SlotKind::ItemReceptacle: total += n * openable; break;
      case GoalSchema::SlotKind::ItemLocation: total += n * locations.size(); break;
      case GoalSchema::SlotKind::Device: total += devices; break;
    }
  }
  return total;
}

namespace {

std::vector<ToolSpec> tool_set(const std::vector<std::string>& names) {
  std::vector<ToolSpec> tools;
  static const std::map<std::string, std::string> signatures = {
      {"navigate", "(location)"}, {"pick", "(object)"},      {"place", "(object, target)"},
      {"open", "(receptacle)"},   {"close", "(receptacle)"}, {"toggle", "(device)"},
      {"search", "(target)"},     {"report", "()"},
  };
  for (const auto& name : names) tools.push_back({name, signatures.at(name)});
  return tools;
}

const std::vector<std::string> kFullTools = {"navigate", "pick", "place", "open",
                                             "close",    "toggle", "search", "report"};
const std::vector<std::string> kNoToggleTools = {"navigate", "pick", "place", "open",
                                                 "close",    "search", "report"};

GoalSchema fetch_one() {
  return {"fetch_one", "Bring me the {a}.", GoalSchema::SlotKind::Item,
          {"navigate", "pick", "place", "open", "search"}};
}
GoalSchema fetch_pair() {
  return {"fetch_pair", "Give me the {a} and the {b}.", GoalSchema::SlotKind::ItemPair,
          {"navigate", "pick", "place", "open", "search"}};
}
GoalSchema store_item() {
  return {"store_item", "Put the {a} into the {b}.", GoalSchema::SlotKind::ItemReceptacle,
          {"navigate", "pick", "place", "open", "search"}};
}
GoalSchema deliver_to() {
  return {"deliver_to", "Take the {a} to the {b}.", GoalSchema::SlotKind::ItemLocation,
          {"navigate", "pick", "place", "open", "search"}};
}
GoalSchema activate() {
  return {"activate", "Turn on the {a}.", GoalSchema::SlotKind::Device, {"navigate", "toggle"}};
}

struct TemplateDraft {
  std::string id;
  Environment env;
  std::vector<std::string> locations;  // first entry is the user/service point
  std::vector<FixtureSpec> fixtures;
  std::vector<std::pair<std::string, std::string>> items;  // (name, affiliation target)
  std::vector<std::pair<std::string, std::string>> robots;  // (name, location), alternating tools
};

ScenarioTemplate finish(const TemplateDraft& draft, bool with_device_goal) {
  ScenarioTemplate tmpl;
  tmpl.id = draft.id;
  tmpl.environment = draft.env;
  tmpl.locations = draft.locations;
  tmpl.user_location = draft.locations.front();
  tmpl.fixtures = draft.fixtures;
  for (const auto& [name, target] : draft.items) {
    tmpl.item_vocabulary.push_back(name);
    tmpl.affiliation[name] = target;
  }
  bool first = true;
  for (const auto& [name, location] : draft.robots) {
    RobotSpec robot;
    robot.name = name;
    robot.embodiment = first ? "dual-arm-wheeled" : "single-arm-wheeled";
    robot.tools = tool_set(first ? kFullTools : kNoToggleTools);
    robot.location = location;
    tmpl.roster.push_back(robot);
    first = false;
  }
  tmpl.goals = {fetch_one(), fetch_pair(), store_item(), deliver_to()};
  if (with_device_goal) tmpl.goals.push_back(activate());
  tmpl.validate();
  return tmpl;
}

std::vector<ScenarioTemplate> build_library() {
  std::vector<ScenarioTemplate> library;

  // household
  library.push_back(finish(
      {"household_kitchen", Environment::Household,
       {"user_area", "kitchen_counter", "dining_table", "cabinet_wall", "pantry_corner"},
       {{"cabinet", "cabinet", ThingKind::Receptacle, "cabinet_wall", true, false},
        {"fridge", "fridge", ThingKind::Receptacle, "kitchen_counter", true, false},
        {"fruit_bowl", "fruit bowl", ThingKind::Receptacle, "dining_table", false, true},
        {"coffee_machine", "coffee machine", ThingKind::Device, "kitchen_counter"}},
       {{"mug", "cabinet"},       {"plate", "cabinet"},    {"knife", "cabinet"},
        {"apple", "fridge"},      {"orange", "fridge"},    {"juice", "fridge"},
        {"butter", "fridge"},     {"bread", "pantry_corner"}, {"cereal", "pantry_corner"},
        {"banana", "fruit_bowl"}, {"napkin", "dining_table"}, {"spoon", "cabinet"},
        {"jam", "pantry_corner"}, {"bowl", "cabinet"}},
       {{"argo", "kitchen_counter"}, {"breeze", "dining_table"}}},
      true));

  library.push_back(finish(
      {"household_living_room", Environment::Household,
       {"user_area", "sofa_corner", "shelf_wall", "media_bench", "window_side"},
       {{"toy_box", "toy box", ThingKind::Receptacle, "window_side", true, false},
        {"drawer", "drawer", ThingKind::Receptacle, "media_bench", true, false},
        {"floor_lamp", "floor lamp", ThingKind::Device, "sofa_corner"}},
       {{"book", "shelf_wall"},    {"remote", "drawer"},     {"magazine", "sofa_corner"},
        {"toy_car", "toy_box"},    {"puzzle", "toy_box"},    {"blanket", "sofa_corner"},
        {"pillow", "sofa_corner"}, {"headphones", "drawer"}, {"candle", "shelf_wall"},
        {"plant_mister", "window_side"}, {"coaster", "media_bench"}, {"photo_frame", "shelf_wall"},
        {"charger", "drawer"},     {"notebook", "shelf_wall"}},
       {{"dusty", "shelf_wall"}, {"ember", "sofa_corner"}}},
      true));

  library.push_back(finish(
      {"household_bedroom", Environment::Household,
       {"user_area", "wardrobe_wall", "nightstand_side", "desk_corner", "bed_center"},
       {{"wardrobe", "wardrobe", ThingKind::Receptacle, "wardrobe_wall", true, false},
        {"nightstand", "nightstand drawer", ThingKind::Receptacle, "nightstand_side", true, false},
        {"desk_lamp", "desk lamp", ThingKind::Device, "desk_corner"}},
       {{"shirt", "wardrobe"},   {"trousers", "wardrobe"}, {"socks", "wardrobe"},
        {"watch", "nightstand"}, {"glasses", "nightstand"}, {"phone", "nightstand"},
        {"scarf", "wardrobe"},   {"belt", "wardrobe"},     {"laptop", "desk_corner"},
        {"pen", "desk_corner"},  {"diary", "nightstand"},  {"towel", "bed_center"},
        {"hat", "wardrobe"},     {"comb", "nightstand"}},
       {{"copper", "desk_corner"}, {"fern", "wardrobe_wall"}}},
      true));

  // supermarket
  library.push_back(finish(
      {"supermarket_grocery", Environment::Supermarket,
       {"customer_desk", "aisle_one", "aisle_two", "storage_room", "checkout_lane"},
       {{"storage_crate", "storage crate", ThingKind::Receptacle, "storage_room", true, false},
        {"cold_case", "cold case", ThingKind::Receptacle, "aisle_two", true, false},
        {"display_rack", "display rack", ThingKind::Receptacle, "aisle_one", false, true}},
       {{"cereal_box", "storage_crate"}, {"pasta", "storage_crate"}, {"rice", "storage_crate"},
        {"milk", "cold_case"},     {"yogurt", "cold_case"},  {"cheese", "cold_case"},
        {"juice_bottle", "cold_case"}, {"beans", "aisle_one"}, {"sauce", "aisle_one"},
        {"crackers", "display_rack"},  {"honey", "aisle_one"}, {"tea", "storage_crate"},
        {"coffee_pack", "storage_crate"}, {"soap", "aisle_two"}},
       {{"stocker", "storage_room"}, {"runner", "aisle_one"}}},
      false));

  library.push_back(finish(
      {"supermarket_deli", Environment::Supermarket,
       {"service_window", "deli_counter", "prep_area", "back_fridge_wall", "tasting_table"},
       {{"deli_fridge", "deli fridge", ThingKind::Receptacle, "back_fridge_wall", true, false},
        {"warming_tray", "warming tray", ThingKind::Receptacle, "deli_counter", false, true},
        {"label_printer", "label printer", ThingKind::Device, "prep_area"}},
       {{"ham", "deli_fridge"},    {"salami", "deli_fridge"}, {"brie", "deli_fridge"},
        {"olives", "deli_fridge"}, {"baguette", "prep_area"}, {"quiche", "warming_tray"},
        {"salad_box", "deli_fridge"}, {"hummus", "deli_fridge"}, {"pickles", "tasting_table"},
        {"sausage_roll", "warming_tray"}, {"pate", "deli_fridge"}, {"coleslaw", "deli_fridge"},
        {"mustard", "tasting_table"}, {"focaccia", "prep_area"}},
       {{"slicer", "deli_counter"}, {"carrier", "service_window"}}},
      true));

  library.push_back(finish(
      {"supermarket_checkout", Environment::Supermarket,
       {"customer_lane", "bagging_area", "basket_drop", "cart_park", "returns_shelf"},
       {{"tote_bag", "tote bag", ThingKind::Receptacle, "bagging_area", true, false},
        {"returns_bin", "returns bin", ThingKind::Receptacle, "returns_shelf", true, false},
        {"scale", "scale", ThingKind::Device, "bagging_area"}},
       {{"eggs", "basket_drop"},   {"apples_bag", "basket_drop"}, {"bread_loaf", "basket_drop"},
        {"detergent", "cart_park"}, {"paper_towels", "cart_park"}, {"batteries", "returns_bin"},
        {"lightbulb", "returns_bin"}, {"tissues", "basket_drop"}, {"shampoo", "cart_park"},
        {"toothpaste", "basket_drop"}, {"sponges", "cart_park"},  {"candles_pack", "returns_bin"},
        {"gift_card", "basket_drop"},  {"receipt_roll", "bagging_area"}},
       {{"bagger", "bagging_area"}, {"porter", "cart_park"}}},
      true));

  // restaurant
  library.push_back(finish(
      {"restaurant_grill", Environment::Restaurant,
       {"service_counter", "grill_station", "pantry_nook", "table_one", "table_two"},
       {{"pantry_cabinet", "pantry cabinet", ThingKind::Receptacle, "pantry_nook", true, false},
        {"prep_fridge", "prep fridge", ThingKind::Receptacle, "grill_station", true, false},
        {"grill", "grill", ThingKind::Device, "grill_station"}},
       {{"burger", "prep_fridge"},  {"patty", "prep_fridge"},  {"bun", "pantry_cabinet"},
        {"lettuce", "prep_fridge"}, {"tomato", "prep_fridge"}, {"fries", "pantry_cabinet"},
        {"soda", "pantry_cabinet"}, {"ketchup", "table_one"},  {"mayo", "pantry_cabinet"},
        {"pickle_jar", "pantry_cabinet"}, {"napkin_stack", "service_counter"},
        {"tray", "service_counter"}, {"onion", "prep_fridge"}, {"cheese_slice", "prep_fridge"}},
       {{"flip", "grill_station"}, {"dash", "service_counter"}}},
      true));

  library.push_back(finish(
      {"restaurant_coffee", Environment::Restaurant,
       {"service_counter", "espresso_bar", "cup_wall", "pastry_case_side", "window_table"},
       {{"cup_shelf", "cup shelf", ThingKind::Receptacle, "cup_wall", true, false},
        {"pastry_case", "pastry case", ThingKind::Receptacle, "pastry_case_side", true, false},
        {"espresso_machine", "espresso machine", ThingKind::Device, "espresso_bar"}},
       {{"espresso_cup", "cup_shelf"}, {"latte_glass", "cup_shelf"}, {"saucer", "cup_shelf"},
        {"croissant", "pastry_case"},  {"muffin", "pastry_case"},   {"scone", "pastry_case"},
        {"biscotti", "pastry_case"},   {"teapot", "cup_shelf"},     {"sugar_jar", "espresso_bar"},
        {"milk_jug", "espresso_bar"},  {"stirrer_box", "service_counter"},
        {"honey_pot", "window_table"}, {"mocha_mug", "cup_shelf"},  {"tumbler", "cup_shelf"}},
       {{"barista", "espresso_bar"}, {"server", "service_counter"}}},
      true));

  library.push_back(finish(
      {"restaurant_cleanup", Environment::Restaurant,
       {"bus_station", "table_three", "table_four", "sink_area", "linen_shelf"},
       {{"dish_bin", "dish bin", ThingKind::Receptacle, "bus_station", true, false},
        {"linen_hamper", "linen hamper", ThingKind::Receptacle, "linen_shelf", true, false},
        {"dishwasher", "dishwasher", ThingKind::Device, "sink_area"}},
       {{"dirty_plate", "table_three"}, {"wine_glass", "table_three"}, {"fork", "table_three"},
        {"knife_used", "table_four"},   {"spoon_used", "table_four"},  {"bowl_used", "table_four"},
        {"napkin_used", "table_three"}, {"tablecloth", "linen_hamper"}, {"placemat", "table_four"},
        {"candle_holder", "table_three"}, {"salt_shaker", "table_four"},
        {"pepper_mill", "table_three"},   {"bread_basket", "table_four"},
        {"water_jug", "table_three"}},
       {{"busser", "bus_station"}, {"scrub", "sink_area"}}},
      true));

  return library;
}

}  // namespace

const std::vector<ScenarioTemplate>& builtin_templates() {
  static const std::vector<ScenarioTemplate> library = build_library();
  return library;
}

const ScenarioTemplate& builtin_template(const std::string& id) {
  for (const auto& tmpl : builtin_templates()) {
    if (tmpl.id == id) return tmpl;
  }
  fail("unknown scenario template: " + id);
}

std::size_t library_full_expansion_count() {
  std::size_t total = 0;
  for (const auto& tmpl : builtin_templates()) total += tmpl.full_expansion_count();
  return total;
}

ScenarioTemplate template_from_json(const nlohmann::ordered_json& j, const std::string& context) {
  ScenarioTemplate tmpl;
  tmpl.id = j.at("id").get<std::string>();
  const auto env = environment_from_name(j.at("environment").get<std::string>());
  if (!env) fail(context + ": unknown environment");
  tmpl.environment = *env;
  tmpl.locations = j.at("locations").get<std::vector<std::string>>();
  tmpl.user_location = j.at("user_location").get<std::string>();
  for (const auto& fj : j.at("fixtures")) {
    FixtureSpec fixture;
    fixture.id = fj.at("id").get<std::string>();
    fixture.name = fj.at("name").get<std::string>();
    const auto kind = fj.at("kind").get<std::string>();
    if (kind == "receptacle") fixture.kind = ThingKind::Receptacle;
    else if (kind == "device") fixture.kind = ThingKind::Device;
    else fail(context + ": fixture kind must be receptacle or device");
    fixture.location = fj.at("location").get<std::string>();
    fixture.openable = fj.value("openable", false);
    fixture.starts_open = fj.value("starts_open", false);
    tmpl.fixtures.push_back(std::move(fixture));
  }
  tmpl.item_vocabulary = j.at("items").get<std::vector<std::string>>();
  for (const auto& [key, value] : j.at("affiliation").items()) {
    tmpl.affiliation[key] = value.get<std::string>();
  }
  for (const auto& rj : j.at("roster")) {
    RobotSpec robot;
    robot.name = rj.at("name").get<std::string>();
    robot.embodiment = rj.at("embodiment").get<std::string>();
    robot.location = rj.at("location").get<std::string>();
    for (const auto& tj : rj.at("tools")) {
      robot.tools.push_back({tj.at("name").get<std::string>(), tj.value("signature", "")});
    }
    tmpl.roster.push_back(std::move(robot));
  }
  for (const auto& gj : j.at("goals")) {
    GoalSchema goal;
    goal.id = gj.at("id").get<std::string>();
    goal.text_template = gj.at("text").get<std::string>();
    const auto slots = gj.at("slots").get<std::string>();
    if (slots == "item") goal.slots = GoalSchema::SlotKind::Item;
    else if (slots == "item_pair") goal.slots = GoalSchema::SlotKind::ItemPair;
    else if (slots == "item_receptacle") goal.slots = GoalSchema::SlotKind::ItemReceptacle;
    else if (slots == "item_location") goal.slots = GoalSchema::SlotKind::ItemLocation;
    else if (slots == "device") goal.slots = GoalSchema::SlotKind::Device;
    else fail(context + ": unknown slot kind " + slots);
    goal.required_tools = gj.at("required_tools").get<std::vector<std::string>>();
    tmpl.goals.push_back(std::move(goal));
  }
  tmpl.items_per_instance = j.value("items_per_instance", std::size_t{6});
  try {
    tmpl.validate();
  } catch (const Error& e) {
    fail(context + ": " + e.what());
  }
  return tmpl;
}

nlohmann::ordered_json template_to_json(const ScenarioTemplate& tmpl) {
  nlohmann::ordered_json j;
  j["id"] = tmpl.id;
  j["environment"] = environment_name(tmpl.environment);
  j["locations"] = tmpl.locations;
  j["user_location"] = tmpl.user_location;
  j["fixtures"] = nlohmann::ordered_json::array();
  for (const auto& fixture : tmpl.fixtures) {
    j["fixtures"].push_back({{"id", fixture.id},
                             {"name", fixture.name},
                             {"kind", fixture.kind == ThingKind::Device ? "device" : "receptacle"},
                             {"location", fixture.location},
                             {"openable", fixture.openable},
                             {"starts_open", fixture.starts_open}});
  }
  j["items"] = tmpl.item_vocabulary;
  j["affiliation"] = nlohmann::ordered_json::object();
  for (const auto& [item, target] : tmpl.affiliation) j["affiliation"][item] = target;
  j["roster"] = nlohmann::ordered_json::array();
  for (const auto& robot : tmpl.roster) {
    nlohmann::ordered_json rj;
    rj["name"] = robot.name;
    rj["embodiment"] = robot.embodiment;
    rj["location"] = robot.location;
    rj["tools"] = nlohmann::ordered_json::array();
    for (const auto& tool : robot.tools) {
      rj["tools"].push_back({{"name", tool.name}, {"signature", tool.signature}});
    }
    j["roster"].push_back(std::move(rj));
  }
  j["goals"] = nlohmann::ordered_json::array();
  for (const auto& goal : tmpl.goals) {
    std::string slots;
    switch (goal.slots) {
      case GoalSchema::SlotKind::Item: slots = "item"; break;
      case GoalSchema::SlotKind::ItemPair: slots = "item_pair"; break;
      case GoalSchema::SlotKind::ItemReceptacle: slots = "item_receptacle"; break;
      case GoalSchema::SlotKind::ItemLocation: slots = "item_location"; break;
      case GoalSchema::SlotKind::Device: slots = "device"; break;
    }
    j["goals"].push_back({{"id", goal.id},
                          {"text", goal.text_template},
                          {"slots", slots},
                          {"required_tools", goal.required_tools}});
  }
  j["items_per_instance"] = tmpl.items_per_instance;
  return j;
}

ScenarioTemplate load_scenario_template(const std::string& path) {
  auto j = nlohmann::ordered_json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) fail(path + ": invalid template JSON");
  return template_from_json(j, path);
}

std::string fill_goal_text(const std::string& text_template, const std::string& a,
                           const std::string& b);

ScenarioInstance instantiate_scenario(const ScenarioTemplate& tmpl, std::uint64_t seed) {
  tmpl.validate();
  Rng rng(derive_seed(seed, {tmpl.id, "instantiate"}));

  ScenarioInstance instance;
  instance.id = tmpl.id + "_" + std::to_string(seed);
  World& world = instance.world;
  world.scenario_id = instance.id;
  world.locations = tmpl.locations;
  world.user_location = tmpl.user_location;

  for (const auto& fixture : tmpl.fixtures) {
    Thing thing;
    thing.id = fixture.id;
    thing.name = fixture.name;
    thing.kind = fixture.kind;
    thing.location = fixture.location;
    thing.openable = fixture.openable;
    thing.open = fixture.kind == ThingKind::Receptacle && (!fixture.openable || fixture.starts_open);
    world.things[thing.id] = thing;
    world.discovered.insert(thing.id);
  }

  // seeded sample of the item vocabulary, placed per the affiliation map
  const auto count = std::min(tmpl.items_per_instance, tmpl.item_vocabulary.size());
  const auto indices = rng.sample_without_replacement(tmpl.item_vocabulary.size(), count);
  for (const auto index : indices) {
    const auto& name = tmpl.item_vocabulary[index];
    Thing thing;
    thing.id = name + "_1";
    thing.name = name;
    thing.kind = ThingKind::Item;
    const auto& target = tmpl.affiliation.at(name);
    if (world.things.count(target)) {
      const auto& container = world.things.at(target);
      thing.location = container.location;
      if (container.kind == ThingKind::Receptacle) thing.inside = target;
    } else {
      thing.location = target;  // surface placement
    }
    world.things[thing.id] = thing;
  }

  instance.roster = tmpl.roster;
  for (const auto& robot : instance.roster) {
    world.robots[robot.name] = {robot.location, {}, robot.embodiment};
  }

  // surface items where a robot starts are known from the outset
  for (const auto& [id, thing] : world.things) {
    if (thing.kind != ThingKind::Item || !thing.inside.empty()) continue;
    for (const auto& [name, robot] : world.robots) {
      if (robot.location == thing.location) world.discovered.insert(id);
    }
  }

  // seeded goal: schema first, then slots from the placed items
  std::vector<std::string> placed_items;
  for (const auto& [id, thing] : world.things) {
    if (thing.kind == ThingKind::Item && thing.location != world.user_location) {
      placed_items.push_back(id);
    }
  }
  std::sort(placed_items.begin(), placed_items.end());
  if (placed_items.empty()) fail("instantiate_scenario: no items placed away from the user");

  const auto& schema = tmpl.goals[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(tmpl.goals.size()) - 1))];
  Goal goal;
  goal.schema_id = schema.id;
  const auto item_name = [&](const std::string& id) { return world.thing(id).name; };
  switch (schema.slots) {
    case GoalSchema::SlotKind::Item: {
      const auto& a = rng.pick(placed_items);
      goal.text = fill_goal_text(schema.text_template, item_name(a), "");
      goal.conditions = {{Condition::Kind::ItemAtLocation, a, world.user_location}};
      break;
    }
    case GoalSchema::SlotKind::ItemPair: {
      if (placed_items.size() < 2) {
        const auto& a = placed_items[0];
        goal.schema_id = "fetch_one";
        goal.text = fill_goal_text("Bring me the {a}.", item_name(a), "");
        goal.conditions = {{Condition::Kind::ItemAtLocation, a, world.user_location}};
        break;
      }
      const auto picks = rng.sample_without_replacement(placed_items.size(), 2);
      const auto& a = placed_items[picks[0]];
      const auto& b = placed_items[picks[1]];
      goal.text = fill_goal_text(schema.text_template, item_name(a), item_name(b));
      goal.conditions = {{Condition::Kind::ItemAtLocation, a, world.user_location},
                         {Condition::Kind::ItemAtLocation, b, world.user_location}};
      break;
    }
    case GoalSchema::SlotKind::ItemReceptacle: {
      std::vector<std::string> receptacles;
      for (const auto& [id, thing] : world.things) {
        if (thing.kind == ThingKind::Receptacle && thing.openable) receptacles.push_back(id);
      }
      std::sort(receptacles.begin(), receptacles.end());
      if (receptacles.empty()) {
        const auto& a = rng.pick(placed_items);
        goal.schema_id = "fetch_one";
        goal.text = fill_goal_text("Bring me the {a}.", item_name(a), "");
        goal.conditions = {{Condition::Kind::ItemAtLocation, a, world.user_location}};
        break;
      }
      const auto& a = rng.pick(placed_items);
      // avoid the trivial goal where the item already sits in the target
      std::vector<std::string> targets;
      for (const auto& r : receptacles) {
        if (world.thing(a).inside != r) targets.push_back(r);
      }
      const auto& b = targets.empty() ? receptacles.front() : rng.pick(targets);
      goal.text = fill_goal_text(schema.text_template, item_name(a), world.thing(b).name);
      goal.conditions = {{Condition::Kind::ItemInReceptacle, a, b}};
      break;
    }
    case GoalSchema::SlotKind::ItemLocation: {
      const auto& a = rng.pick(placed_items);
      std::vector<std::string> targets;
      for (const auto& location : world.locations) {
        if (location != world.thing(a).location) targets.push_back(location);
      }
      const auto& b = rng.pick(targets);
      goal.text = fill_goal_text(schema.text_template, item_name(a), b);
      goal.conditions = {{Condition::Kind::ItemAtLocation, a, b}};
      break;
    }
    case GoalSchema::SlotKind::Device: {
      std::vector<std::string> devices;
      for (const auto& [id, thing] : world.things) {
        if (thing.kind == ThingKind::Device) devices.push_back(id);
      }
      std::sort(devices.begin(), devices.end());
      const auto& a = rng.pick(devices);
      goal.text = fill_goal_text(schema.text_template, world.thing(a).name, "");
      goal.conditions = {{Condition::Kind::DevicePowered, a, ""}};
      break;
    }
  }
  instance.goal = goal;
  world.check_invariants();
  return instance;
}

std::string fill_goal_text(const std::string& text_template, const std::string& a,
                           const std::string& b) {
  std::string out = text_template;
  const auto replace = [&](const std::string& slot, const std::string& value) {
    const auto pos = out.find(slot);
    if (pos != std::string::npos) out.replace(pos, slot.size(), value);
  };
  replace("{a}", a);
  replace("{b}", b);
  return out;
}

scene::SceneGraph world_scene_graph(const World& world, const std::vector<RobotSpec>& roster) {
  scene::SceneGraph g;
  g.scene_id = world.scenario_id;
  g.frames.push_back({"frame_0", "frames/" + world.scenario_id + "/overview.png", 640, 480,
                      std::nullopt, std::nullopt, std::nullopt});
  int slot = 0;
  for (const auto& [id, thing] : world.things) {
    scene::ObjectNode node;
    node.id = id;
    node.category = thing.name;
    // symbolic scene: deterministic placeholder layout, 8 tiles per row
    const double x = 10.0 + 78.0 * (slot % 8);
    const double y = 10.0 + 94.0 * (slot / 8);
    node.box = {x, y, x + 70.0, y + 86.0};
    g.nodes.push_back(std::move(node));
    ++slot;
  }
  if (!roster.empty()) {
    scene::EmbodimentConfig embodiment;
    embodiment.name = world.scenario_id;
    embodiment.type = "scenario";
    for (const auto& [id, thing] : world.things) {
      if (thing.kind == ThingKind::Item) embodiment.objects.push_back(thing.name);
    }
    embodiment.robot = roster.front().name + "-" + roster.front().embodiment;
    g.embodiment = embodiment;
  }
  g.validate();
  return g;
}

}  // namespace ekit::temporal
