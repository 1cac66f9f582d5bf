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

#ifndef EKIT_TEMPORAL_SIMULATOR_HPP
#define EKIT_TEMPORAL_SIMULATOR_HPP

#include <functional>

#include "ekit/temporal/workflow.hpp"
#include "ekit/temporal/world.hpp"

namespace ekit::temporal {

enum class ActionVerb : std::uint8_t { Navigate, Open, Close, Pick, Place, Toggle, Search, Done };

const std::string& verb_name(ActionVerb verb);
std::optional<ActionVerb> verb_from_name(const std::string& name);

struct Action {
  std::string robot;
  ActionVerb verb = ActionVerb::Done;
  std::string arg;   // location or thing id
  std::string arg2;  // place destination
  friend bool operator==(const Action&, const Action&) = default;
};

struct Feedback {
  bool success = true;
  std::string reason;    // failure explanation
  bool injected = false; // true when the failure came from the random fault model
};

struct OTAStep {
  int index = 0;
  std::string robot;
  std::string observation;
  std::string frame_ref;
  std::optional<std::string> thought;
  std::string thought_generator;  // e.g. "template:v1"
  Action action;
  Feedback feedback;
};

struct Episode {
  std::string id;
  std::string scenario;
  std::uint64_t seed = 0;
  double failure_rate = 0.0;
  Goal goal;
  std::vector<OTAStep> steps;
  enum class Outcome : std::uint8_t { Success, Failure, StepLimit };
  Outcome outcome = Outcome::Failure;

  std::size_t injected_failures() const;
  std::size_t eligible_actions() const;

  nlohmann::ordered_json to_json() const;
  static Episode from_json(const nlohmann::ordered_json& j);
};

const std::string& outcome_name(Episode::Outcome outcome);

struct PolicyContext {
  int step_index = 0;
  std::map<std::string, std::string> observations;  // per-robot textual summaries
  const Action* last_action = nullptr;
  const Feedback* last_feedback = nullptr;
};

/// Returns the next action, or nullopt to stop acting (the episode then ends
/// with the goal check deciding the outcome).
using Policy = std::function<std::optional<Action>(const PolicyContext&)>;

struct SimOptions {
  double failure_rate = 0.0;
  int max_steps = 60;
  std::uint64_t seed = 0;
  std::string episode_id = "episode";
};

/// Runs the state machine. A precondition violation becomes in-episode
/// failure feedback (state unchanged); a valid non-Done action additionally
/// fails with probability failure_rate, reason drawn from the verb's failure
/// table, state unchanged. The episode ends on goal satisfaction, Done, a
/// stopped policy, or the step limit. Success iff the goal holds at the end.
Episode simulate_episode(World world, const std::vector<RobotSpec>& roster, const Goal& goal,
                         const Policy& policy, const SimOptions& options);

/// Replays a fixed action list, repeating an action until it succeeds.
Policy scripted_policy(std::vector<Action> script);

/// Flattens tool plans into executable actions in workflow topological order.
std::vector<Action> plan_actions(const WorkflowGraph& workflow,
                                 const std::vector<ToolPlan>& plans);

/// Replays tool plans through the simulator, asserting each pair's expected
/// observation when failure_rate is zero.
Episode replay_tool_plans(const World& world, const std::vector<RobotSpec>& roster,
                          const Goal& goal, const WorkflowGraph& workflow,
                          const std::vector<ToolPlan>& plans, const SimOptions& options);

/// Deterministic state transition: checks the action's precondition against
/// the world; on success applies the effects and returns true, otherwise
/// returns false with the reason. No randomness, no logging.
bool apply_action(World& world, const Action& action, std::string* reason = nullptr);

std::string render_observation(const World& world, const std::string& robot);
std::string render_action_text(const World& world, const Action& action);

/// All actions a robot could utter in this world (vocabulary-grounded), used
/// for distractor pools and for parsing model-emitted action text.
std::vector<Action> grounded_actions(const World& world, const std::string& robot);
std::optional<Action> parse_action_text(const World& world, const std::string& robot,
                                        const std::string& text);

}  // namespace ekit::temporal

#endif  // EKIT_TEMPORAL_SIMULATOR_HPP
