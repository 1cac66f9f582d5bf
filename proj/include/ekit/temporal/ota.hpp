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

#ifndef EKIT_TEMPORAL_OTA_HPP
#define EKIT_TEMPORAL_OTA_HPP

#include "ekit/scene/payload.hpp"
#include "ekit/scene/shard.hpp"
#include "ekit/temporal/scenario.hpp"
#include "ekit/temporal/simulator.hpp"

namespace ekit::temporal {

inline constexpr const char* kThoughtGenerator = "template:v1";

struct OTAResult {
  Episode episode;
  std::vector<Action> script;  // the key action sequence that was replayed
};

/// Builds the key action sequence from the goal and the containment layout
/// (open before pick, search before first contact with anything hidden),
/// simulates it with failure injection, and fills thought slots from the
/// rationale templates. The same script replayed at failure rate 0 succeeds.
OTAResult synthesize_ota(const ScenarioInstance& instance, std::uint64_t seed,
                         double failure_rate, int max_steps = 60);

/// Next-action multiple-choice item from an episode step. History frames are
/// the frames of all earlier steps; distractors are vocabulary-grounded
/// actions that are not the recorded next action. Returns nullopt when no
/// distractor pool exists.
std::optional<scene::QAItem> gen_egoplan_item(const World& initial_world, const Episode& episode,
                                              std::size_t step_index, std::uint64_t seed,
                                              int n_distractors = 3);

/// Conversation-style next-action item mirroring the closed-loop prompt
/// shape (task, previous action, feedback, current view).
std::optional<scene::QAItem> gen_closeloop_item(const World& initial_world,
                                                const Episode& episode, std::size_t step_index);

scene::QAItem make_workflow_item(const ScenarioInstance& instance, const WorkflowGraph& workflow);
std::vector<scene::QAItem> make_toolplan_items(const ScenarioInstance& instance,
                                               const WorkflowGraph& workflow,
                                               const std::vector<ToolPlan>& plans);

scene::ShardManifest write_episode_shard(const std::vector<Episode>& episodes,
                                         const std::string& path);
std::vector<Episode> read_episode_shard(const std::string& path);

struct TemporalForgeOptions {
  std::uint64_t seed = 0;
  int scenarios_per_template = 2;
  double failure_rate = 0.2;
  int max_steps = 60;
  int egoplan_per_episode = 3;
  std::set<std::string> families;  // empty = all of workflow/toolplan/closeloop/egoplan
};

struct TemporalForgeOutput {
  std::vector<scene::QAItem> items;
  std::vector<Episode> episodes;
  std::size_t replay_successes = 0;  // p=0 replays of synthesized scripts
  std::size_t replay_total = 0;
};

TemporalForgeOutput forge_temporal(const std::vector<ScenarioTemplate>& templates,
                                   const TemporalForgeOptions& options);

}  // namespace ekit::temporal

#endif  // EKIT_TEMPORAL_OTA_HPP
