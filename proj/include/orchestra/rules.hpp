// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License

#pragma once

#include <cstdint>
#include <optional>

#include "orchestra/state.hpp"
#include "orchestra/trigger.hpp"

namespace orchestra {

// Thresholds the rule engine monitors. Firing semantics:
//   repeated_action_limit  — fires when a run of identical actions EXCEEDS it
//                            (limit 3 fires at the 4th repetition);
//   long_execution_limit   — fires when subtask actions EXCEED it (16th at 15);
//   quality_check_every    — fires when steps since the last check REACH it
//                            (>=, so a missed check cannot silence the rule);
//   max_state_switches     — fires when switches REACH it;
//   max_plan_attempts      — fires when attempts EXCEED it (11th at 10);
//   max_runtime_seconds    — fires when elapsed logical time EXCEEDS it.
struct RuleConfig {
  std::uint64_t quality_check_every = 5;
  std::uint64_t repeated_action_limit = 3;
  std::uint64_t long_execution_limit = 15;
  std::uint64_t max_state_switches = 100;
  std::uint64_t max_plan_attempts = 10;
  double max_runtime_seconds = 1800.0;
  // Optional per-task switch ceiling below the global bound; hitting it emits
  // rule_state_switch_count_exceeded instead of the global trigger.
  std::optional<std::uint64_t> task_state_switch_limit;

  bool valid() const {
    return quality_check_every >= 1 && repeated_action_limit >= 1 &&
           long_execution_limit >= 1 && max_state_switches >= 1 && max_plan_attempts >= 1 &&
           max_runtime_seconds > 0 &&
           (!task_state_switch_limit || *task_state_switch_limit >= 1);
  }
};

// Step-level monitors, priority: repeated actions, long execution, periodic.
std::optional<TriggerCode> check_step_rules(const Counters& counters, const RuleConfig& config);

// Task-level monitors, priority: completion, runtime, switch bounds, plan bound.
std::optional<TriggerCode> check_task_rules(const GlobalState& state, double now,
                                            const RuleConfig& config);

}  // namespace orchestra
