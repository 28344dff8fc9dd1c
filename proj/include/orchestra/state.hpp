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
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "orchestra/action.hpp"
#include "orchestra/types.hpp"

namespace orchestra {

// Quantities the rule engine measures against its thresholds. Pure value type;
// mutation only through record_event.
struct Counters {
  std::uint64_t steps_since_quality_check = 0;
  std::uint64_t repeated_action_run = 0;  // >= 1 whenever last_action_fingerprint is set
  std::uint64_t current_subtask_actions = 0;
  std::uint64_t state_switches = 0;
  std::uint64_t plan_attempts = 0;
  double task_started_at = 0.0;  // logical seconds
  std::optional<std::uint64_t> last_action_fingerprint;

  bool operator==(const Counters&) const = default;
};

// Counter events, applied in arrival order.
namespace ev {
struct ActionExecuted { std::uint64_t fingerprint = 0; };
struct StateSwitched {};
struct PlanAttempted {};
struct QualityCheckRan {};
struct SubtaskChanged {};
}  // namespace ev

using CounterEvent = std::variant<ev::ActionExecuted, ev::StateSwitched, ev::PlanAttempted,
                                  ev::QualityCheckRan, ev::SubtaskChanged>;

// Deterministic and order-sensitive: replaying an event list reproduces
// identical counters.
//
//  - ActionExecuted: bumps steps_since_quality_check and
//    current_subtask_actions; repeated_action_run continues when the
//    fingerprint matches the previous one, else restarts at 1.
//  - StateSwitched: bumps state_switches.
//  - PlanAttempted: bumps plan_attempts.
//  - QualityCheckRan: zeroes steps_since_quality_check and re-arms the
//    repetition counter (the check consumed the stagnation evidence).
//  - SubtaskChanged: zeroes current_subtask_actions and the repetition state.
Counters record_event(Counters counters, const CounterEvent& event);

// The controller's single source of truth: the status tuple plus counters.
struct GlobalState {
  TaskStatus task = TaskStatus::created;
  std::map<std::string, SubtaskStatus> subtasks;
  ExecutionStatus execution = ExecutionStatus::executed;
  Situation situation = Situation::INIT;
  Counters counters;
  std::optional<std::string> current_subtask;  // when set, must exist in subtasks

  bool operator==(const GlobalState&) const = default;
};

}  // namespace orchestra
