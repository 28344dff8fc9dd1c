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

#include "orchestra/rules.hpp"

namespace orchestra {

std::optional<TriggerCode> check_step_rules(const Counters& counters, const RuleConfig& config) {
  if (counters.repeated_action_run > config.repeated_action_limit) {
    return TriggerCode::rule_quality_check_repeated_actions;
  }
  if (counters.current_subtask_actions > config.long_execution_limit) {
    return TriggerCode::rule_replan_long_execution;
  }
  if (counters.steps_since_quality_check >= config.quality_check_every) {
    return TriggerCode::rule_quality_check_steps;
  }
  return std::nullopt;
}

std::optional<TriggerCode> check_task_rules(const GlobalState& state, double now,
                                            const RuleConfig& config) {
  const Counters& c = state.counters;
  if (state.task == TaskStatus::fulfilled) {
    return TriggerCode::rule_task_completed;
  }
  if (now - c.task_started_at > config.max_runtime_seconds) {
    return TriggerCode::rule_task_runtime_exceeded;
  }
  if (c.state_switches >= config.max_state_switches) {
    return TriggerCode::rule_max_state_switches_reached;
  }
  if (config.task_state_switch_limit && c.state_switches >= *config.task_state_switch_limit) {
    return TriggerCode::rule_state_switch_count_exceeded;
  }
  if (c.plan_attempts > config.max_plan_attempts) {
    return TriggerCode::rule_plan_number_exceeded;
  }
  return std::nullopt;
}

}  // namespace orchestra
