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

#include <array>
#include <optional>
#include <string_view>

#include "orchestra/types.hpp"

namespace orchestra {

// The closed trigger vocabulary: exactly 40 codes, partitioned into ten
// categories. Every controller transition is driven by one of these codes
// paired with the current situation. Codes serialize as their lowercase
// snake_case identifiers.
enum class TriggerCode {
  // Rule Validation
  rule_quality_check_steps,
  rule_quality_check_repeated_actions,
  rule_replan_long_execution,
  // Task Status Rules
  rule_max_state_switches_reached,
  rule_plan_number_exceeded,
  rule_state_switch_count_exceeded,
  rule_task_completed,
  rule_task_runtime_exceeded,
  // INIT State
  subtask_ready,
  no_subtasks,
  init_error,
  // GET_ACTION State
  no_current_subtask_id,
  subtask_not_found,
  worker_success,
  work_cannot_execute,
  worker_stale_progress,
  worker_supplement,
  worker_generate_action,
  no_worker_decision,
  get_action_error,
  // EXECUTE_ACTION
  execution_error,
  command_completed,
  no_command,
  // QUALITY_CHECK
  all_subtasks_completed,
  quality_check_passed,
  quality_check_failed,
  quality_check_supplement,
  quality_check_execute_action,
  quality_check_error,
  // PLAN State
  subtask_ready_after_plan,
  plan_error,
  // SUPPLEMENT
  supplement_completed,
  supplement_error,
  // FINAL_CHECK
  final_check_error,
  final_check_pending,
  final_check_passed,
  final_check_failed,
  task_impossible,
  // Error Recovery
  unknown_state,
  error_recovery,
};

inline constexpr std::size_t kTriggerCount = 40;

enum class TriggerCategory {
  RuleValidation,
  TaskStatusRules,
  InitState,
  GetActionState,
  ExecuteAction,
  QualityCheck,
  PlanState,
  Supplement,
  FinalCheck,
  ErrorRecovery,
};

inline constexpr std::size_t kCategoryCount = 10;

// One row of the trigger reference table: the code, its category, a short
// human description, and the target situation the controller switches to.
struct TriggerInfo {
  TriggerCode code;
  TriggerCategory category;
  std::string_view name;
  std::string_view description;
  Situation target;
};

// The full reference table in category order; index is not meaningful beyond
// grouping. Exactly kTriggerCount entries.
const std::array<TriggerInfo, kTriggerCount>& trigger_table();

const TriggerInfo& trigger_info(TriggerCode code);

// Category of a code per the reference table. Total over the closed set.
TriggerCategory classify_trigger(TriggerCode code);

std::string_view to_string(TriggerCode code);
std::string_view to_string(TriggerCategory category);
std::optional<TriggerCode> trigger_from_string(std::string_view name);

// Rule Validation, Task Status Rules and Error Recovery codes are global
// monitors: legal from every non-DONE situation. The remaining categories are
// bound to a single home situation.
bool is_global_category(TriggerCategory category);
std::optional<Situation> category_home(TriggerCategory category);

}  // namespace orchestra
