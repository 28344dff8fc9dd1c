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

#include "orchestra/trigger.hpp"

#include <stdexcept>

namespace orchestra {

namespace {

using TC = TriggerCode;
using Cat = TriggerCategory;
using S = Situation;

constexpr std::array<TriggerInfo, kTriggerCount> kTable = {{
    // Rule Validation
    {TC::rule_quality_check_steps, Cat::RuleValidation, "rule_quality_check_steps",
     "Periodic quality check every 5 steps", S::QUALITY_CHECK},
    {TC::rule_quality_check_repeated_actions, Cat::RuleValidation,
     "rule_quality_check_repeated_actions",
     "Triggered when identical actions repeated >3 times", S::QUALITY_CHECK},
    {TC::rule_replan_long_execution, Cat::RuleValidation, "rule_replan_long_execution",
     "Single subtask execution exceeds 15 actions", S::PLAN},
    // Task Status Rules
    {TC::rule_max_state_switches_reached, Cat::TaskStatusRules,
     "rule_max_state_switches_reached", "Maximum state switches exceeded", S::DONE},
    {TC::rule_plan_number_exceeded, Cat::TaskStatusRules, "rule_plan_number_exceeded",
     "Planning attempts exceed threshold", S::DONE},
    {TC::rule_state_switch_count_exceeded, Cat::TaskStatusRules,
     "rule_state_switch_count_exceeded", "State switch count limit reached", S::DONE},
    {TC::rule_task_completed, Cat::TaskStatusRules, "rule_task_completed",
     "Task successfully completed", S::DONE},
    {TC::rule_task_runtime_exceeded, Cat::TaskStatusRules, "rule_task_runtime_exceeded",
     "Task runtime limit exceeded", S::DONE},
    // INIT State
    {TC::subtask_ready, Cat::InitState, "subtask_ready",
     "First subtask available for execution", S::GET_ACTION},
    {TC::no_subtasks, Cat::InitState, "no_subtasks",
     "No subtasks available, need planning", S::PLAN},
    {TC::init_error, Cat::InitState, "init_error", "Error during initialization", S::PLAN},
    // GET_ACTION State
    {TC::no_current_subtask_id, Cat::GetActionState, "no_current_subtask_id",
     "Missing current subtask identifier", S::INIT},
    {TC::subtask_not_found, Cat::GetActionState, "subtask_not_found",
     "Referenced subtask not found", S::INIT},
    {TC::worker_success, Cat::GetActionState, "worker_success",
     "Worker completed subtask successfully", S::QUALITY_CHECK},
    {TC::work_cannot_execute, Cat::GetActionState, "work_cannot_execute",
     "Worker cannot execute current subtask", S::PLAN},
    {TC::worker_stale_progress, Cat::GetActionState, "worker_stale_progress",
     "Worker progress stagnated", S::QUALITY_CHECK},
    {TC::worker_supplement, Cat::GetActionState, "worker_supplement",
     "Worker requires additional information", S::SUPPLEMENT},
    {TC::worker_generate_action, Cat::GetActionState, "worker_generate_action",
     "Worker generated new action", S::EXECUTE_ACTION},
    {TC::no_worker_decision, Cat::GetActionState, "no_worker_decision",
     "No decision from worker", S::PLAN},
    {TC::get_action_error, Cat::GetActionState, "get_action_error",
     "Error during action generation", S::PLAN},
    // EXECUTE_ACTION
    {TC::execution_error, Cat::ExecuteAction, "execution_error",
     "Error during action execution", S::GET_ACTION},
    {TC::command_completed, Cat::ExecuteAction, "command_completed",
     "Command executed successfully", S::GET_ACTION},
    {TC::no_command, Cat::ExecuteAction, "no_command",
     "No command available for execution", S::GET_ACTION},
    // QUALITY_CHECK
    {TC::all_subtasks_completed, Cat::QualityCheck, "all_subtasks_completed",
     "All subtasks finished", S::FINAL_CHECK},
    {TC::quality_check_passed, Cat::QualityCheck, "quality_check_passed",
     "Quality assessment successful", S::GET_ACTION},
    {TC::quality_check_failed, Cat::QualityCheck, "quality_check_failed",
     "Quality assessment failed", S::PLAN},
    {TC::quality_check_supplement, Cat::QualityCheck, "quality_check_supplement",
     "Additional info needed", S::SUPPLEMENT},
    {TC::quality_check_execute_action, Cat::QualityCheck, "quality_check_execute_action",
     "Additional execution required", S::EXECUTE_ACTION},
    {TC::quality_check_error, Cat::QualityCheck, "quality_check_error",
     "Error during quality check", S::PLAN},
    // PLAN State
    {TC::subtask_ready_after_plan, Cat::PlanState, "subtask_ready_after_plan",
     "New subtasks ready after planning", S::GET_ACTION},
    {TC::plan_error, Cat::PlanState, "plan_error", "Error during planning phase", S::INIT},
    // SUPPLEMENT
    {TC::supplement_completed, Cat::Supplement, "supplement_completed",
     "Information supplement finished", S::PLAN},
    {TC::supplement_error, Cat::Supplement, "supplement_error",
     "Error during supplementation", S::PLAN},
    // FINAL_CHECK
    {TC::final_check_error, Cat::FinalCheck, "final_check_error",
     "Error during final verification", S::DONE},
    {TC::final_check_pending, Cat::FinalCheck, "final_check_pending",
     "Additional subtasks discovered", S::GET_ACTION},
    {TC::final_check_passed, Cat::FinalCheck, "final_check_passed",
     "Final verification successful", S::DONE},
    {TC::final_check_failed, Cat::FinalCheck, "final_check_failed",
     "Final verification failed", S::PLAN},
    {TC::task_impossible, Cat::FinalCheck, "task_impossible",
     "Task determined impossible", S::DONE},
    // Error Recovery
    {TC::unknown_state, Cat::ErrorRecovery, "unknown_state",
     "Unrecognized system state", S::INIT},
    {TC::error_recovery, Cat::ErrorRecovery, "error_recovery",
     "General error recovery", S::INIT},
}};

}  // namespace

const std::array<TriggerInfo, kTriggerCount>& trigger_table() { return kTable; }

const TriggerInfo& trigger_info(TriggerCode code) {
  for (const TriggerInfo& row : kTable) {
    if (row.code == code) return row;
  }
  throw std::logic_error("trigger_info: code outside the closed vocabulary");
}

TriggerCategory classify_trigger(TriggerCode code) { return trigger_info(code).category; }

std::string_view to_string(TriggerCode code) { return trigger_info(code).name; }

std::string_view to_string(TriggerCategory category) {
  switch (category) {
    case Cat::RuleValidation: return "Rule Validation";
    case Cat::TaskStatusRules: return "Task Status Rules";
    case Cat::InitState: return "INIT State";
    case Cat::GetActionState: return "GET_ACTION State";
    case Cat::ExecuteAction: return "EXECUTE_ACTION";
    case Cat::QualityCheck: return "QUALITY_CHECK";
    case Cat::PlanState: return "PLAN State";
    case Cat::Supplement: return "SUPPLEMENT";
    case Cat::FinalCheck: return "FINAL_CHECK";
    case Cat::ErrorRecovery: return "Error Recovery";
  }
  return "?";
}

std::optional<TriggerCode> trigger_from_string(std::string_view name) {
  for (const TriggerInfo& row : kTable) {
    if (row.name == name) return row.code;
  }
  return std::nullopt;
}

bool is_global_category(TriggerCategory category) {
  return category == Cat::RuleValidation || category == Cat::TaskStatusRules ||
         category == Cat::ErrorRecovery;
}

std::optional<Situation> category_home(TriggerCategory category) {
  switch (category) {
    case Cat::InitState: return S::INIT;
    case Cat::GetActionState: return S::GET_ACTION;
    case Cat::ExecuteAction: return S::EXECUTE_ACTION;
    case Cat::QualityCheck: return S::QUALITY_CHECK;
    case Cat::PlanState: return S::PLAN;
    case Cat::Supplement: return S::SUPPLEMENT;
    case Cat::FinalCheck: return S::FINAL_CHECK;
    default: return std::nullopt;
  }
}

}  // namespace orchestra
