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

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "orchestra/action.hpp"
#include "orchestra/evaluator.hpp"
#include "orchestra/rules.hpp"
#include "orchestra/state.hpp"
#include "orchestra/trigger.hpp"

namespace orchestra {

// One transition rule: a trigger accepted either from a single source
// situation or — for the global monitor categories — from every non-DONE
// situation (source == nullopt).
struct TransitionRow {
  std::optional<Situation> source;  // nullopt: any non-DONE situation
  TriggerCode code = TriggerCode::error_recovery;
  Situation target = Situation::INIT;

  bool operator==(const TransitionRow&) const = default;
};

// The controller's look-up-table. Mutable as a value so defective tables can
// be constructed and audited; the canonical instance is embedded as data.
struct TransitionTable {
  std::vector<TransitionRow> rows;

  // First row accepting (current, code), if any.
  std::optional<Situation> lookup(Situation current, TriggerCode code) const;
};

// The canonical 40-row table, one row per trigger reference entry.
const TransitionTable& canonical_table();

struct UndefinedTransition : std::runtime_error {
  UndefinedTransition(Situation current, TriggerCode code);
  Situation current;
  TriggerCode code;
};

struct TerminalState : std::runtime_error {
  TerminalState() : std::runtime_error("step on terminal situation DONE") {}
};

// Target situation for (current, trigger) per the canonical table.
// task_impossible is additionally accepted from PLAN: a planner may declare
// the task intractable before any subtask exists, and the verdict must reach
// DONE without a detour. Throws UndefinedTransition / TerminalState.
Situation next_situation(Situation current, TriggerCode trigger);

// Audit result for a table value.
struct TableValidation {
  bool ok = false;
  std::size_t verified_rows = 0;
  std::vector<std::string> missing;      // canonical rows absent from the table
  std::vector<std::string> extras;       // rows not in the canonical set
  std::vector<std::string> unreachable;  // situations unreachable from INIT
};

// Checks a table against the canonical row set: every canonical row present
// with a matching target, no extra rows, every non-DONE situation reachable
// from INIT and DONE reachable.
TableValidation validate_table(const TransitionTable& table);

// ---------------------------------------------------------------------------
// Events and the controller step function.

// Payloads carried on events; the kind must match the trigger.
namespace payload {

// worker_generate_action / quality_check_execute_action
struct PendingAction {
  WorkerAction action;
};

// command_completed / execution_error: what the executor did.
struct ExecutionResult {
  std::optional<WorkerAction> action;  // set when an action actually ran
  ExecutionStatus status = ExecutionStatus::executed;
  std::string output;
};

// subtask_ready / subtask_ready_after_plan / final_check_pending: the plan
// digest the controller installs — statuses plus the next current subtask.
struct PlanInstall {
  std::map<std::string, SubtaskStatus> statuses;
  std::string current;
};

// quality_check_* outcomes.
struct QualityOutcome {
  CheckTrigger kind = CheckTrigger::PERIODIC_CHECK;
  GateDecision gate = GateDecision::gate_continue;
  bool fulfill_current = false;
  std::optional<std::string> next_subtask;  // successor after a verified completion
};

struct Note {
  std::string text;
};

}  // namespace payload

using EventPayload = std::variant<std::monostate, payload::PendingAction,
                                  payload::ExecutionResult, payload::PlanInstall,
                                  payload::QualityOutcome, payload::Note>;

struct Event {
  TriggerCode trigger = TriggerCode::error_recovery;
  EventPayload payload;
};

std::uint64_t payload_digest(const EventPayload& payload);

struct StepResult {
  GlobalState state;
  std::vector<TriggerCode> follow_ups;  // fired rule triggers, highest priority first
};

// Applies one event to the state: switches the situation per the table,
// updates statuses per the trigger's semantics, folds counter events, then
// consults the rule engine. `now` is the logical clock reading.
//
// Pure: identical (state, event, config, now) give identical results.
// Throws TerminalState when state.situation == DONE, UndefinedTransition when
// the table has no entry.
StepResult step(const GlobalState& state, const Event& event, const RuleConfig& config,
                double now);

}  // namespace orchestra
