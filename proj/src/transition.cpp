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

#include "orchestra/transition.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace orchestra {

std::optional<Situation> TransitionTable::lookup(Situation current, TriggerCode code) const {
  for (const TransitionRow& row : rows) {
    if (row.code != code) continue;
    if (!row.source || *row.source == current) return row.target;
  }
  return std::nullopt;
}

const TransitionTable& canonical_table() {
  static const TransitionTable table = [] {
    TransitionTable t;
    t.rows.reserve(kTriggerCount);
    for (const TriggerInfo& info : trigger_table()) {
      TransitionRow row;
      row.source = category_home(info.category);  // nullopt for global monitors
      row.code = info.code;
      row.target = info.target;
      t.rows.push_back(row);
    }
    return t;
  }();
  return table;
}

UndefinedTransition::UndefinedTransition(Situation current, TriggerCode code)
    : std::runtime_error([&] {
        std::ostringstream what;
        what << "no transition for (" << to_string(current) << ", " << to_string(code) << ")";
        return what.str();
      }()),
      current(current),
      code(code) {}

Situation next_situation(Situation current, TriggerCode trigger) {
  if (current == Situation::DONE) throw TerminalState();
  if (auto target = canonical_table().lookup(current, trigger)) return *target;
  // A planner can rule a task intractable before any subtask exists; the
  // reference row sources the code under FINAL_CHECK only.
  if (current == Situation::PLAN && trigger == TriggerCode::task_impossible) {
    return Situation::DONE;
  }
  throw UndefinedTransition(current, trigger);
}

namespace {

std::string describe_row(const TransitionRow& row) {
  std::ostringstream out;
  out << (row.source ? to_string(*row.source) : "*") << " --" << to_string(row.code) << "--> "
      << to_string(row.target);
  return out.str();
}

}  // namespace

TableValidation validate_table(const TransitionTable& table) {
  TableValidation result;
  const TransitionTable& canonical = canonical_table();

  for (const TransitionRow& want : canonical.rows) {
    bool found = std::find(table.rows.begin(), table.rows.end(), want) != table.rows.end();
    if (found) {
      result.verified_rows += 1;
    } else {
      result.missing.push_back(describe_row(want));
    }
  }
  for (const TransitionRow& have : table.rows) {
    bool known =
        std::find(canonical.rows.begin(), canonical.rows.end(), have) != canonical.rows.end();
    if (!known) result.extras.push_back(describe_row(have));
  }

  // Reachability over the situation graph induced by the table's rows.
  std::set<Situation> reached{Situation::INIT};
  std::queue<Situation> frontier;
  frontier.push(Situation::INIT);
  while (!frontier.empty()) {
    Situation from = frontier.front();
    frontier.pop();
    for (const TransitionRow& row : table.rows) {
      bool applies = row.source ? *row.source == from : from != Situation::DONE;
      if (applies && !reached.count(row.target)) {
        reached.insert(row.target);
        frontier.push(row.target);
      }
    }
  }
  for (Situation s : kAllSituations) {
    if (!reached.count(s)) result.unreachable.push_back(std::string(to_string(s)));
  }

  result.ok = result.missing.empty() && result.extras.empty() && result.unreachable.empty();
  return result;
}

std::uint64_t payload_digest(const EventPayload& payload) {
  struct Visitor {
    std::uint64_t operator()(const std::monostate&) const { return 0; }
    std::uint64_t operator()(const payload::PendingAction& p) const {
      return action_fingerprint(p.action);
    }
    std::uint64_t operator()(const payload::ExecutionResult& p) const {
      std::ostringstream enc;
      enc << "exec\x1f" << to_string(p.status) << '\x1f'
          << (p.action ? canonical_encoding(*p.action) : std::string()) << '\x1f' << p.output;
      return fnv1a64(enc.str());
    }
    std::uint64_t operator()(const payload::PlanInstall& p) const {
      std::ostringstream enc;
      enc << "plan\x1f" << p.current;
      for (const auto& [id, status] : p.statuses) {
        enc << '\x1f' << id << '=' << to_string(status);
      }
      return fnv1a64(enc.str());
    }
    std::uint64_t operator()(const payload::QualityOutcome& p) const {
      std::ostringstream enc;
      enc << "gate\x1f" << to_string(p.kind) << '\x1f' << to_string(p.gate) << '\x1f'
          << p.fulfill_current << '\x1f' << p.next_subtask.value_or("");
      return fnv1a64(enc.str());
    }
    std::uint64_t operator()(const payload::Note& p) const {
      return fnv1a64("note\x1f" + p.text);
    }
  };
  return std::visit(Visitor{}, payload);
}

namespace {

// Status bookkeeping for one trigger, applied after the situation switch.
void apply_trigger_semantics(GlobalState& state, const Event& event,
                             std::vector<CounterEvent>& counter_events) {
  using TC = TriggerCode;

  auto install_plan = [&](const payload::PlanInstall& install) {
    state.subtasks = install.statuses;
    state.current_subtask = install.current;
    counter_events.push_back(ev::SubtaskChanged{});
  };

  switch (event.trigger) {
    case TC::no_subtasks:
    case TC::init_error:
      if (state.task == TaskStatus::created) state.task = TaskStatus::pending;
      break;

    case TC::subtask_ready:
    case TC::subtask_ready_after_plan:
    case TC::final_check_pending:
      if (state.task == TaskStatus::created) state.task = TaskStatus::pending;
      if (const auto* install = std::get_if<payload::PlanInstall>(&event.payload)) {
        install_plan(*install);
      }
      break;

    case TC::worker_stale_progress:
      if (state.current_subtask) {
        state.subtasks[*state.current_subtask] = SubtaskStatus::stale;
      }
      break;

    case TC::command_completed:
    case TC::execution_error:
    case TC::no_command:
      if (const auto* result = std::get_if<payload::ExecutionResult>(&event.payload)) {
        state.execution = result->status;
        if (result->action && result->status == ExecutionStatus::executed) {
          counter_events.push_back(ev::ActionExecuted{action_fingerprint(*result->action)});
        }
      } else if (event.trigger == TC::no_command) {
        state.execution = ExecutionStatus::blocked;
      } else if (event.trigger == TC::execution_error) {
        state.execution = ExecutionStatus::error;
      }
      break;

    case TC::quality_check_passed:
      if (const auto* outcome = std::get_if<payload::QualityOutcome>(&event.payload)) {
        if (outcome->fulfill_current && state.current_subtask) {
          state.subtasks[*state.current_subtask] = SubtaskStatus::fulfilled;
          if (outcome->next_subtask) {
            state.current_subtask = *outcome->next_subtask;
            counter_events.push_back(ev::SubtaskChanged{});
          }
        }
      }
      break;

    case TC::all_subtasks_completed:
      if (state.current_subtask) {
        state.subtasks[*state.current_subtask] = SubtaskStatus::fulfilled;
      }
      break;

    case TC::quality_check_failed:
      if (state.current_subtask) {
        state.subtasks[*state.current_subtask] = SubtaskStatus::rejected;
      }
      break;

    case TC::worker_supplement:
    case TC::quality_check_supplement:
      state.task = TaskStatus::on_hold;
      break;

    case TC::supplement_completed:
    case TC::supplement_error:
      if (state.task == TaskStatus::on_hold) state.task = TaskStatus::pending;
      break;

    case TC::final_check_passed:
    case TC::rule_task_completed:
      state.task = TaskStatus::fulfilled;
      break;

    case TC::final_check_error:
    case TC::task_impossible:
    case TC::rule_max_state_switches_reached:
    case TC::rule_state_switch_count_exceeded:
    case TC::rule_plan_number_exceeded:
    case TC::rule_task_runtime_exceeded:
      if (state.task != TaskStatus::fulfilled) state.task = TaskStatus::rejected;
      break;

    case TC::unknown_state:
    case TC::error_recovery:
      // Reset for reinitialization; statuses and counters survive.
      state.current_subtask.reset();
      break;

    default:
      break;
  }
}

}  // namespace

StepResult step(const GlobalState& state, const Event& event, const RuleConfig& config,
                double now) {
  if (state.situation == Situation::DONE) throw TerminalState();

  StepResult result;
  result.state = state;
  GlobalState& next = result.state;

  Situation before = state.situation;
  Situation after = next_situation(before, event.trigger);
  next.situation = after;

  std::vector<CounterEvent> counter_events;
  counter_events.push_back(ev::StateSwitched{});
  if (after == Situation::PLAN) counter_events.push_back(ev::PlanAttempted{});
  if (after == Situation::QUALITY_CHECK) counter_events.push_back(ev::QualityCheckRan{});

  apply_trigger_semantics(next, event, counter_events);

  for (const CounterEvent& ce : counter_events) {
    next.counters = record_event(next.counters, ce);
  }
  if (after == Situation::PLAN) {
    // A replan re-scopes the current subtask; its action budget restarts.
    next.counters.current_subtask_actions = 0;
  }

  if (after != Situation::DONE) {
    // Termination outranks remediation: task rules first, then step rules. A
    // step rule whose target is the situation just entered is suppressed —
    // the remediation it asks for is already underway.
    if (auto fired = check_task_rules(next, now, config)) {
      result.follow_ups.push_back(*fired);
    } else if (auto step_fired = check_step_rules(next.counters, config)) {
      if (trigger_info(*step_fired).target != after) {
        result.follow_ups.push_back(*step_fired);
      }
    }
  }
  return result;
}

}  // namespace orchestra
