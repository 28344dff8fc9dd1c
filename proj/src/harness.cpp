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

#include "orchestra/harness.hpp"

#include <algorithm>
#include <deque>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace orchestra {

using nlohmann::json;

namespace {

std::string hex64(std::uint64_t value) {
  std::ostringstream out;
  out << std::hex << std::setfill('0') << std::setw(16) << value;
  return out.str();
}

// Resolves "@artifact:key" / "@artifact:key#version" references against the
// shared store, so scripted decisions can carry genuinely read content.
std::optional<std::string> resolve_reference(const std::string& text, const ArtifactView& view) {
  constexpr std::string_view prefix = "@artifact:";
  if (text.rfind(prefix, 0) != 0) return text;
  std::string rest = text.substr(prefix.size());
  auto hash = rest.find('#');
  if (hash == std::string::npos) return view.latest(rest);
  std::uint64_t version = 0;
  try {
    version = std::stoull(rest.substr(hash + 1));
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return view.at(rest.substr(0, hash), version);
}

// Scenario-driven plan provider: initial fixture plus replans keyed by
// (attempt, level). Missing replan fixtures echo the current structure,
// which satisfies every level contract.
class ScriptedPlanProvider final : public PlanProvider {
 public:
  explicit ScriptedPlanProvider(const Scenario& scenario) : scenario_(scenario) {}

  PlanDraft initial_plan(const std::string&, const std::string&) override {
    return {.nodes = scenario_.plan.nodes,
            .edges = scenario_.plan.edges,
            .impossible = scenario_.plan.impossible};
  }

  PlanDraft replan(const ReplanRequest& request) override {
    for (const ReplanFixture& fixture : scenario_.replans) {
      if (fixture.attempt == request.attempt && fixture.level == request.level) {
        return {.nodes = fixture.plan.nodes,
                .edges = fixture.plan.edges,
                .impossible = fixture.plan.impossible};
      }
    }
    PlanDraft echo;
    for (const auto& [id, node] : request.current.nodes) echo.nodes.push_back(node);
    echo.edges = request.current.edges;
    return echo;
  }

 private:
  const Scenario& scenario_;
};

class ScriptedWorkerProvider final : public WorkerProvider {
 public:
  explicit ScriptedWorkerProvider(const Scenario& scenario) : scenario_(scenario) {}

  std::optional<WorkerDecision> next_decision(WorkerRole, const SubtaskNode& subtask,
                                              const std::string&,
                                              const ArtifactView& artifacts) override {
    auto script = scenario_.worker_scripts.find(subtask.id);
    if (script == scenario_.worker_scripts.end()) return std::nullopt;
    std::uint64_t& cursor = cursors_[subtask.id];
    if (cursor >= script->second.size()) return std::nullopt;
    ScriptedDecision decision = script->second[cursor++];
    if (!decision) return std::nullopt;
    return materialize(*decision, artifacts);
  }

 private:
  WorkerDecision materialize(WorkerDecision decision, const ArtifactView& artifacts) const {
    auto* generate = std::get_if<decision::GenerateAction>(&decision);
    if (!generate) return decision;
    auto* op = std::get_if<OperatorAction>(&generate->action);
    if (!op) return decision;
    if (auto* type_text = std::get_if<act::TypeText>(op)) {
      auto resolved = resolve_reference(type_text->text, artifacts);
      if (!resolved) return decision::CannotExecute{"artifact reference not found: " + type_text->text};
      type_text->text = *resolved;
    } else if (auto* memorize = std::get_if<act::Memorize>(op)) {
      auto resolved = resolve_reference(memorize->content, artifacts);
      if (!resolved) return decision::CannotExecute{"artifact reference not found: " + memorize->content};
      memorize->content = *resolved;
    }
    return decision;
  }

  const Scenario& scenario_;
  mutable std::map<std::string, std::uint64_t> cursors_;
};

class ScriptedJudge final : public Judge {
 public:
  explicit ScriptedJudge(const Scenario& scenario) : scenario_(scenario) {}

  QualityAssessment assess_quality(CheckTrigger) override {
    const JudgeRecord* record = next();
    QualityAssessment assessment;
    if (!record || record->error || (!record->signals && !record->remediation)) {
      assessment.error = true;
      return assessment;
    }
    if (record->remediation) {
      assessment.remediation = record->remediation;
      return assessment;
    }
    assessment.signals = *record->signals;
    return assessment;
  }

  FinalAssessment assess_final() override {
    const JudgeRecord* record = next();
    if (!record || record->error || !record->final_verdict) {
      return {.outcome = FinalCheckOutcome::final_check_error};
    }
    FinalAssessment assessment;
    assessment.outcome = *record->final_verdict;
    assessment.new_subtask = record->new_subtask;
    assessment.new_edges = record->new_edges;
    return assessment;
  }

 private:
  const JudgeRecord* next() {
    if (cursor_ >= scenario_.judge_timeline.size()) return nullptr;
    return &scenario_.judge_timeline[cursor_++];
  }

  const Scenario& scenario_;
  std::uint64_t cursor_ = 0;
};

class ScriptedKnowledgeSource final : public KnowledgeSource {
 public:
  explicit ScriptedKnowledgeSource(const Scenario& scenario) : scenario_(scenario) {}

  std::optional<std::string> lookup(const std::string&) override {
    if (cursor_ >= scenario_.supplements.size()) return std::nullopt;
    const SupplementFixture& fixture = scenario_.supplements[cursor_++];
    if (!fixture.ok) return std::nullopt;
    return fixture.text;
  }

 private:
  const Scenario& scenario_;
  std::uint64_t cursor_ = 0;
};

// The replan cause decides the adjustment severity: per-subtask failures
// escalate light -> medium -> heavy; task-level causes use fixed levels.
AdjustmentLevel level_for_failures(std::uint64_t failures) {
  if (failures <= 1) return AdjustmentLevel::light;
  if (failures == 2) return AdjustmentLevel::medium;
  return AdjustmentLevel::heavy;
}

class Runner {
 public:
  explicit Runner(const Scenario& scenario)
      : scenario_(scenario),
        plan_provider_(scenario),
        worker_provider_(scenario),
        judge_(scenario),
        knowledge_(scenario),
        view_(store_) {}

  RunOutput run() {
    state_.situation = Situation::INIT;
    state_.task = TaskStatus::created;
    state_.counters.task_started_at = 0.0;

    // Hard cap: the switch bound terminates every run long before this; the
    // cap only guards against kernel defects during development.
    const std::uint64_t hard_cap = scenario_.rules.max_state_switches * 2 + 64;

    while (state_.situation != Situation::DONE && output_.trace.size() < hard_cap) {
      Event event = component_event();
      apply(event);
      while (!pending_follow_ups_.empty() && state_.situation != Situation::DONE) {
        TriggerCode follow_up = pending_follow_ups_.front();
        pending_follow_ups_.pop_front();
        apply(Event{.trigger = follow_up, .payload = {}});
      }
    }

    finish();
    return std::move(output_);
  }

 private:
  // --- event application ----------------------------------------------------

  void apply(Event event) {
    Situation before = state_.situation;
    note_replan_cause(event.trigger);

    StepResult result;
    try {
      result = step(state_, event, scenario_.rules, clock_);
    } catch (const UndefinedTransition&) {
      output_.undefined_transitions += 1;
      event = Event{.trigger = TriggerCode::error_recovery, .payload = {}};
      result = step(state_, event, scenario_.rules, clock_);
    }

    state_ = std::move(result.state);
    pending_follow_ups_.assign(result.follow_ups.begin(), result.follow_ups.end());

    TraceRecord record;
    record.ordinal = output_.trace.size() + 1;
    record.before = before;
    record.trigger = event.trigger;
    record.after = state_.situation;
    record.payload_digest = payload_digest(event.payload);
    record.counters = state_.counters;
    record.logical_time = clock_;
    if (const auto* pending = std::get_if<payload::PendingAction>(&event.payload)) {
      record.action_repr = action_to_json(pending->action).dump();
    } else if (const auto* exec = std::get_if<payload::ExecutionResult>(&event.payload)) {
      if (exec->action) record.action_repr = action_to_json(*exec->action).dump();
    }
    output_.trace.push_back(std::move(record));

    if (state_.situation == Situation::QUALITY_CHECK) {
      check_kind_ = kind_for_entry(event.trigger);
      output_.report.quality_checks[std::string(to_string(check_kind_))] += 1;
    }
  }

  CheckTrigger kind_for_entry(TriggerCode trigger) const {
    switch (trigger) {
      case TriggerCode::worker_success: return CheckTrigger::WORKER_SUCCESS;
      case TriggerCode::worker_stale_progress: return CheckTrigger::WORKER_STALE;
      default: return CheckTrigger::PERIODIC_CHECK;
    }
  }

  // Remembers why the controller is heading into PLAN so plan_event() can
  // pick the adjustment level and failure report.
  void note_replan_cause(TriggerCode trigger) {
    switch (trigger) {
      case TriggerCode::quality_check_failed:
      case TriggerCode::quality_check_error:
      case TriggerCode::work_cannot_execute:
      case TriggerCode::no_worker_decision:
      case TriggerCode::get_action_error:
      case TriggerCode::rule_replan_long_execution:
        if (state_.current_subtask) {
          failure_counts_[*state_.current_subtask] += 1;
          next_replan_level_ = level_for_failures(failure_counts_[*state_.current_subtask]);
        } else {
          next_replan_level_ = AdjustmentLevel::light;
        }
        next_failure_report_ = std::string(to_string(trigger));
        break;
      case TriggerCode::final_check_failed:
        next_replan_level_ = AdjustmentLevel::heavy;
        next_failure_report_ = "final verification failed";
        break;
      case TriggerCode::supplement_completed:
        next_replan_level_ = AdjustmentLevel::light;
        next_failure_report_ = "supplement integrated";
        break;
      case TriggerCode::supplement_error:
      case TriggerCode::no_subtasks:
      case TriggerCode::init_error:
        next_replan_level_ = AdjustmentLevel::light;
        next_failure_report_ = std::string(to_string(trigger));
        break;
      default:
        break;
    }
  }

  // --- component events ------------------------------------------------------

  Event component_event() {
    Situation situation = state_.situation;
    if (auto injected = injection_for(situation)) {
      return Event{.trigger = *injected, .payload = {}};
    }
    switch (situation) {
      case Situation::INIT: return init_event();
      case Situation::PLAN: return plan_event();
      case Situation::GET_ACTION: return get_action_event();
      case Situation::EXECUTE_ACTION: return execute_event();
      case Situation::QUALITY_CHECK: return quality_check_event();
      case Situation::SUPPLEMENT: return supplement_event();
      case Situation::FINAL_CHECK: return final_check_event();
      case Situation::DONE: break;
    }
    return Event{.trigger = TriggerCode::unknown_state, .payload = {}};
  }

  std::optional<TriggerCode> injection_for(Situation situation) {
    visit_counts_[situation] += 1;
    for (std::size_t i = 0; i < scenario_.injections.size(); ++i) {
      if (consumed_injections_.count(i)) continue;
      const Injection& inj = scenario_.injections[i];
      if (inj.situation == situation && inj.occurrence == visit_counts_[situation]) {
        consumed_injections_.insert(i);
        return inj.trigger;
      }
    }
    return std::nullopt;
  }

  std::map<std::string, SubtaskStatus> fresh_statuses(const SubtaskDag& dag,
                                                      bool preserve_fulfilled) const {
    std::map<std::string, SubtaskStatus> statuses;
    for (const auto& [id, node] : dag.nodes) {
      if (preserve_fulfilled) {
        auto old = state_.subtasks.find(id);
        if (old != state_.subtasks.end() && old->second == SubtaskStatus::fulfilled) {
          statuses[id] = SubtaskStatus::fulfilled;
          continue;
        }
      }
      statuses[id] = SubtaskStatus::pending;
    }
    // Promote to ready where every predecessor is already fulfilled.
    for (auto& [id, status] : statuses) {
      if (status != SubtaskStatus::pending) continue;
      bool all_fulfilled = true;
      for (const std::string& pred : dag.predecessors(id)) {
        if (statuses[pred] != SubtaskStatus::fulfilled) {
          all_fulfilled = false;
          break;
        }
      }
      if (all_fulfilled) status = SubtaskStatus::ready;
    }
    return statuses;
  }

  Event init_event() {
    if (dag_.empty()) return Event{.trigger = TriggerCode::no_subtasks, .payload = {}};
    auto statuses = fresh_statuses(dag_, /*preserve_fulfilled=*/true);
    auto frontier = ready_frontier(dag_, statuses);
    if (frontier.empty()) return Event{.trigger = TriggerCode::no_subtasks, .payload = {}};
    return Event{.trigger = TriggerCode::subtask_ready,
                 .payload = payload::PlanInstall{.statuses = std::move(statuses),
                                                 .current = *frontier.begin()}};
  }

  Event plan_event() {
    try {
      PlanResult result = dag_.empty()
                              ? plan(scenario_.task_text, context_, plan_provider_)
                              : replan_current();
      if (result.impossible) {
        return Event{.trigger = TriggerCode::task_impossible, .payload = {}};
      }
      dag_ = std::move(result.dag);
      auto statuses = fresh_statuses(dag_, /*preserve_fulfilled=*/true);
      auto frontier = ready_frontier(dag_, statuses);
      if (frontier.empty()) {
        return Event{.trigger = TriggerCode::plan_error,
                     .payload = payload::Note{"plan has no executable subtask"}};
      }
      return Event{.trigger = TriggerCode::subtask_ready_after_plan,
                   .payload = payload::PlanInstall{.statuses = std::move(statuses),
                                                   .current = *frontier.begin()}};
    } catch (const std::runtime_error& e) {
      return Event{.trigger = TriggerCode::plan_error, .payload = payload::Note{e.what()}};
    }
  }

  PlanResult replan_current() {
    std::set<std::string> fulfilled;
    for (const auto& [id, status] : state_.subtasks) {
      if (status == SubtaskStatus::fulfilled) fulfilled.insert(id);
    }
    return replan(dag_, fulfilled, next_failure_report_, next_replan_level_,
                  state_.counters.plan_attempts, plan_provider_);
  }

  Event get_action_event() {
    if (!state_.current_subtask) {
      return Event{.trigger = TriggerCode::no_current_subtask_id, .payload = {}};
    }
    auto node = dag_.nodes.find(*state_.current_subtask);
    if (node == dag_.nodes.end()) {
      return Event{.trigger = TriggerCode::subtask_not_found, .payload = {}};
    }
    std::optional<WorkerDecision> decision;
    try {
      decision = next_decision(node->second.role, node->second, scenario_.observation, view_,
                               worker_provider_);
    } catch (const RoleMismatch& e) {
      return Event{.trigger = TriggerCode::get_action_error, .payload = payload::Note{e.what()}};
    }

    TriggerCode trigger = decision_trigger(decision);
    if (!decision) return Event{.trigger = trigger, .payload = {}};

    if (const auto* generate = std::get_if<decision::GenerateAction>(&*decision)) {
      pending_action_ = generate->action;
      return Event{.trigger = trigger, .payload = payload::PendingAction{generate->action}};
    }
    if (const auto* supplement = std::get_if<decision::Supplement>(&*decision)) {
      pending_query_ = supplement->query;
      return Event{.trigger = trigger, .payload = payload::Note{supplement->query}};
    }
    if (const auto* cannot = std::get_if<decision::CannotExecute>(&*decision)) {
      return Event{.trigger = trigger, .payload = payload::Note{cannot->reason}};
    }
    if (const auto* stale = std::get_if<decision::Stale>(&*decision)) {
      return Event{.trigger = trigger, .payload = payload::Note{stale->reason}};
    }
    return Event{.trigger = trigger, .payload = {}};
  }

  Event execute_event() {
    if (!pending_action_) {
      return Event{.trigger = TriggerCode::no_command,
                   .payload = payload::ExecutionResult{.action = std::nullopt,
                                                       .status = ExecutionStatus::blocked}};
    }
    WorkerAction action = *pending_action_;
    pending_action_.reset();

    MockExecution outcome = execute_mock(scenario_.executor_schedule, action_ordinal_++);
    payload::ExecutionResult result;
    result.status = outcome.status;
    if (outcome.trigger != TriggerCode::no_command) result.action = action;

    if (outcome.status == ExecutionStatus::executed) {
      clock_ += scenario_.logical_seconds_per_action;
      if (const auto* op = std::get_if<OperatorAction>(&action)) {
        if (const auto* wait = std::get_if<act::Wait>(op)) clock_ += wait->seconds;
        if (const auto* memorize = std::get_if<act::Memorize>(op)) {
          const SubtaskNode& node = dag_.nodes.at(*state_.current_subtask);
          store_.write(memorize->key, memorize->content, node.role, clock_);
        }
        if (std::get_if<act::Screenshot>(op)) result.output = scenario_.observation;
      }
    }
    return Event{.trigger = outcome.trigger, .payload = std::move(result)};
  }

  Event quality_check_event() {
    bool last_unfulfilled = false;
    if (state_.current_subtask) {
      last_unfulfilled = true;
      for (const auto& [id, status] : state_.subtasks) {
        if (id != *state_.current_subtask && status != SubtaskStatus::fulfilled) {
          last_unfulfilled = false;
          break;
        }
      }
    }

    QualityCheckResult result =
        quality_check(check_kind_, last_unfulfilled, judge_, scenario_.thresholds);

    if (result.trigger == TriggerCode::quality_check_execute_action) {
      if (!result.remediation) {
        // Nothing concrete to run; downgrade rather than invent a command.
        return Event{.trigger = TriggerCode::quality_check_error,
                     .payload = payload::QualityOutcome{.kind = result.kind,
                                                        .gate = GateDecision::gate_error}};
      }
      pending_action_ = result.remediation;
      return Event{.trigger = result.trigger,
                   .payload = payload::PendingAction{*result.remediation}};
    }

    payload::QualityOutcome outcome;
    outcome.kind = result.kind;
    outcome.gate = result.gate;
    outcome.fulfill_current = result.fulfill_current;

    if (result.trigger == TriggerCode::quality_check_passed && result.fulfill_current &&
        state_.current_subtask) {
      auto statuses = state_.subtasks;
      statuses[*state_.current_subtask] = SubtaskStatus::fulfilled;
      auto frontier = ready_frontier(dag_, statuses);
      if (!frontier.empty()) outcome.next_subtask = *frontier.begin();
    }
    if (result.trigger == TriggerCode::quality_check_supplement && state_.current_subtask) {
      const SubtaskNode& node = dag_.nodes.at(*state_.current_subtask);
      pending_query_ = node.description.empty() ? node.title : node.description;
    }
    return Event{.trigger = result.trigger, .payload = std::move(outcome)};
  }

  Event supplement_event() {
    std::string query = pending_query_.value_or("");
    pending_query_.reset();
    try {
      std::string augmentation = supplement(query, knowledge_);
      context_ += context_.empty() ? augmentation : "\n" + augmentation;
      return Event{.trigger = TriggerCode::supplement_completed,
                   .payload = payload::Note{augmentation}};
    } catch (const SourceUnavailable& e) {
      return Event{.trigger = TriggerCode::supplement_error, .payload = payload::Note{e.what()}};
    }
  }

  Event final_check_event() {
    bool all_fulfilled = !dag_.empty();
    for (const auto& [id, status] : state_.subtasks) {
      if (status != SubtaskStatus::fulfilled) {
        all_fulfilled = false;
        break;
      }
    }

    FinalAssessment assessment = final_check(all_fulfilled, judge_);
    if (assessment.outcome == FinalCheckOutcome::final_check_pending) {
      try {
        std::vector<SubtaskNode> nodes;
        for (const auto& [id, node] : dag_.nodes) nodes.push_back(node);
        nodes.push_back(*assessment.new_subtask);
        EdgeSet edges = dag_.edges;
        for (const auto& edge : assessment.new_edges) edges.insert(edge);
        SubtaskDag grown = build_dag(std::move(nodes), std::move(edges));
        dag_ = std::move(grown);

        auto statuses = state_.subtasks;
        statuses[assessment.new_subtask->id] = SubtaskStatus::ready;
        return Event{.trigger = TriggerCode::final_check_pending,
                     .payload = payload::PlanInstall{.statuses = std::move(statuses),
                                                     .current = assessment.new_subtask->id}};
      } catch (const std::runtime_error&) {
        assessment.outcome = FinalCheckOutcome::final_check_error;
      }
    }
    return Event{.trigger = final_outcome_trigger(assessment.outcome), .payload = {}};
  }

  // --- reporting -------------------------------------------------------------

  void finish() {
    RunReport& report = output_.report;
    if (!output_.trace.empty()) report.terminal_trigger = output_.trace.back().trigger;
    report.total_switches = state_.counters.state_switches;
    report.plan_attempts = state_.counters.plan_attempts;
    report.logical_duration = clock_;
    for (const TraceRecord& record : output_.trace) {
      if (record.trigger == TriggerCode::command_completed) report.actions_executed += 1;
    }
    for (std::string_view kind : {"PERIODIC_CHECK", "WORKER_STALE", "WORKER_SUCCESS"}) {
      report.quality_checks.try_emplace(std::string(kind), 0);
    }
    report.outcome = outcome_for(report.terminal_trigger);
    report.exit_code = exit_code_for(report.terminal_trigger);

    for (const std::string& key : store_.keys()) {
      std::uint64_t versions = store_.version_count(key);
      for (std::uint64_t v = 1; v <= versions; ++v) {
        const auto& version = store_.read(key, v);
        output_.artifacts.push_back(
            {.key = key, .version = v, .author = version.author, .content = version.content});
      }
    }
    output_.final_state = state_;
  }

  const Scenario& scenario_;
  ScriptedPlanProvider plan_provider_;
  ScriptedWorkerProvider worker_provider_;
  ScriptedJudge judge_;
  ScriptedKnowledgeSource knowledge_;
  ArtifactStore store_;
  ArtifactView view_;

  GlobalState state_;
  SubtaskDag dag_;
  RunOutput output_;
  std::deque<TriggerCode> pending_follow_ups_;
  double clock_ = 0.0;
  std::uint64_t action_ordinal_ = 0;
  std::optional<WorkerAction> pending_action_;
  std::optional<std::string> pending_query_;
  std::string context_;
  CheckTrigger check_kind_ = CheckTrigger::PERIODIC_CHECK;
  AdjustmentLevel next_replan_level_ = AdjustmentLevel::light;
  std::string next_failure_report_;
  std::map<std::string, std::uint64_t> failure_counts_;
  std::map<Situation, std::uint64_t> visit_counts_;
  std::set<std::size_t> consumed_injections_;
};

}  // namespace

RunOutput run(const Scenario& scenario) { return Runner(scenario).run(); }

int exit_code_for(TriggerCode terminal) {
  switch (terminal) {
    case TriggerCode::final_check_passed:
    case TriggerCode::rule_task_completed:
      return 0;
    case TriggerCode::task_impossible:
      return 2;
    case TriggerCode::rule_task_runtime_exceeded:
    case TriggerCode::rule_max_state_switches_reached:
    case TriggerCode::rule_state_switch_count_exceeded:
    case TriggerCode::rule_plan_number_exceeded:
      return 3;
    default:
      return 4;
  }
}

std::string outcome_for(TriggerCode terminal) {
  switch (exit_code_for(terminal)) {
    case 0: return "fulfilled";
    case 2: return "rejected";
    case 3: return "bounded-out";
    default: return "rejected";
  }
}

MockExecution execute_mock(const std::vector<ExecOutcome>& schedule, std::uint64_t ordinal) {
  ExecOutcome outcome =
      ordinal < schedule.size() ? schedule[ordinal] : ExecOutcome::completed;
  switch (outcome) {
    case ExecOutcome::completed:
      return {TriggerCode::command_completed, ExecutionStatus::executed};
    case ExecOutcome::execution_error:
      return {TriggerCode::execution_error, ExecutionStatus::error};
    case ExecOutcome::no_command:
      return {TriggerCode::no_command, ExecutionStatus::blocked};
    case ExecOutcome::timeout:
      return {TriggerCode::execution_error, ExecutionStatus::timeout};
  }
  return {TriggerCode::command_completed, ExecutionStatus::executed};
}

json record_to_json(const TraceRecord& record) {
  json counters{{"steps_since_quality_check", record.counters.steps_since_quality_check},
                {"repeated_action_run", record.counters.repeated_action_run},
                {"current_subtask_actions", record.counters.current_subtask_actions},
                {"state_switches", record.counters.state_switches},
                {"plan_attempts", record.counters.plan_attempts},
                {"task_started_at", record.counters.task_started_at}};
  if (record.counters.last_action_fingerprint) {
    counters["last_action_fingerprint"] = hex64(*record.counters.last_action_fingerprint);
  }
  json j{{"ordinal", record.ordinal},
         {"before", std::string(to_string(record.before))},
         {"trigger", std::string(to_string(record.trigger))},
         {"after", std::string(to_string(record.after))},
         {"payload", hex64(record.payload_digest)},
         {"counters", counters},
         {"t", record.logical_time}};
  if (record.action_repr) j["action"] = json::parse(*record.action_repr);
  return j;
}

json report_to_json(const RunReport& report) {
  return json{{"terminal_trigger", std::string(to_string(report.terminal_trigger))},
              {"total_switches", report.total_switches},
              {"actions_executed", report.actions_executed},
              {"plan_attempts", report.plan_attempts},
              {"quality_checks", report.quality_checks},
              {"logical_duration", report.logical_duration},
              {"outcome", report.outcome},
              {"exit_code", report.exit_code}};
}

json artifacts_to_json(const std::vector<ArtifactSnapshotEntry>& artifacts) {
  json entries = json::array();
  for (const auto& entry : artifacts) {
    entries.push_back(json{{"key", entry.key},
                           {"version", entry.version},
                           {"author", std::string(to_string(entry.author))},
                           {"content", entry.content}});
  }
  return json{{"artifacts", entries}};
}

void write_trace(std::ostream& out, const Scenario& scenario, const RunOutput& output) {
  json header{{"format", std::string(kTraceFormat)},
              {"scenario_digest", hex64(scenario_digest(scenario))},
              {"rules", rule_config_to_json(scenario.rules)},
              {"thresholds", thresholds_to_json(scenario.thresholds)}};
  out << header.dump() << '\n';
  for (const TraceRecord& record : output.trace) {
    out << record_to_json(record).dump() << '\n';
  }
}

std::string trace_to_string(const Scenario& scenario, const RunOutput& output) {
  std::ostringstream out;
  write_trace(out, scenario, output);
  return out.str();
}

LoadedTrace read_trace(std::istream& in) {
  LoadedTrace trace;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(e.what());
    }
    if (first) {
      trace.header = std::move(j);
      first = false;
    } else {
      trace.records.push_back(std::move(j));
    }
  }
  return trace;
}

namespace {

json strip_wall_clock(json value) {
  if (!value.is_object()) return value;
  json out = json::object();
  for (auto& [key, val] : value.items()) {
    if (key.rfind("wall_", 0) == 0) continue;
    out[key] = strip_wall_clock(val);
  }
  return out;
}

}  // namespace

TraceDiff diff_traces(const LoadedTrace& a, const LoadedTrace& b) {
  if (strip_wall_clock(a.header) != strip_wall_clock(b.header)) {
    return {.equal = false, .first_divergence = 0, .detail = "headers differ"};
  }
  std::size_t common = std::min(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (strip_wall_clock(a.records[i]) != strip_wall_clock(b.records[i])) {
      std::ostringstream detail;
      detail << "record " << (i + 1) << " differs";
      return {.equal = false, .first_divergence = i + 1, .detail = detail.str()};
    }
  }
  if (a.records.size() != b.records.size()) {
    std::ostringstream detail;
    detail << "lengths differ: " << a.records.size() << " vs " << b.records.size();
    return {.equal = false, .first_divergence = common + 1, .detail = detail.str()};
  }
  return {.equal = true, .first_divergence = std::nullopt, .detail = "equal"};
}

TraceDiff diff_traces(const std::vector<TraceRecord>& a, const std::vector<TraceRecord>& b) {
  LoadedTrace la, lb;
  for (const auto& record : a) la.records.push_back(record_to_json(record));
  for (const auto& record : b) lb.records.push_back(record_to_json(record));
  return diff_traces(la, lb);
}

}  // namespace orchestra
