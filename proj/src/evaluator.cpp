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

#include "orchestra/evaluator.hpp"

namespace orchestra {

std::string_view to_string(GateDecision decision) {
  switch (decision) {
    case GateDecision::gate_done: return "gate_done";
    case GateDecision::gate_fail: return "gate_fail";
    case GateDecision::gate_continue: return "gate_continue";
    case GateDecision::gate_supplement: return "gate_supplement";
    case GateDecision::gate_error: return "gate_error";
  }
  return "?";
}

std::string_view to_string(CheckTrigger trigger) {
  switch (trigger) {
    case CheckTrigger::PERIODIC_CHECK: return "PERIODIC_CHECK";
    case CheckTrigger::WORKER_STALE: return "WORKER_STALE";
    case CheckTrigger::WORKER_SUCCESS: return "WORKER_SUCCESS";
  }
  return "?";
}

std::string_view to_string(FinalCheckOutcome outcome) {
  switch (outcome) {
    case FinalCheckOutcome::final_check_passed: return "final_check_passed";
    case FinalCheckOutcome::final_check_failed: return "final_check_failed";
    case FinalCheckOutcome::final_check_pending: return "final_check_pending";
    case FinalCheckOutcome::final_check_error: return "final_check_error";
    case FinalCheckOutcome::task_impossible: return "task_impossible";
  }
  return "?";
}

std::optional<GateDecision> gate_decision_from_string(std::string_view text) {
  for (GateDecision d : {GateDecision::gate_done, GateDecision::gate_fail,
                         GateDecision::gate_continue, GateDecision::gate_supplement,
                         GateDecision::gate_error}) {
    if (to_string(d) == text) return d;
  }
  return std::nullopt;
}

std::optional<CheckTrigger> check_trigger_from_string(std::string_view text) {
  for (CheckTrigger t : {CheckTrigger::PERIODIC_CHECK, CheckTrigger::WORKER_STALE,
                         CheckTrigger::WORKER_SUCCESS}) {
    if (to_string(t) == text) return t;
  }
  return std::nullopt;
}

std::optional<FinalCheckOutcome> final_check_outcome_from_string(std::string_view text) {
  for (FinalCheckOutcome o :
       {FinalCheckOutcome::final_check_passed, FinalCheckOutcome::final_check_failed,
        FinalCheckOutcome::final_check_pending, FinalCheckOutcome::final_check_error,
        FinalCheckOutcome::task_impossible}) {
    if (to_string(o) == text) return o;
  }
  return std::nullopt;
}

GateDecision gate_decide(const JudgeSignals& signals, const GateThresholds& thresholds) {
  if (!signals.in_range() || !thresholds.valid()) return GateDecision::gate_error;
  if (signals.similarity > thresholds.tau_done) return GateDecision::gate_done;
  if (signals.progress < thresholds.tau_fail) return GateDecision::gate_fail;
  if (signals.uncertainty > thresholds.tau_supplement) return GateDecision::gate_supplement;
  // Residual band: tau_fail <= progress, target not reached, judge confident.
  return GateDecision::gate_continue;
}

TriggerCode map_gate_decision(GateDecision gate, CheckTrigger kind, bool last_unfulfilled) {
  switch (gate) {
    case GateDecision::gate_done:
      return last_unfulfilled ? TriggerCode::all_subtasks_completed
                              : TriggerCode::quality_check_passed;
    case GateDecision::gate_fail:
      return TriggerCode::quality_check_failed;
    case GateDecision::gate_continue:
      return kind == CheckTrigger::WORKER_STALE ? TriggerCode::quality_check_failed
                                                : TriggerCode::quality_check_passed;
    case GateDecision::gate_supplement:
      return TriggerCode::quality_check_supplement;
    case GateDecision::gate_error:
      return TriggerCode::quality_check_error;
  }
  return TriggerCode::quality_check_error;
}

QualityCheckResult quality_check(CheckTrigger kind, bool last_unfulfilled, Judge& judge,
                                 const GateThresholds& thresholds) {
  QualityCheckResult result;
  result.kind = kind;

  QualityAssessment assessment;
  try {
    assessment = judge.assess_quality(kind);
  } catch (const std::exception&) {
    result.trigger = TriggerCode::quality_check_error;
    result.gate = GateDecision::gate_error;
    return result;
  }

  if (assessment.error) {
    result.trigger = TriggerCode::quality_check_error;
    result.gate = GateDecision::gate_error;
    return result;
  }

  if (assessment.remediation) {
    result.trigger = TriggerCode::quality_check_execute_action;
    result.gate = GateDecision::gate_continue;
    result.remediation = assessment.remediation;
    return result;
  }

  result.gate = gate_decide(assessment.signals, thresholds);
  result.trigger = map_gate_decision(result.gate, kind, last_unfulfilled);
  result.fulfill_current = result.gate == GateDecision::gate_done;
  return result;
}

FinalAssessment final_check(bool all_fulfilled, Judge& judge) {
  if (!all_fulfilled) {
    return {.outcome = FinalCheckOutcome::final_check_error};
  }
  FinalAssessment assessment;
  try {
    assessment = judge.assess_final();
  } catch (const std::exception&) {
    return {.outcome = FinalCheckOutcome::final_check_error};
  }
  if (assessment.outcome == FinalCheckOutcome::final_check_pending && !assessment.new_subtask) {
    // Pending must grow the plan; without a named subtask there is nothing to do.
    return {.outcome = FinalCheckOutcome::final_check_error};
  }
  return assessment;
}

TriggerCode final_outcome_trigger(FinalCheckOutcome outcome) {
  switch (outcome) {
    case FinalCheckOutcome::final_check_passed: return TriggerCode::final_check_passed;
    case FinalCheckOutcome::final_check_failed: return TriggerCode::final_check_failed;
    case FinalCheckOutcome::final_check_pending: return TriggerCode::final_check_pending;
    case FinalCheckOutcome::final_check_error: return TriggerCode::final_check_error;
    case FinalCheckOutcome::task_impossible: return TriggerCode::task_impossible;
  }
  return TriggerCode::final_check_error;
}

}  // namespace orchestra
