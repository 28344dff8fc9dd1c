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

#include <optional>
#include <string>

#include "orchestra/action.hpp"
#include "orchestra/plan.hpp"
#include "orchestra/trigger.hpp"
#include "orchestra/types.hpp"

namespace orchestra {

// Judge-supplied comparison signals, each in [0,1]: similarity of the current
// state to the target, progress against the previous state, and the judge's
// uncertainty about the system state.
struct JudgeSignals {
  double similarity = 0.0;
  double progress = 0.0;
  double uncertainty = 0.0;

  bool in_range() const {
    auto ok = [](double v) { return v >= 0.0 && v <= 1.0; };
    return ok(similarity) && ok(progress) && ok(uncertainty);
  }
};

struct GateThresholds {
  double tau_done = 0.9;
  double tau_fail = 0.1;
  double tau_supplement = 0.7;

  bool valid() const {
    return tau_fail >= 0.0 && tau_fail < tau_done && tau_done <= 1.0 &&
           tau_supplement >= 0.0 && tau_supplement <= 1.0;
  }
};

enum class GateDecision { gate_done, gate_fail, gate_continue, gate_supplement, gate_error };

// What put the controller into QUALITY_CHECK.
enum class CheckTrigger { PERIODIC_CHECK, WORKER_STALE, WORKER_SUCCESS };

enum class FinalCheckOutcome {
  final_check_passed,
  final_check_failed,
  final_check_pending,
  final_check_error,
  task_impossible,
};

std::string_view to_string(GateDecision decision);
std::string_view to_string(CheckTrigger trigger);
std::string_view to_string(FinalCheckOutcome outcome);
std::optional<GateDecision> gate_decision_from_string(std::string_view text);
std::optional<CheckTrigger> check_trigger_from_string(std::string_view text);
std::optional<FinalCheckOutcome> final_check_outcome_from_string(std::string_view text);

// The gate decision function. The raw cases overlap (similarity and progress
// live on different scales), so evaluation is ordered: done, fail,
// supplement, then continue as the residual. Out-of-range signals or invalid
// thresholds yield gate_error.
GateDecision gate_decide(const JudgeSignals& signals, const GateThresholds& thresholds);

// What a judge reports for one quality check.
struct QualityAssessment {
  JudgeSignals signals;
  bool error = false;
  std::optional<WorkerAction> remediation;  // directly executable fix
};

// What a judge reports for the final verification.
struct FinalAssessment {
  FinalCheckOutcome outcome = FinalCheckOutcome::final_check_error;
  std::optional<SubtaskNode> new_subtask;  // required for final_check_pending
  EdgeSet new_edges;                       // optional extra dependencies
};

// Pluggable judge. Scripted and deterministic in simulation; a model-backed
// judge slots in behind the same surface with opaque state handles.
class Judge {
 public:
  virtual ~Judge() = default;
  virtual QualityAssessment assess_quality(CheckTrigger kind) = 0;
  virtual FinalAssessment assess_final() = 0;
};

// Outcome of one quality check, ready to feed the controller.
struct QualityCheckResult {
  TriggerCode trigger = TriggerCode::quality_check_error;
  GateDecision gate = GateDecision::gate_error;
  CheckTrigger kind = CheckTrigger::PERIODIC_CHECK;
  bool fulfill_current = false;  // gate_done verified the current subtask
  std::optional<WorkerAction> remediation;
};

// Maps a gate decision onto the QUALITY_CHECK trigger vocabulary. `last_unfulfilled`
// promotes a verified completion to all_subtasks_completed. gate_continue resumes
// under PERIODIC_CHECK / WORKER_SUCCESS but fails under WORKER_STALE — a worker that
// declared itself stuck cannot be told to keep going.
TriggerCode map_gate_decision(GateDecision gate, CheckTrigger kind, bool last_unfulfilled);

// Runs the judge and produces the controller trigger. Judge failure and
// invalid signals degrade to quality_check_error; a judge-supplied
// remediation action short-circuits to quality_check_execute_action.
QualityCheckResult quality_check(CheckTrigger kind, bool last_unfulfilled, Judge& judge,
                                 const GateThresholds& thresholds);

// Runs the judge's holistic verification. `all_fulfilled` is the caller's
// precondition; when false the outcome is final_check_error. A pending
// outcome without a named new subtask also degrades to final_check_error.
FinalAssessment final_check(bool all_fulfilled, Judge& judge);

TriggerCode final_outcome_trigger(FinalCheckOutcome outcome);

}  // namespace orchestra
