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
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orchestra/scenario.hpp"
#include "orchestra/transition.hpp"

namespace orchestra {

// One applied event. situation_after is always the table lookup of
// (situation_before, trigger) — checkable post hoc without the engine.
struct TraceRecord {
  std::uint64_t ordinal = 0;  // 1-based, strictly increasing
  Situation before = Situation::INIT;
  TriggerCode trigger = TriggerCode::error_recovery;
  Situation after = Situation::INIT;
  std::uint64_t payload_digest = 0;
  Counters counters;          // snapshot after the step
  double logical_time = 0.0;  // logical seconds, never wall-clock
  std::optional<std::string> action_repr;  // serialized action when the payload carries one
};

struct RunReport {
  TriggerCode terminal_trigger = TriggerCode::error_recovery;
  std::uint64_t total_switches = 0;
  std::uint64_t actions_executed = 0;
  std::uint64_t plan_attempts = 0;
  std::map<std::string, std::uint64_t> quality_checks;  // by check kind
  double logical_duration = 0.0;
  std::string outcome;  // fulfilled | rejected | bounded-out
  int exit_code = 4;
};

struct ArtifactSnapshotEntry {
  std::string key;
  std::uint64_t version = 0;
  WorkerRole author = WorkerRole::Operator;
  std::string content;
};

struct RunOutput {
  std::vector<TraceRecord> trace;
  RunReport report;
  GlobalState final_state;
  std::vector<ArtifactSnapshotEntry> artifacts;
  std::uint64_t undefined_transitions = 0;  // recovered via error_recovery
};

// Drives the full control loop against the scenario's scripted providers.
// Starts at INIT with the task created; always terminates at DONE — faults
// become in-band triggers, never exceptions.
RunOutput run(const Scenario& scenario);

// Exit code for a terminal trigger: 0 completion, 2 impossible, 3 resource
// bound, 4 verification error.
int exit_code_for(TriggerCode terminal);
std::string outcome_for(TriggerCode terminal);

struct MockExecution {
  TriggerCode trigger = TriggerCode::command_completed;
  ExecutionStatus status = ExecutionStatus::executed;
};

// Executor stand-in: the schedule names the outcome per action ordinal,
// `completed` beyond its end. Timeout entries report execution_error with
// status timeout.
MockExecution execute_mock(const std::vector<ExecOutcome>& schedule, std::uint64_t ordinal);

// ---------------------------------------------------------------------------
// Trace serialization: one JSON record per line after a header line.

std::string trace_to_string(const Scenario& scenario, const RunOutput& output);
void write_trace(std::ostream& out, const Scenario& scenario, const RunOutput& output);

struct LoadedTrace {
  nlohmann::json header;
  std::vector<nlohmann::json> records;
};

LoadedTrace read_trace(std::istream& in);

struct TraceDiff {
  bool equal = false;
  std::optional<std::uint64_t> first_divergence;  // ordinal (1-based); 0 = header
  std::string detail;
};

// Field-by-field comparison of logical record contents; wall-clock fields
// (keys prefixed "wall_") are ignored.
TraceDiff diff_traces(const LoadedTrace& a, const LoadedTrace& b);
TraceDiff diff_traces(const std::vector<TraceRecord>& a, const std::vector<TraceRecord>& b);

nlohmann::json record_to_json(const TraceRecord& record);
nlohmann::json report_to_json(const RunReport& report);

// Artifact snapshot document: one record per (key, version).
nlohmann::json artifacts_to_json(const std::vector<ArtifactSnapshotEntry>& artifacts);

// ---------------------------------------------------------------------------
// Liveness fuzzing.

struct FuzzReport {
  std::uint64_t seed = 0;
  std::uint64_t count = 0;
  std::uint64_t runs_completed = 0;
  std::vector<std::string> findings;  // empty = pass
  bool ok() const { return findings.empty(); }
  std::string to_text() const;  // byte-stable for a given (seed, count)
};

// Generates the index-th scenario of a fuzz stream. Deterministic in
// (seed, index); roughly 30% of scenarios are biased pathological (stale
// workers, failing judges, heavy fault schedules).
Scenario generate_scenario(std::uint64_t seed, std::uint64_t index);

// Runs `count` generated scenarios and records every liveness or soundness
// violation: a run not reaching DONE, an undefined transition, a trace record
// failing the table-lookup invariant, or a run overrunning the switch bound.
FuzzReport fuzz(std::uint64_t seed, std::uint64_t count);

}  // namespace orchestra
