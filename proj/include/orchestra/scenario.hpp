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
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "orchestra/evaluator.hpp"
#include "orchestra/plan.hpp"
#include "orchestra/rules.hpp"
#include "orchestra/worker.hpp"

namespace orchestra {

inline constexpr std::string_view kScenarioFormat = "orchestra-scenario/1";
inline constexpr std::string_view kTraceFormat = "orchestra-trace/1";

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& why) : std::runtime_error(why) {}
};

struct ValidationError : std::runtime_error {
  ValidationError(const std::string& field, const std::string& why)
      : std::runtime_error(field + ": " + why), field(field) {}
  std::string field;
};

// One entry of the scripted judge timeline. Checks consume entries in order;
// quality checks need signals/error/remediation, the final check needs a
// verdict. A wrong-kind or exhausted read degrades to the error outcome.
struct JudgeRecord {
  std::optional<JudgeSignals> signals;
  bool error = false;
  std::optional<WorkerAction> remediation;
  std::optional<FinalCheckOutcome> final_verdict;
  std::optional<SubtaskNode> new_subtask;  // for final_check_pending
  EdgeSet new_edges;
};

struct PlanFixture {
  std::vector<SubtaskNode> nodes;
  EdgeSet edges;
  bool impossible = false;
};

struct ReplanFixture {
  std::uint64_t attempt = 0;  // plan_attempts value this fixture answers
  AdjustmentLevel level = AdjustmentLevel::light;
  PlanFixture plan;
};

enum class ExecOutcome { completed, execution_error, no_command, timeout };

std::string_view to_string(ExecOutcome outcome);
std::optional<ExecOutcome> exec_outcome_from_string(std::string_view text);

struct SupplementFixture {
  bool ok = true;
  std::string text;
};

// Fault injection: replaces the component event the given occurrence of a
// situation would have produced.
struct Injection {
  Situation situation = Situation::INIT;
  std::uint64_t occurrence = 1;  // 1-based visit count
  TriggerCode trigger = TriggerCode::error_recovery;
};

// nullopt decision models a provider that produced nothing before its
// deadline; it surfaces as no_worker_decision.
using ScriptedDecision = std::optional<WorkerDecision>;

// A fully scripted, deterministic run: plans, worker decisions, judge
// signals, executor faults and knowledge lookups all come from fixtures.
struct Scenario {
  std::uint64_t seed = 0;
  std::string task_text;
  std::string observation;  // token handed to providers in place of pixels
  double logical_seconds_per_action = 1.0;
  RuleConfig rules;
  GateThresholds thresholds;
  PlanFixture plan;
  std::vector<ReplanFixture> replans;
  std::map<std::string, std::vector<ScriptedDecision>> worker_scripts;
  std::vector<JudgeRecord> judge_timeline;
  std::vector<ExecOutcome> executor_schedule;  // per action ordinal; completed beyond
  std::vector<SupplementFixture> supplements;
  std::vector<Injection> injections;
};

// JSON serde for the pieces that cross the file-format boundary.
nlohmann::json action_to_json(const WorkerAction& action);
WorkerAction action_from_json(const nlohmann::json& j);
nlohmann::json decision_to_json(const ScriptedDecision& decision);
ScriptedDecision decision_from_json(const nlohmann::json& j);
nlohmann::json node_to_json(const SubtaskNode& node);
SubtaskNode node_from_json(const nlohmann::json& j);
nlohmann::json rule_config_to_json(const RuleConfig& config);
nlohmann::json thresholds_to_json(const GateThresholds& thresholds);
nlohmann::json scenario_to_json(const Scenario& scenario);

// Parses and validates a scenario document. Throws ParseError on malformed
// text, ValidationError on a named defective field (missing seed, unknown
// subtask references, bad thresholds, ...).
Scenario load_scenario(const std::string& document);
Scenario load_scenario_file(const std::string& path);

// Digest of the canonical serialization; stamped into trace headers.
std::uint64_t scenario_digest(const Scenario& scenario);

}  // namespace orchestra
