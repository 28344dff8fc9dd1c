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

#include "orchestra/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace orchestra {

using nlohmann::json;

std::string_view to_string(ExecOutcome outcome) {
  switch (outcome) {
    case ExecOutcome::completed: return "completed";
    case ExecOutcome::execution_error: return "execution_error";
    case ExecOutcome::no_command: return "no_command";
    case ExecOutcome::timeout: return "timeout";
  }
  return "?";
}

std::optional<ExecOutcome> exec_outcome_from_string(std::string_view text) {
  for (ExecOutcome o : {ExecOutcome::completed, ExecOutcome::execution_error,
                        ExecOutcome::no_command, ExecOutcome::timeout}) {
    if (to_string(o) == text) return o;
  }
  return std::nullopt;
}

namespace {

json point_to_json(const Point& p) { return json{{"x", p.x}, {"y", p.y}}; }

Point point_from_json(const json& j) {
  return Point{j.at("x").get<int>(), j.at("y").get<int>()};
}

}  // namespace

json action_to_json(const WorkerAction& action) {
  if (const auto* script = std::get_if<TechnicianScript>(&action)) {
    return json{{"type", "script"},
                {"body", script->body},
                {"runtime", script->runtime_id},
                {"timeout_seconds", script->timeout_seconds},
                {"max_output_bytes", script->max_output_bytes}};
  }
  const auto& op = std::get<OperatorAction>(action);
  struct Visitor {
    json operator()(const act::Click& a) const {
      return {{"type", "click"}, {"at", point_to_json(a.at)}};
    }
    json operator()(const act::DoubleClick& a) const {
      return {{"type", "double_click"}, {"at", point_to_json(a.at)}};
    }
    json operator()(const act::Move& a) const {
      return {{"type", "move"}, {"at", point_to_json(a.at)}};
    }
    json operator()(const act::Drag& a) const {
      return {{"type", "drag"}, {"from", point_to_json(a.from)}, {"to", point_to_json(a.to)}};
    }
    json operator()(const act::TypeText& a) const {
      return {{"type", "type_text"}, {"text", a.text}};
    }
    json operator()(const act::Hotkey& a) const {
      return {{"type", "hotkey"}, {"keys", a.keys}};
    }
    json operator()(const act::Scroll& a) const {
      json j{{"type", "scroll"}, {"delta", a.delta}};
      if (a.at) j["at"] = point_to_json(*a.at);
      return j;
    }
    json operator()(const act::SwitchApplications& a) const {
      return {{"type", "switch_applications"}, {"target", a.target}};
    }
    json operator()(const act::SetCellValues& a) const {
      return {{"type", "set_cell_values"}, {"range", a.range}, {"values", a.values}};
    }
    json operator()(const act::Open& a) const { return {{"type", "open"}, {"path", a.path}}; }
    json operator()(const act::Screenshot&) const { return {{"type", "screenshot"}}; }
    json operator()(const act::Wait& a) const {
      return {{"type", "wait"}, {"seconds", a.seconds}};
    }
    json operator()(const act::Memorize& a) const {
      return {{"type", "memorize"}, {"key", a.key}, {"content", a.content}};
    }
  };
  return std::visit(Visitor{}, op);
}

WorkerAction action_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "script") {
    TechnicianScript script;
    script.body = j.at("body").get<std::string>();
    script.runtime_id = j.value("runtime", "bash");
    script.timeout_seconds = j.value("timeout_seconds", 30.0);
    script.max_output_bytes = j.value("max_output_bytes", std::size_t{65536});
    return script;
  }
  OperatorAction op;
  if (type == "click") {
    op = act::Click{point_from_json(j.at("at"))};
  } else if (type == "double_click") {
    op = act::DoubleClick{point_from_json(j.at("at"))};
  } else if (type == "move") {
    op = act::Move{point_from_json(j.at("at"))};
  } else if (type == "drag") {
    op = act::Drag{point_from_json(j.at("from")), point_from_json(j.at("to"))};
  } else if (type == "type_text") {
    op = act::TypeText{j.at("text").get<std::string>()};
  } else if (type == "hotkey") {
    op = act::Hotkey{j.at("keys").get<std::vector<std::string>>()};
  } else if (type == "scroll") {
    act::Scroll scroll;
    scroll.delta = j.at("delta").get<int>();
    if (j.contains("at")) scroll.at = point_from_json(j.at("at"));
    op = scroll;
  } else if (type == "switch_applications") {
    op = act::SwitchApplications{j.at("target").get<std::string>()};
  } else if (type == "set_cell_values") {
    op = act::SetCellValues{j.at("range").get<std::string>(),
                            j.at("values").get<std::vector<std::vector<std::string>>>()};
  } else if (type == "open") {
    op = act::Open{j.at("path").get<std::string>()};
  } else if (type == "screenshot") {
    op = act::Screenshot{};
  } else if (type == "wait") {
    op = act::Wait{j.at("seconds").get<double>()};
  } else if (type == "memorize") {
    op = act::Memorize{j.at("key").get<std::string>(), j.at("content").get<std::string>()};
  } else {
    throw ValidationError("action.type", "unknown action type: " + type);
  }
  return op;
}

json decision_to_json(const ScriptedDecision& decision) {
  if (!decision) return json{{"decision", "none"}};
  struct Visitor {
    json operator()(const decision::GenerateAction& d) const {
      return {{"decision", "action"}, {"action", action_to_json(d.action)}};
    }
    json operator()(const decision::Done&) const { return {{"decision", "done"}}; }
    json operator()(const decision::Failed&) const { return {{"decision", "failed"}}; }
    json operator()(const decision::CannotExecute& d) const {
      return {{"decision", "cannot_execute"}, {"reason", d.reason}};
    }
    json operator()(const decision::Supplement& d) const {
      return {{"decision", "supplement"}, {"query", d.query}};
    }
    json operator()(const decision::Stale& d) const {
      return {{"decision", "stale"}, {"reason", d.reason}};
    }
  };
  return std::visit(Visitor{}, *decision);
}

ScriptedDecision decision_from_json(const json& j) {
  const std::string kind = j.at("decision").get<std::string>();
  if (kind == "none") return std::nullopt;
  if (kind == "action") return decision::GenerateAction{action_from_json(j.at("action"))};
  if (kind == "done") return decision::Done{};
  if (kind == "failed") return decision::Failed{};
  if (kind == "cannot_execute") return decision::CannotExecute{j.value("reason", "")};
  if (kind == "supplement") return decision::Supplement{j.value("query", "")};
  if (kind == "stale") return decision::Stale{j.value("reason", "")};
  throw ValidationError("decision", "unknown decision kind: " + kind);
}

json node_to_json(const SubtaskNode& node) {
  return json{{"id", node.id},
              {"title", node.title},
              {"description", node.description},
              {"role", std::string(to_string(node.role))}};
}

SubtaskNode node_from_json(const json& j) {
  SubtaskNode node;
  node.id = j.at("id").get<std::string>();
  node.title = j.value("title", node.id);
  node.description = j.value("description", "");
  const std::string role = j.value("role", "Operator");
  auto parsed = role_from_string(role);
  if (!parsed) throw ValidationError("node.role", "unknown role: " + role);
  node.role = *parsed;
  return node;
}

json rule_config_to_json(const RuleConfig& config) {
  json j{{"quality_check_every", config.quality_check_every},
         {"repeated_action_limit", config.repeated_action_limit},
         {"long_execution_limit", config.long_execution_limit},
         {"max_state_switches", config.max_state_switches},
         {"max_plan_attempts", config.max_plan_attempts},
         {"max_runtime", config.max_runtime_seconds}};
  if (config.task_state_switch_limit) {
    j["task_state_switch_limit"] = *config.task_state_switch_limit;
  }
  return j;
}

json thresholds_to_json(const GateThresholds& thresholds) {
  return json{{"tau_done", thresholds.tau_done},
              {"tau_fail", thresholds.tau_fail},
              {"tau_supplement", thresholds.tau_supplement}};
}

namespace {

RuleConfig rule_config_from_json(const json& j) {
  RuleConfig config;
  config.quality_check_every = j.value("quality_check_every", config.quality_check_every);
  config.repeated_action_limit = j.value("repeated_action_limit", config.repeated_action_limit);
  config.long_execution_limit = j.value("long_execution_limit", config.long_execution_limit);
  config.max_state_switches = j.value("max_state_switches", config.max_state_switches);
  config.max_plan_attempts = j.value("max_plan_attempts", config.max_plan_attempts);
  config.max_runtime_seconds = j.value("max_runtime", config.max_runtime_seconds);
  if (j.contains("task_state_switch_limit")) {
    config.task_state_switch_limit = j.at("task_state_switch_limit").get<std::uint64_t>();
  }
  return config;
}

GateThresholds thresholds_from_json(const json& j) {
  GateThresholds t;
  t.tau_done = j.value("tau_done", t.tau_done);
  t.tau_fail = j.value("tau_fail", t.tau_fail);
  t.tau_supplement = j.value("tau_supplement", t.tau_supplement);
  return t;
}

EdgeSet edges_from_json(const json& j, const std::string& field) {
  EdgeSet edges;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) {
      throw ValidationError(field, "edges must be [from, to] pairs");
    }
    edges.emplace(pair[0].get<std::string>(), pair[1].get<std::string>());
  }
  return edges;
}

json edges_to_json(const EdgeSet& edges) {
  json j = json::array();
  for (const auto& [from, to] : edges) j.push_back(json::array({from, to}));
  return j;
}

PlanFixture plan_fixture_from_json(const json& j, const std::string& field) {
  PlanFixture fixture;
  fixture.impossible = j.value("impossible", false);
  if (j.contains("nodes")) {
    for (const auto& node : j.at("nodes")) fixture.nodes.push_back(node_from_json(node));
  }
  if (j.contains("edges")) fixture.edges = edges_from_json(j.at("edges"), field + ".edges");
  return fixture;
}

json plan_fixture_to_json(const PlanFixture& fixture) {
  json nodes = json::array();
  for (const auto& node : fixture.nodes) nodes.push_back(node_to_json(node));
  return json{{"impossible", fixture.impossible}, {"nodes", nodes},
              {"edges", edges_to_json(fixture.edges)}};
}

JudgeRecord judge_record_from_json(const json& j) {
  JudgeRecord record;
  if (j.contains("similarity") || j.contains("progress") || j.contains("uncertainty")) {
    JudgeSignals signals;
    signals.similarity = j.value("similarity", 0.0);
    signals.progress = j.value("progress", 0.0);
    signals.uncertainty = j.value("uncertainty", 0.0);
    record.signals = signals;
  }
  record.error = j.value("error", false);
  if (j.contains("remediation")) record.remediation = action_from_json(j.at("remediation"));
  if (j.contains("final")) {
    const std::string verdict = j.at("final").get<std::string>();
    auto outcome = final_check_outcome_from_string(
        verdict.rfind("final_check_", 0) == 0 || verdict == "task_impossible"
            ? verdict
            : "final_check_" + verdict);
    if (verdict == "impossible") outcome = FinalCheckOutcome::task_impossible;
    if (!outcome) throw ValidationError("judge.final", "unknown verdict: " + verdict);
    record.final_verdict = outcome;
    if (j.contains("subtask")) record.new_subtask = node_from_json(j.at("subtask"));
    if (j.contains("edges")) record.new_edges = edges_from_json(j.at("edges"), "judge.edges");
  }
  return record;
}

json judge_record_to_json(const JudgeRecord& record) {
  json j = json::object();
  if (record.signals) {
    j["similarity"] = record.signals->similarity;
    j["progress"] = record.signals->progress;
    j["uncertainty"] = record.signals->uncertainty;
  }
  if (record.error) j["error"] = true;
  if (record.remediation) j["remediation"] = action_to_json(*record.remediation);
  if (record.final_verdict) {
    j["final"] = std::string(to_string(*record.final_verdict));
    if (record.new_subtask) j["subtask"] = node_to_json(*record.new_subtask);
    if (!record.new_edges.empty()) j["edges"] = edges_to_json(record.new_edges);
  }
  return j;
}

}  // namespace

json scenario_to_json(const Scenario& scenario) {
  json j;
  j["format"] = std::string(kScenarioFormat);
  j["seed"] = scenario.seed;
  j["task"] = scenario.task_text;
  j["observation"] = scenario.observation;
  j["logical_seconds_per_action"] = scenario.logical_seconds_per_action;
  j["rules"] = rule_config_to_json(scenario.rules);
  j["thresholds"] = thresholds_to_json(scenario.thresholds);
  j["plan"] = plan_fixture_to_json(scenario.plan);

  json replans = json::array();
  for (const auto& replan : scenario.replans) {
    json r = plan_fixture_to_json(replan.plan);
    r["attempt"] = replan.attempt;
    r["level"] = std::string(to_string(replan.level));
    replans.push_back(r);
  }
  j["replans"] = replans;

  json workers = json::object();
  for (const auto& [id, decisions] : scenario.worker_scripts) {
    json list = json::array();
    for (const auto& decision : decisions) list.push_back(decision_to_json(decision));
    workers[id] = list;
  }
  j["workers"] = workers;

  json judge = json::array();
  for (const auto& record : scenario.judge_timeline) judge.push_back(judge_record_to_json(record));
  j["judge"] = judge;

  json executor = json::array();
  for (ExecOutcome outcome : scenario.executor_schedule) {
    executor.push_back(std::string(to_string(outcome)));
  }
  j["executor"] = executor;

  json supplements = json::array();
  for (const auto& s : scenario.supplements) {
    supplements.push_back(json{{"ok", s.ok}, {"text", s.text}});
  }
  j["supplements"] = supplements;

  json injections = json::array();
  for (const auto& inj : scenario.injections) {
    injections.push_back(json{{"situation", std::string(to_string(inj.situation))},
                              {"occurrence", inj.occurrence},
                              {"trigger", std::string(to_string(inj.trigger))}});
  }
  j["injections"] = injections;
  return j;
}

namespace {

void validate_scenario(const Scenario& scenario) {
  if (!scenario.rules.valid()) {
    throw ValidationError("rules", "thresholds must be >= 1 and max_runtime > 0");
  }
  if (!scenario.thresholds.valid()) {
    throw ValidationError("thresholds", "require 0 <= tau_fail < tau_done <= 1 and tau_supplement in [0,1]");
  }
  if (scenario.logical_seconds_per_action <= 0) {
    throw ValidationError("logical_seconds_per_action", "must be > 0");
  }

  // Every id referenced anywhere must come from some plan fixture.
  std::set<std::string> known_ids;
  for (const auto& node : scenario.plan.nodes) known_ids.insert(node.id);
  for (const auto& replan : scenario.replans) {
    for (const auto& node : replan.plan.nodes) known_ids.insert(node.id);
  }
  for (const auto& record : scenario.judge_timeline) {
    if (record.new_subtask) known_ids.insert(record.new_subtask->id);
    if (record.final_verdict && *record.final_verdict == FinalCheckOutcome::final_check_pending &&
        !record.new_subtask) {
      throw ValidationError("judge.final", "pending verdict requires a new subtask");
    }
  }
  for (const auto& [id, decisions] : scenario.worker_scripts) {
    if (!known_ids.count(id)) {
      throw ValidationError("workers", "script references unknown subtask id: " + id);
    }
    for (const auto& decision : decisions) {
      if (!decision) continue;
      if (const auto* generate = std::get_if<decision::GenerateAction>(&*decision)) {
        if (auto why = validate_action(generate->action)) {
          throw ValidationError("workers." + id, *why);
        }
      }
    }
  }
  for (const auto& inj : scenario.injections) {
    if (inj.situation == Situation::DONE) {
      throw ValidationError("injections", "cannot inject into DONE");
    }
    if (inj.occurrence < 1) throw ValidationError("injections", "occurrence is 1-based");
  }
}

}  // namespace

Scenario load_scenario(const std::string& document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }

  try {
    if (!j.contains("format") || j.at("format").get<std::string>() != kScenarioFormat) {
      throw ValidationError("format", "expected \"" + std::string(kScenarioFormat) + "\"");
    }
    if (!j.contains("seed")) {
      throw ValidationError("seed", "required (replay determinism needs an explicit seed)");
    }
    if (!j.contains("task")) throw ValidationError("task", "required");

    Scenario scenario;
    scenario.seed = j.at("seed").get<std::uint64_t>();
    scenario.task_text = j.at("task").get<std::string>();
    scenario.observation = j.value("observation", "");
    scenario.logical_seconds_per_action =
        j.value("logical_seconds_per_action", scenario.logical_seconds_per_action);
    if (j.contains("rules")) scenario.rules = rule_config_from_json(j.at("rules"));
    if (j.contains("thresholds")) scenario.thresholds = thresholds_from_json(j.at("thresholds"));
    if (j.contains("plan")) scenario.plan = plan_fixture_from_json(j.at("plan"), "plan");

    if (j.contains("replans")) {
      for (const auto& r : j.at("replans")) {
        ReplanFixture fixture;
        fixture.attempt = r.at("attempt").get<std::uint64_t>();
        const std::string level = r.value("level", "light");
        auto parsed = adjustment_level_from_string(level);
        if (!parsed) throw ValidationError("replans.level", "unknown level: " + level);
        fixture.level = *parsed;
        fixture.plan = plan_fixture_from_json(r, "replans");
        scenario.replans.push_back(std::move(fixture));
      }
    }
    if (j.contains("workers")) {
      for (const auto& [id, list] : j.at("workers").items()) {
        std::vector<ScriptedDecision> decisions;
        for (const auto& d : list) decisions.push_back(decision_from_json(d));
        scenario.worker_scripts.emplace(id, std::move(decisions));
      }
    }
    if (j.contains("judge")) {
      for (const auto& record : j.at("judge")) {
        scenario.judge_timeline.push_back(judge_record_from_json(record));
      }
    }
    if (j.contains("executor")) {
      for (const auto& entry : j.at("executor")) {
        auto outcome = exec_outcome_from_string(entry.get<std::string>());
        if (!outcome) {
          throw ValidationError("executor", "unknown outcome: " + entry.get<std::string>());
        }
        scenario.executor_schedule.push_back(*outcome);
      }
    }
    if (j.contains("supplements")) {
      for (const auto& s : j.at("supplements")) {
        scenario.supplements.push_back({s.value("ok", true), s.value("text", "")});
      }
    }
    if (j.contains("injections")) {
      for (const auto& inj : j.at("injections")) {
        Injection injection;
        const std::string situation = inj.at("situation").get<std::string>();
        auto parsed_situation = situation_from_string(situation);
        if (!parsed_situation) {
          throw ValidationError("injections.situation", "unknown situation: " + situation);
        }
        injection.situation = *parsed_situation;
        injection.occurrence = inj.value("occurrence", std::uint64_t{1});
        const std::string trigger = inj.at("trigger").get<std::string>();
        auto parsed_trigger = trigger_from_string(trigger);
        if (!parsed_trigger) {
          throw ValidationError("injections.trigger", "unknown trigger: " + trigger);
        }
        injection.trigger = *parsed_trigger;
        scenario.injections.push_back(injection);
      }
    }

    validate_scenario(scenario);
    return scenario;
  } catch (const json::exception& e) {
    throw ValidationError("document", e.what());
  }
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_scenario(buffer.str());
}

std::uint64_t scenario_digest(const Scenario& scenario) {
  return fnv1a64(scenario_to_json(scenario).dump());
}

}  // namespace orchestra
