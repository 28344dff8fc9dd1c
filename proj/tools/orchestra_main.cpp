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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orchestra/harness.hpp"
#include "orchestra/scenario.hpp"
#include "orchestra/transition.hpp"

namespace {

using nlohmann::json;
using namespace orchestra;

constexpr int kExitUsage = 64;
constexpr int kExitBadScenario = 65;

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), curr(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    curr[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, sub});
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

std::string nearest_trigger(const std::string& name) {
  std::string best;
  std::size_t best_distance = SIZE_MAX;
  for (const TriggerInfo& info : trigger_table()) {
    std::size_t d = edit_distance(name, info.name);
    if (d < best_distance) {
      best_distance = d;
      best = info.name;
    }
  }
  return best;
}

std::string row_source(const TransitionRow& row) {
  return row.source ? std::string(to_string(*row.source)) : "*";
}

json table_to_json(const TransitionTable& table) {
  json rows = json::array();
  for (const TransitionRow& row : table.rows) {
    rows.push_back(json{{"source", row_source(row)},
                        {"trigger", std::string(to_string(row.code))},
                        {"target", std::string(to_string(row.target))}});
  }
  return json{{"format", "orchestra-table/1"}, {"rows", rows}};
}

TransitionTable table_from_json(const json& j) {
  TransitionTable table;
  for (const auto& row : j.at("rows")) {
    TransitionRow r;
    const std::string source = row.at("source").get<std::string>();
    if (source != "*") {
      auto parsed = situation_from_string(source);
      if (!parsed) throw ValidationError("rows.source", "unknown situation: " + source);
      r.source = *parsed;
    }
    auto code = trigger_from_string(row.at("trigger").get<std::string>());
    if (!code) throw ValidationError("rows.trigger", "unknown trigger");
    r.code = *code;
    auto target = situation_from_string(row.at("target").get<std::string>());
    if (!target) throw ValidationError("rows.target", "unknown situation");
    r.target = *target;
    table.rows.push_back(r);
  }
  return table;
}

struct RunOptions {
  std::string scenario_path;
  std::string trace_out;
  std::string artifacts_out;
  std::string format = "text";
};

struct RuleOverrides {
  std::uint64_t quality_check_every = 0;
  std::uint64_t repeated_action_limit = 0;
  std::uint64_t long_execution_limit = 0;
  std::uint64_t max_state_switches = 0;
  std::uint64_t max_plan_attempts = 0;
  double max_runtime_seconds = 0;
  std::uint64_t task_state_switch_limit = 0;
};

void add_rule_flags(CLI::App* cmd, RuleOverrides& overrides) {
  cmd->add_option("--quality-check-every", overrides.quality_check_every,
                  "Periodic quality check cadence (executed actions)")
      ->envname("ORCHESTRA_QUALITY_CHECK_EVERY");
  cmd->add_option("--repeated-action-limit", overrides.repeated_action_limit,
                  "Identical-action run length that triggers a check when exceeded")
      ->envname("ORCHESTRA_REPEATED_ACTION_LIMIT");
  cmd->add_option("--long-execution-limit", overrides.long_execution_limit,
                  "Per-subtask action budget that triggers replanning when exceeded")
      ->envname("ORCHESTRA_LONG_EXECUTION_LIMIT");
  cmd->add_option("--max-state-switches", overrides.max_state_switches,
                  "Global switch bound; the run terminates when reached")
      ->envname("ORCHESTRA_MAX_STATE_SWITCHES");
  cmd->add_option("--max-plan-attempts", overrides.max_plan_attempts,
                  "Planning attempts allowed before the run terminates")
      ->envname("ORCHESTRA_MAX_PLAN_ATTEMPTS");
  cmd->add_option("--max-runtime-seconds", overrides.max_runtime_seconds,
                  "Logical runtime bound in seconds")
      ->envname("ORCHESTRA_MAX_RUNTIME_SECONDS");
  cmd->add_option("--task-state-switch-limit", overrides.task_state_switch_limit,
                  "Optional per-task switch ceiling below the global bound")
      ->envname("ORCHESTRA_TASK_STATE_SWITCH_LIMIT");
}

void apply_rule_overrides(const CLI::App* cmd, const RuleOverrides& overrides,
                          RuleConfig& rules) {
  if (cmd->count("--quality-check-every")) rules.quality_check_every = overrides.quality_check_every;
  if (cmd->count("--repeated-action-limit")) rules.repeated_action_limit = overrides.repeated_action_limit;
  if (cmd->count("--long-execution-limit")) rules.long_execution_limit = overrides.long_execution_limit;
  if (cmd->count("--max-state-switches")) rules.max_state_switches = overrides.max_state_switches;
  if (cmd->count("--max-plan-attempts")) rules.max_plan_attempts = overrides.max_plan_attempts;
  if (cmd->count("--max-runtime-seconds")) rules.max_runtime_seconds = overrides.max_runtime_seconds;
  if (cmd->count("--task-state-switch-limit")) {
    rules.task_state_switch_limit = overrides.task_state_switch_limit;
  }
}

int cmd_run(const CLI::App* cmd, const RunOptions& options, const RuleOverrides& overrides) {
  Scenario scenario;
  try {
    scenario = load_scenario_file(options.scenario_path);
  } catch (const std::exception& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kExitBadScenario;
  }
  apply_rule_overrides(cmd, overrides, scenario.rules);
  if (!scenario.rules.valid()) {
    std::cerr << "scenario error: rule overrides out of range\n";
    return kExitBadScenario;
  }

  RunOutput output = run(scenario);

  if (!options.trace_out.empty()) {
    std::ofstream out(options.trace_out);
    if (!out) {
      std::cerr << "cannot write trace: " << options.trace_out << '\n';
      return kExitBadScenario;
    }
    write_trace(out, scenario, output);
  }
  if (!options.artifacts_out.empty()) {
    std::ofstream out(options.artifacts_out);
    if (!out) {
      std::cerr << "cannot write artifacts: " << options.artifacts_out << '\n';
      return kExitBadScenario;
    }
    out << artifacts_to_json(output.artifacts).dump(2) << '\n';
  }

  if (options.format == "structured") {
    std::cout << report_to_json(output.report).dump() << '\n';
  } else {
    const RunReport& r = output.report;
    std::cout << "terminal trigger : " << to_string(r.terminal_trigger) << '\n'
              << "outcome          : " << r.outcome << '\n'
              << "state switches   : " << r.total_switches << '\n'
              << "actions executed : " << r.actions_executed << '\n'
              << "plan attempts    : " << r.plan_attempts << '\n';
    for (const auto& [kind, count] : r.quality_checks) {
      std::cout << "quality checks   : " << kind << " x" << count << '\n';
    }
    std::cout << "logical duration : " << r.logical_duration << " s\n";
  }
  return output.report.exit_code;
}

int cmd_validate_table(const std::string& format, const std::string& table_path,
                       const std::string& inject_defect) {
  TransitionTable table;
  if (!table_path.empty()) {
    std::ifstream in(table_path);
    if (!in) {
      std::cerr << "cannot read table: " << table_path << '\n';
      return kExitBadScenario;
    }
    try {
      json j;
      in >> j;
      table = table_from_json(j);
    } catch (const std::exception& e) {
      std::cerr << "table error: " << e.what() << '\n';
      return kExitBadScenario;
    }
  } else {
    table = canonical_table();
  }

  if (!inject_defect.empty()) {
    if (inject_defect.rfind("drop=", 0) == 0) {
      auto code = trigger_from_string(inject_defect.substr(5));
      if (!code) {
        std::cerr << "unknown trigger in --inject-defect\n";
        return kExitUsage;
      }
      std::erase_if(table.rows, [&](const TransitionRow& row) { return row.code == *code; });
    } else if (inject_defect == "extra") {
      table.rows.push_back({Situation::DONE, TriggerCode::rule_task_completed, Situation::DONE});
    } else {
      std::cerr << "--inject-defect expects drop=<trigger> or extra\n";
      return kExitUsage;
    }
  }

  TableValidation validation = validate_table(table);

  if (format == "structured") {
    json j = table_to_json(table);
    j["ok"] = validation.ok;
    j["verified_rows"] = validation.verified_rows;
    j["missing"] = validation.missing;
    j["extras"] = validation.extras;
    j["unreachable"] = validation.unreachable;
    std::cout << j.dump(2) << '\n';
  } else {
    for (const TransitionRow& row : table.rows) {
      const TriggerInfo& info = trigger_info(row.code);
      std::cout << row_source(row) << " --" << info.name << "--> " << to_string(row.target)
                << "  [" << to_string(info.category) << "]\n";
    }
    if (validation.ok) {
      std::cout << validation.verified_rows << " rows verified\n";
    } else {
      for (const auto& m : validation.missing) std::cout << "missing: " << m << '\n';
      for (const auto& e : validation.extras) std::cout << "extra: " << e << '\n';
      for (const auto& u : validation.unreachable) std::cout << "unreachable: " << u << '\n';
    }
  }
  return validation.ok ? 0 : 1;
}

int cmd_explain(const std::string& code_name, const std::string& format) {
  auto code = trigger_from_string(code_name);
  if (!code) {
    std::cerr << "unknown trigger code: " << code_name << '\n'
              << "did you mean: " << nearest_trigger(code_name) << "?\n";
    return 1;
  }
  const TriggerInfo& info = trigger_info(*code);
  if (format == "structured") {
    std::cout << json{{"code", info.name},
                      {"category", std::string(to_string(info.category))},
                      {"description", info.description},
                      {"target", std::string(to_string(info.target))}}
                     .dump()
              << '\n';
  } else {
    std::cout << info.name << " [" << to_string(info.category) << "]\n"
              << info.description << " -> " << to_string(info.target) << '\n';
  }
  return 0;
}

int cmd_fuzz(std::uint64_t seed, std::uint64_t count, const std::string& format) {
  FuzzReport report = fuzz(seed, count);
  if (format == "structured") {
    std::cout << json{{"seed", report.seed},
                      {"count", report.count},
                      {"runs_completed", report.runs_completed},
                      {"findings", report.findings}}
                     .dump()
              << '\n';
  } else {
    std::cout << report.to_text();
  }
  return report.ok() ? 0 : 1;
}

int cmd_diff(const std::string& path_a, const std::string& path_b) {
  std::ifstream in_a(path_a), in_b(path_b);
  if (!in_a || !in_b) {
    std::cerr << "cannot open trace file\n";
    return kExitBadScenario;
  }
  LoadedTrace a, b;
  try {
    a = read_trace(in_a);
    b = read_trace(in_b);
  } catch (const std::exception& e) {
    std::cerr << "trace error: " << e.what() << '\n';
    return kExitBadScenario;
  }
  TraceDiff diff = diff_traces(a, b);
  if (diff.equal) {
    std::cout << "traces equal (" << a.records.size() << " records)\n";
    return 0;
  }
  std::cout << "traces diverge: " << diff.detail;
  if (diff.first_divergence) std::cout << " (first divergence at " << *diff.first_divergence << ")";
  std::cout << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic FSM orchestration kernel"};
  app.require_subcommand(1);

  RunOptions run_options;
  RuleOverrides overrides;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario and write its trace");
  run_cmd->add_option("--scenario", run_options.scenario_path, "Scenario document path")
      ->required()
      ->envname("ORCHESTRA_SCENARIO");
  run_cmd->add_option("--trace-out", run_options.trace_out, "Trace output path (JSONL)")
      ->envname("ORCHESTRA_TRACE_OUT");
  run_cmd->add_option("--artifacts-out", run_options.artifacts_out,
                      "Artifact store snapshot output path")
      ->envname("ORCHESTRA_ARTIFACTS_OUT");
  run_cmd->add_option("--format", run_options.format, "Report format: text or structured")
      ->check(CLI::IsMember({"text", "structured"}))
      ->envname("ORCHESTRA_FORMAT");
  add_rule_flags(run_cmd, overrides);

  std::string table_format = "text";
  std::string table_path;
  std::string inject_defect;
  CLI::App* table_cmd =
      app.add_subcommand("validate-table", "Audit the transition table against the reference");
  table_cmd->add_option("--format", table_format, "Output format: text or structured")
      ->check(CLI::IsMember({"text", "structured"}))
      ->envname("ORCHESTRA_FORMAT");
  table_cmd->add_option("--table", table_path, "Validate an external table document")
      ->envname("ORCHESTRA_TABLE");
  table_cmd->add_option("--inject-defect", inject_defect,
                        "Test hook: drop=<trigger> removes a row, extra adds an illegal one")
      ->envname("ORCHESTRA_INJECT_DEFECT");

  std::string explain_code;
  std::string explain_format = "text";
  CLI::App* explain_cmd = app.add_subcommand("explain", "Describe one trigger code");
  explain_cmd->add_option("code", explain_code, "Trigger code name")->required();
  explain_cmd->add_option("--format", explain_format, "Output format: text or structured")
      ->check(CLI::IsMember({"text", "structured"}))
      ->envname("ORCHESTRA_FORMAT");

  std::uint64_t fuzz_seed = 42;
  std::uint64_t fuzz_count = 1000;
  std::string fuzz_format = "text";
  CLI::App* fuzz_cmd = app.add_subcommand("fuzz", "Generate and run random scenarios");
  fuzz_cmd->add_option("--seed", fuzz_seed, "Fuzz stream seed")->envname("ORCHESTRA_SEED");
  fuzz_cmd->add_option("--count", fuzz_count, "Number of scenarios")
      ->check(CLI::PositiveNumber)
      ->envname("ORCHESTRA_COUNT");
  fuzz_cmd->add_option("--format", fuzz_format, "Output format: text or structured")
      ->check(CLI::IsMember({"text", "structured"}))
      ->envname("ORCHESTRA_FORMAT");

  std::string diff_a, diff_b;
  CLI::App* diff_cmd = app.add_subcommand("diff", "Compare two trace files");
  diff_cmd->add_option("a", diff_a, "First trace")->required();
  diff_cmd->add_option("b", diff_b, "Second trace")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_cmd, run_options, overrides);
    if (table_cmd->parsed()) return cmd_validate_table(table_format, table_path, inject_defect);
    if (explain_cmd->parsed()) return cmd_explain(explain_code, explain_format);
    if (fuzz_cmd->parsed()) return cmd_fuzz(fuzz_seed, fuzz_count, fuzz_format);
    if (diff_cmd->parsed()) return cmd_diff(diff_a, diff_b);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
