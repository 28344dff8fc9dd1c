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

#include <random>
#include <sstream>

#include "orchestra/harness.hpp"

namespace orchestra {

namespace {

// Modulo draws on the raw mt19937_64 stream keep generation portable across
// standard libraries (distribution objects are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {  // inclusive
    return lo + below(hi - lo + 1);
  }
  bool chance(double p) { return static_cast<double>(engine_()) / kMax < p; }
  double unit() { return static_cast<double>(engine_()) / kMax; }

 private:
  static constexpr double kMax = 18446744073709551616.0;  // 2^64
  std::mt19937_64 engine_;
};

WorkerAction random_action(Rng& rng) {
  switch (rng.below(6)) {
    case 0: return OperatorAction{act::Click{{int(rng.below(800)), int(rng.below(600))}}};
    case 1: return OperatorAction{act::TypeText{"text-" + std::to_string(rng.below(100))}};
    case 2: return OperatorAction{act::Hotkey{{"ctrl", std::string(1, char('a' + rng.below(26)))}}};
    case 3: return OperatorAction{act::Scroll{int(rng.below(10)) - 5, std::nullopt}};
    case 4:
      return OperatorAction{act::Memorize{"note-" + std::to_string(rng.below(4)),
                                          "content-" + std::to_string(rng.below(100))}};
    default:
      return TechnicianScript{.body = "echo " + std::to_string(rng.below(100)),
                              .runtime_id = "bash"};
  }
}

std::vector<ScriptedDecision> random_script(Rng& rng, bool pathological) {
  std::vector<ScriptedDecision> script;
  if (pathological && rng.chance(0.5)) {
    // Always-stale worker.
    script.push_back(decision::Stale{"stuck"});
    return script;
  }
  std::uint64_t actions = rng.between(0, 5);
  if (pathological && rng.chance(0.5)) {
    // Stagnating worker: one action repeated past the rule limit.
    WorkerAction repeated = random_action(rng);
    for (int i = 0; i < 6; ++i) script.push_back(decision::GenerateAction{repeated});
  } else {
    for (std::uint64_t i = 0; i < actions; ++i) {
      script.push_back(decision::GenerateAction{random_action(rng)});
    }
  }
  switch (rng.below(10)) {
    case 0: script.push_back(decision::Failed{}); break;
    case 1: script.push_back(decision::CannotExecute{"unsupported"}); break;
    case 2: script.push_back(decision::Supplement{"need docs"}); break;
    case 3: script.push_back(decision::Stale{"no idea"}); break;
    case 4: script.push_back(std::nullopt); break;  // provider deadline expiry
    default: script.push_back(decision::Done{}); break;
  }
  return script;
}

JudgeRecord random_judge_record(Rng& rng, bool pathological, std::uint64_t fresh_id) {
  JudgeRecord record;
  if (rng.chance(pathological ? 0.2 : 0.05)) {
    record.error = true;
    return record;
  }
  if (rng.chance(0.05)) {
    record.remediation = random_action(rng);
    return record;
  }
  JudgeSignals signals;
  if (pathological) {
    // Failing judge: progress pinned below any sane tau_fail.
    signals.similarity = rng.unit() * 0.5;
    signals.progress = 0.0;
    signals.uncertainty = rng.unit();
  } else {
    signals.similarity = rng.unit();
    signals.progress = rng.unit();
    signals.uncertainty = rng.unit();
  }
  record.signals = signals;

  // Most records double as final verdicts so the timeline serves whichever
  // check reads it next.
  if (rng.chance(0.9)) {
    switch (rng.below(10)) {
      case 0:
        record.final_verdict = FinalCheckOutcome::final_check_failed;
        break;
      case 1: {
        record.final_verdict = FinalCheckOutcome::final_check_pending;
        SubtaskNode node;
        node.id = "z" + std::to_string(fresh_id);
        node.title = "discovered step";
        node.role = WorkerRole::Operator;
        record.new_subtask = node;
        break;
      }
      case 2: record.final_verdict = FinalCheckOutcome::final_check_error; break;
      case 3: record.final_verdict = FinalCheckOutcome::task_impossible; break;
      default: record.final_verdict = FinalCheckOutcome::final_check_passed; break;
    }
  }
  return record;
}

}  // namespace

Scenario generate_scenario(std::uint64_t seed, std::uint64_t index) {
  Rng rng(fnv1a64("fuzz-scenario" + std::to_string(seed) + "/" + std::to_string(index)));
  bool pathological = rng.chance(0.3);

  Scenario scenario;
  scenario.seed = seed * 1000003 + index;
  scenario.task_text = "fuzz task #" + std::to_string(index);
  scenario.observation = "obs-" + std::to_string(rng.below(1000));

  std::uint64_t node_count = rng.between(1, 6);
  for (std::uint64_t i = 0; i < node_count; ++i) {
    SubtaskNode node;
    node.id = "s" + std::to_string(i + 1);
    node.title = "step " + std::to_string(i + 1);
    node.description = "generated subtask " + std::to_string(i + 1);
    node.role = static_cast<WorkerRole>(rng.below(3));
    scenario.plan.nodes.push_back(node);
  }
  for (std::uint64_t i = 0; i < node_count; ++i) {
    for (std::uint64_t j = i + 1; j < node_count; ++j) {
      if (rng.chance(0.3)) {
        scenario.plan.edges.emplace("s" + std::to_string(i + 1), "s" + std::to_string(j + 1));
      }
    }
  }
  if (rng.chance(0.02)) {
    scenario.plan.impossible = true;
    scenario.plan.nodes.clear();
    scenario.plan.edges.clear();
  }

  std::uint64_t fresh = 1;
  for (const SubtaskNode& node : scenario.plan.nodes) {
    scenario.worker_scripts[node.id] = random_script(rng, pathological);
  }

  std::uint64_t timeline_length = rng.between(10, 40);
  for (std::uint64_t i = 0; i < timeline_length; ++i) {
    scenario.judge_timeline.push_back(random_judge_record(rng, pathological, fresh));
    if (scenario.judge_timeline.back().new_subtask) {
      scenario.worker_scripts[scenario.judge_timeline.back().new_subtask->id] =
          random_script(rng, false);
      fresh += 1;
    }
  }

  std::uint64_t schedule_length = rng.between(0, 20);
  double fault_rate = pathological ? 0.4 : 0.2;
  for (std::uint64_t i = 0; i < schedule_length; ++i) {
    if (rng.chance(fault_rate)) {
      switch (rng.below(3)) {
        case 0: scenario.executor_schedule.push_back(ExecOutcome::execution_error); break;
        case 1: scenario.executor_schedule.push_back(ExecOutcome::no_command); break;
        default: scenario.executor_schedule.push_back(ExecOutcome::timeout); break;
      }
    } else {
      scenario.executor_schedule.push_back(ExecOutcome::completed);
    }
  }

  std::uint64_t supplement_count = rng.between(0, 3);
  for (std::uint64_t i = 0; i < supplement_count; ++i) {
    scenario.supplements.push_back(
        {rng.chance(0.7), "looked-up fact " + std::to_string(rng.below(100))});
  }

  if (rng.chance(0.2)) {
    // One heavy re-decomposition fixture with fresh nodes and scripts.
    ReplanFixture fixture;
    fixture.attempt = rng.between(2, 4);
    fixture.level = AdjustmentLevel::heavy;
    std::uint64_t replan_nodes = rng.between(1, 3);
    for (std::uint64_t i = 0; i < replan_nodes; ++i) {
      SubtaskNode node;
      node.id = "r" + std::to_string(i + 1);
      node.title = "replanned step " + std::to_string(i + 1);
      node.role = static_cast<WorkerRole>(rng.below(3));
      fixture.plan.nodes.push_back(node);
      scenario.worker_scripts[node.id] = random_script(rng, false);
    }
    scenario.replans.push_back(fixture);
  }

  if (rng.chance(0.05)) {
    // Tight logical runtime to exercise the runtime bound.
    scenario.logical_seconds_per_action = 300.0;
    scenario.rules.max_runtime_seconds = 900.0;
  }
  return scenario;
}

namespace {

void check_run(std::uint64_t index, const Scenario& scenario, const RunOutput& output,
               std::vector<std::string>& findings) {
  auto flag = [&](const std::string& what) {
    std::ostringstream f;
    f << "scenario " << index << ": " << what;
    findings.push_back(f.str());
  };

  if (output.final_state.situation != Situation::DONE) {
    flag("did not reach DONE");
  }
  if (output.undefined_transitions != 0) {
    flag("hit " + std::to_string(output.undefined_transitions) + " undefined transitions");
  }
  if (output.trace.size() > scenario.rules.max_state_switches + 1) {
    flag("trace overruns the switch bound: " + std::to_string(output.trace.size()) + " records");
  }
  if (output.final_state.counters.state_switches != output.trace.size()) {
    flag("switch counter disagrees with trace length");
  }

  for (std::size_t i = 0; i < output.trace.size(); ++i) {
    const TraceRecord& record = output.trace[i];
    if (record.ordinal != i + 1) {
      flag("ordinal gap at record " + std::to_string(i + 1));
      break;
    }
    try {
      if (next_situation(record.before, record.trigger) != record.after) {
        flag("record " + std::to_string(record.ordinal) + " target mismatch");
        break;
      }
    } catch (const std::exception&) {
      flag("record " + std::to_string(record.ordinal) + " has no table entry");
      break;
    }
  }

  if (!output.trace.empty()) {
    TriggerCode terminal = output.trace.back().trigger;
    if (trigger_info(terminal).target != Situation::DONE &&
        !(output.trace.back().before == Situation::PLAN &&
          terminal == TriggerCode::task_impossible)) {
      flag("terminal trigger does not target DONE");
    }
    for (std::size_t i = 0; i + 1 < output.trace.size(); ++i) {
      TriggerCode code = output.trace[i].trigger;
      if (classify_trigger(code) == TriggerCategory::TaskStatusRules) {
        flag("bound trigger fired mid-run at record " + std::to_string(i + 1));
        break;
      }
    }
  }
}

}  // namespace

FuzzReport fuzz(std::uint64_t seed, std::uint64_t count) {
  if (count < 1) throw std::invalid_argument("fuzz count must be >= 1");
  FuzzReport report;
  report.seed = seed;
  report.count = count;
  for (std::uint64_t i = 0; i < count; ++i) {
    Scenario scenario = generate_scenario(seed, i);
    RunOutput output = run(scenario);
    check_run(i, scenario, output, report.findings);
    report.runs_completed += 1;
  }
  return report;
}

std::string FuzzReport::to_text() const {
  std::ostringstream out;
  out << "fuzz-report seed=" << seed << " count=" << count << '\n';
  out << "runs_completed=" << runs_completed << '\n';
  out << "findings=" << findings.size() << '\n';
  for (const std::string& finding : findings) out << finding << '\n';
  return out.str();
}

}  // namespace orchestra
