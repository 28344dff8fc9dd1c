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

#include "orchestra/state.hpp"

namespace orchestra {

Counters record_event(Counters counters, const CounterEvent& event) {
  struct Visitor {
    Counters& c;

    void operator()(const ev::ActionExecuted& e) {
      c.steps_since_quality_check += 1;
      c.current_subtask_actions += 1;
      if (c.last_action_fingerprint && *c.last_action_fingerprint == e.fingerprint) {
        c.repeated_action_run += 1;
      } else {
        c.repeated_action_run = 1;
      }
      c.last_action_fingerprint = e.fingerprint;
    }
    void operator()(const ev::StateSwitched&) { c.state_switches += 1; }
    void operator()(const ev::PlanAttempted&) { c.plan_attempts += 1; }
    void operator()(const ev::QualityCheckRan&) {
      c.steps_since_quality_check = 0;
      // The check consumed the current stagnation evidence; the run restarts
      // from the last action rather than re-firing on every later switch.
      c.repeated_action_run = c.last_action_fingerprint ? 1 : 0;
    }
    void operator()(const ev::SubtaskChanged&) {
      c.current_subtask_actions = 0;
      c.repeated_action_run = 0;
      c.last_action_fingerprint.reset();
    }
  };
  std::visit(Visitor{counters}, event);
  return counters;
}

}  // namespace orchestra
