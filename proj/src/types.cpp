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

#include "orchestra/types.hpp"

namespace orchestra {

std::string_view to_string(Situation s) {
  switch (s) {
    case Situation::INIT: return "INIT";
    case Situation::PLAN: return "PLAN";
    case Situation::GET_ACTION: return "GET_ACTION";
    case Situation::EXECUTE_ACTION: return "EXECUTE_ACTION";
    case Situation::QUALITY_CHECK: return "QUALITY_CHECK";
    case Situation::SUPPLEMENT: return "SUPPLEMENT";
    case Situation::FINAL_CHECK: return "FINAL_CHECK";
    case Situation::DONE: return "DONE";
  }
  return "?";
}

std::string_view to_string(TaskStatus s) {
  switch (s) {
    case TaskStatus::created: return "created";
    case TaskStatus::pending: return "pending";
    case TaskStatus::on_hold: return "on_hold";
    case TaskStatus::fulfilled: return "fulfilled";
    case TaskStatus::rejected: return "rejected";
  }
  return "?";
}

std::string_view to_string(SubtaskStatus s) {
  switch (s) {
    case SubtaskStatus::ready: return "ready";
    case SubtaskStatus::pending: return "pending";
    case SubtaskStatus::stale: return "stale";
    case SubtaskStatus::fulfilled: return "fulfilled";
    case SubtaskStatus::rejected: return "rejected";
  }
  return "?";
}

std::string_view to_string(ExecutionStatus s) {
  switch (s) {
    case ExecutionStatus::executed: return "executed";
    case ExecutionStatus::timeout: return "timeout";
    case ExecutionStatus::blocked: return "blocked";
    case ExecutionStatus::error: return "error";
  }
  return "?";
}

std::string_view to_string(WorkerRole r) {
  switch (r) {
    case WorkerRole::Operator: return "Operator";
    case WorkerRole::Technician: return "Technician";
    case WorkerRole::Analyst: return "Analyst";
  }
  return "?";
}

std::optional<Situation> situation_from_string(std::string_view text) {
  // REPLAN is a legacy alias for the unified planning situation.
  if (text == "REPLAN") return Situation::PLAN;
  for (Situation s : kAllSituations) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::optional<TaskStatus> task_status_from_string(std::string_view text) {
  for (TaskStatus s : {TaskStatus::created, TaskStatus::pending, TaskStatus::on_hold,
                       TaskStatus::fulfilled, TaskStatus::rejected}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::optional<SubtaskStatus> subtask_status_from_string(std::string_view text) {
  for (SubtaskStatus s : {SubtaskStatus::ready, SubtaskStatus::pending, SubtaskStatus::stale,
                          SubtaskStatus::fulfilled, SubtaskStatus::rejected}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::optional<ExecutionStatus> execution_status_from_string(std::string_view text) {
  for (ExecutionStatus s : {ExecutionStatus::executed, ExecutionStatus::timeout,
                            ExecutionStatus::blocked, ExecutionStatus::error}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::optional<WorkerRole> role_from_string(std::string_view text) {
  for (WorkerRole r : {WorkerRole::Operator, WorkerRole::Technician, WorkerRole::Analyst}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

}  // namespace orchestra
