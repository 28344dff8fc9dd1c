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

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace orchestra {

// Controller situations. DONE is terminal; every other situation appears as a
// source in the transition table. REPLAN is accepted as an input alias of PLAN.
enum class Situation {
  INIT,
  PLAN,
  GET_ACTION,
  EXECUTE_ACTION,
  QUALITY_CHECK,
  SUPPLEMENT,
  FINAL_CHECK,
  DONE,
};

inline constexpr std::array<Situation, 8> kAllSituations = {
    Situation::INIT,          Situation::PLAN,
    Situation::GET_ACTION,    Situation::EXECUTE_ACTION,
    Situation::QUALITY_CHECK, Situation::SUPPLEMENT,
    Situation::FINAL_CHECK,   Situation::DONE,
};

enum class TaskStatus { created, pending, on_hold, fulfilled, rejected };

enum class SubtaskStatus { ready, pending, stale, fulfilled, rejected };

enum class ExecutionStatus { executed, timeout, blocked, error };

enum class WorkerRole { Operator, Technician, Analyst };

// Serialized forms: situations uppercase, statuses lowercase, roles capitalized.
std::string_view to_string(Situation s);
std::string_view to_string(TaskStatus s);
std::string_view to_string(SubtaskStatus s);
std::string_view to_string(ExecutionStatus s);
std::string_view to_string(WorkerRole r);

std::optional<Situation> situation_from_string(std::string_view text);
std::optional<TaskStatus> task_status_from_string(std::string_view text);
std::optional<SubtaskStatus> subtask_status_from_string(std::string_view text);
std::optional<ExecutionStatus> execution_status_from_string(std::string_view text);
std::optional<WorkerRole> role_from_string(std::string_view text);

inline bool is_terminal(TaskStatus s) {
  return s == TaskStatus::fulfilled || s == TaskStatus::rejected;
}

inline bool is_terminal(SubtaskStatus s) {
  return s == SubtaskStatus::fulfilled || s == SubtaskStatus::rejected;
}

}  // namespace orchestra
