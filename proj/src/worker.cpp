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

#include "orchestra/worker.hpp"

#include <sstream>

namespace orchestra {

std::uint64_t ArtifactStore::write(const std::string& key, std::string content,
                                   WorkerRole author, double now) {
  if (key.empty()) throw EmptyKey();
  std::lock_guard<std::mutex> lock(mutex_);
  auto& versions = entries_[key];
  versions.push_back({.content = std::move(content), .author = author, .written_at = now});
  return versions.size();
}

const ArtifactStore::Version& ArtifactStore::read(const std::string& key,
                                                  std::optional<std::uint64_t> version) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) throw UnknownKey(key);
  const auto& versions = it->second;
  std::uint64_t index = version.value_or(versions.size());
  if (index < 1 || index > versions.size()) {
    std::ostringstream what;
    what << "artifact " << key << " has no version " << index;
    throw UnknownVersion(what.str());
  }
  return versions[index - 1];
}

std::uint64_t ArtifactStore::version_count(const std::string& key) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.size();
}

std::vector<std::string> ArtifactStore::keys() const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [key, versions] : entries_) out.push_back(key);
  return out;
}

std::optional<std::string> ArtifactView::latest(const std::string& key) const {
  try {
    return store_.read(key).content;
  } catch (const UnknownKey&) {
    return std::nullopt;
  }
}

std::optional<std::string> ArtifactView::at(const std::string& key,
                                            std::uint64_t version) const {
  try {
    return store_.read(key, version).content;
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
}

TriggerCode decision_trigger(const WorkerDecision& decision) {
  struct Visitor {
    TriggerCode operator()(const decision::GenerateAction&) const {
      return TriggerCode::worker_generate_action;
    }
    TriggerCode operator()(const decision::Done&) const { return TriggerCode::worker_success; }
    // No dedicated worker-failed trigger exists; inability routes to replanning.
    TriggerCode operator()(const decision::Failed&) const {
      return TriggerCode::work_cannot_execute;
    }
    TriggerCode operator()(const decision::CannotExecute&) const {
      return TriggerCode::work_cannot_execute;
    }
    TriggerCode operator()(const decision::Supplement&) const {
      return TriggerCode::worker_supplement;
    }
    TriggerCode operator()(const decision::Stale&) const {
      return TriggerCode::worker_stale_progress;
    }
  };
  return std::visit(Visitor{}, decision);
}

TriggerCode decision_trigger(const std::optional<WorkerDecision>& decision) {
  if (!decision) return TriggerCode::no_worker_decision;
  return decision_trigger(*decision);
}

std::optional<WorkerDecision> next_decision(WorkerRole role, const SubtaskNode& subtask,
                                            const std::string& observation,
                                            const ArtifactView& artifacts,
                                            WorkerProvider& provider) {
  if (subtask.role != role) {
    std::ostringstream what;
    what << "subtask " << subtask.id << " is assigned to " << to_string(subtask.role)
         << ", not " << to_string(role);
    throw RoleMismatch(what.str());
  }
  return provider.next_decision(role, subtask, observation, artifacts);
}

ScriptResult run_script(const TechnicianScript& script, Sandbox& sandbox) {
  Sandbox::Outcome outcome = sandbox.execute(script);

  std::string output = std::move(outcome.output);
  if (output.size() > script.max_output_bytes) {
    output.resize(script.max_output_bytes);
    output += kTruncationMarker;
  }

  ScriptResult result;
  result.output = std::move(output);
  if (outcome.duration_seconds > script.timeout_seconds) {
    result.status = ExecutionStatus::timeout;
  } else if (outcome.exit_code != 0) {
    result.status = ExecutionStatus::error;
  } else {
    result.status = ExecutionStatus::executed;
  }
  return result;
}

}  // namespace orchestra
