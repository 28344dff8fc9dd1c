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

#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "orchestra/action.hpp"
#include "orchestra/plan.hpp"
#include "orchestra/trigger.hpp"
#include "orchestra/types.hpp"

namespace orchestra {

// A worker's reply: one executable action or one decision signal.
namespace decision {
struct GenerateAction { WorkerAction action; };
struct Done {};
struct Failed {};
struct CannotExecute { std::string reason; };
struct Supplement { std::string query; };
struct Stale { std::string reason; };
}  // namespace decision

using WorkerDecision =
    std::variant<decision::GenerateAction, decision::Done, decision::Failed,
                 decision::CannotExecute, decision::Supplement, decision::Stale>;

struct RoleMismatch : std::runtime_error {
  explicit RoleMismatch(const std::string& why) : std::runtime_error(why) {}
};

struct EmptyKey : std::runtime_error {
  EmptyKey() : std::runtime_error("artifact key must be non-empty") {}
};

struct UnknownKey : std::runtime_error {
  explicit UnknownKey(const std::string& key) : std::runtime_error("unknown artifact key: " + key) {}
};

struct UnknownVersion : std::runtime_error {
  explicit UnknownVersion(const std::string& what) : std::runtime_error(what) {}
};

struct SandboxUnavailable : std::runtime_error {
  explicit SandboxUnavailable(const std::string& why) : std::runtime_error(why) {}
};

// Append-only versioned key -> content store through which roles exchange
// intermediate results. Versions are 1-based and never mutated; historical
// reads are stable. Appends are atomic per store.
class ArtifactStore {
 public:
  struct Version {
    std::string content;
    WorkerRole author;
    double written_at = 0.0;  // logical seconds
  };

  // Returns the new 1-based version number. Throws EmptyKey.
  std::uint64_t write(const std::string& key, std::string content, WorkerRole author,
                      double now = 0.0);

  // Default reads the latest version. Throws UnknownKey / UnknownVersion.
  const Version& read(const std::string& key,
                      std::optional<std::uint64_t> version = std::nullopt) const;

  std::uint64_t version_count(const std::string& key) const;
  std::vector<std::string> keys() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::vector<Version>> entries_;
};

// Read-only view handed to worker providers.
class ArtifactView {
 public:
  explicit ArtifactView(const ArtifactStore& store) : store_(store) {}
  std::optional<std::string> latest(const std::string& key) const;
  std::optional<std::string> at(const std::string& key, std::uint64_t version) const;

 private:
  const ArtifactStore& store_;
};

// Decision-making is delegated; the kernel maps replies onto triggers.
// A provider that cannot decide returns nullopt (also how deadline expiry
// presents to the kernel).
class WorkerProvider {
 public:
  virtual ~WorkerProvider() = default;
  virtual std::optional<WorkerDecision> next_decision(WorkerRole role,
                                                      const SubtaskNode& subtask,
                                                      const std::string& observation,
                                                      const ArtifactView& artifacts) = 0;
};

// Trigger the controller consumes for each decision variant; the missing /
// expired case maps to no_worker_decision.
TriggerCode decision_trigger(const WorkerDecision& decision);
TriggerCode decision_trigger(const std::optional<WorkerDecision>& decision);

// Asks the provider for the next decision, enforcing the role contract.
// Throws RoleMismatch when subtask.role != role.
std::optional<WorkerDecision> next_decision(WorkerRole role, const SubtaskNode& subtask,
                                            const std::string& observation,
                                            const ArtifactView& artifacts,
                                            WorkerProvider& provider);

struct ScriptResult {
  ExecutionStatus status = ExecutionStatus::executed;
  std::string output;
};

// Sandbox contract for Technician scripts: isolated execution with a timeout
// and bounded output. Simulation uses a scripted mock.
class Sandbox {
 public:
  struct Outcome {
    int exit_code = 0;
    std::string output;
    double duration_seconds = 0.0;
  };
  virtual ~Sandbox() = default;
  virtual Outcome execute(const TechnicianScript& script) = 0;
};

// Runs a script under the sandbox contract: `executed` on a zero exit within
// the timeout, `timeout` past it, `error` on a nonzero exit. Output is
// truncated at max_output_bytes with a marker. Throws SandboxUnavailable.
ScriptResult run_script(const TechnicianScript& script, Sandbox& sandbox);

inline constexpr std::string_view kTruncationMarker = "...[truncated]";

}  // namespace orchestra
