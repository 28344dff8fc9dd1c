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
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orchestra/types.hpp"

namespace orchestra {

struct SubtaskNode {
  std::string id;  // unique within a plan
  std::string title;
  std::string description;
  WorkerRole role = WorkerRole::Operator;

  bool operator==(const SubtaskNode&) const = default;
};

using EdgeSet = std::set<std::pair<std::string, std::string>>;

// Validated dependency graph. Immutable after build; replanning produces a
// new value. `order` is the cached topological sequence, lexicographically
// minimal among all valid orders so scheduling is replay-deterministic.
struct SubtaskDag {
  std::map<std::string, SubtaskNode> nodes;
  EdgeSet edges;
  std::vector<std::string> order;

  bool empty() const { return nodes.empty(); }
  std::vector<std::string> predecessors(const std::string& id) const;
};

struct CycleDetected : std::runtime_error {
  explicit CycleDetected(const std::string& cycle)
      : std::runtime_error("dependency cycle: " + cycle) {}
};

struct UnknownNode : std::runtime_error {
  explicit UnknownNode(const std::string& id)
      : std::runtime_error("edge references unknown node: " + id) {}
};

struct ProviderFailure : std::runtime_error {
  explicit ProviderFailure(const std::string& why) : std::runtime_error(why) {}
};

struct LevelViolation : std::runtime_error {
  explicit LevelViolation(const std::string& why) : std::runtime_error(why) {}
};

struct SourceUnavailable : std::runtime_error {
  explicit SourceUnavailable(const std::string& why) : std::runtime_error(why) {}
};

// Rejects duplicate ids, dangling edge endpoints and cycles; computes order.
SubtaskDag build_dag(std::vector<SubtaskNode> nodes, EdgeSet edges);

// Lexicographically smallest valid topological order by node id.
std::vector<std::string> topological_order(const std::map<std::string, SubtaskNode>& nodes,
                                           const EdgeSet& edges);

// Ids whose status is still workable (ready/pending/stale) and whose
// predecessors are all fulfilled.
std::set<std::string> ready_frontier(const SubtaskDag& dag,
                                     const std::map<std::string, SubtaskStatus>& statuses);

// Replan severity: light touches descriptions only, medium may rewire edges
// and membership but keeps fulfilled nodes, heavy re-decomposes from scratch.
enum class AdjustmentLevel { light, medium, heavy };

std::string_view to_string(AdjustmentLevel level);
std::optional<AdjustmentLevel> adjustment_level_from_string(std::string_view text);

// Raw provider output before kernel validation.
struct PlanDraft {
  std::vector<SubtaskNode> nodes;
  EdgeSet edges;
  bool impossible = false;
};

struct ReplanRequest {
  const SubtaskDag& current;
  std::string failure_report;
  AdjustmentLevel level = AdjustmentLevel::light;
  std::uint64_t attempt = 0;  // value of plan_attempts for this planning pass
};

// Plan text generation is delegated; the kernel owns validation and
// scheduling. Implementations: scripted (scenario fixtures) and, behind the
// same surface, model-backed planners.
class PlanProvider {
 public:
  virtual ~PlanProvider() = default;
  virtual PlanDraft initial_plan(const std::string& task_text, const std::string& context) = 0;
  virtual PlanDraft replan(const ReplanRequest& request) = 0;
};

// Result of a planning pass; `impossible` short-circuits DAG validation.
struct PlanResult {
  SubtaskDag dag;
  bool impossible = false;
};

// Runs the provider and validates its output. Throws ProviderFailure when the
// provider returns nothing workable (and does not declare impossibility).
PlanResult plan(const std::string& task_text, const std::string& context,
                PlanProvider& provider);

// Level contracts, enforced regardless of provider output:
//   light  — node-id set and edges unchanged; descriptions/titles/roles may move
//   medium — every fulfilled node survives (statuses given by `fulfilled`)
//   heavy  — unconstrained
// Violations raise LevelViolation.
PlanResult replan(const SubtaskDag& current, const std::set<std::string>& fulfilled,
                  const std::string& failure_report, AdjustmentLevel level,
                  std::uint64_t attempt, PlanProvider& provider);

// External knowledge hook used by the SUPPLEMENT situation.
class KnowledgeSource {
 public:
  virtual ~KnowledgeSource() = default;
  // Empty result means the source failed to produce anything usable.
  virtual std::optional<std::string> lookup(const std::string& query) = 0;
};

// Returns the augmentation to append to planning context. Empty queries are
// errors, not no-ops. Throws SourceUnavailable on failure.
std::string supplement(const std::string& query, KnowledgeSource& source);

}  // namespace orchestra
