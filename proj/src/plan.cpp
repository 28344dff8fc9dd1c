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

#include "orchestra/plan.hpp"

#include <algorithm>
#include <sstream>

namespace orchestra {

std::vector<std::string> SubtaskDag::predecessors(const std::string& id) const {
  std::vector<std::string> preds;
  for (const auto& [from, to] : edges) {
    if (to == id) preds.push_back(from);
  }
  return preds;
}

std::vector<std::string> topological_order(const std::map<std::string, SubtaskNode>& nodes,
                                           const EdgeSet& edges) {
  std::map<std::string, std::size_t> indegree;
  for (const auto& [id, node] : nodes) indegree[id] = 0;
  for (const auto& [from, to] : edges) indegree[to] += 1;

  // Greedy Kahn over an ordered set: taking the smallest available id at each
  // step yields the lexicographically minimal valid order.
  std::set<std::string> available;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) available.insert(id);
  }

  std::vector<std::string> order;
  order.reserve(nodes.size());
  while (!available.empty()) {
    std::string id = *available.begin();
    available.erase(available.begin());
    order.push_back(id);
    for (const auto& [from, to] : edges) {
      if (from == id && --indegree[to] == 0) available.insert(to);
    }
  }

  if (order.size() != nodes.size()) {
    // Some node never reached indegree zero; report one cycle.
    std::map<std::string, std::size_t> remaining;
    for (const auto& [id, deg] : indegree) {
      if (std::find(order.begin(), order.end(), id) == order.end()) remaining[id] = deg;
    }
    // Walk backwards along edges inside the remaining set until a repeat.
    std::string cursor = remaining.begin()->first;
    std::vector<std::string> path{cursor};
    for (;;) {
      std::string prev;
      for (const auto& [from, to] : edges) {
        if (to == cursor && remaining.count(from)) {
          prev = from;
          break;
        }
      }
      auto seen = std::find(path.begin(), path.end(), prev);
      if (seen != path.end()) {
        std::ostringstream cycle;
        for (auto it = seen; it != path.end(); ++it) cycle << *it << " -> ";
        cycle << prev;
        throw CycleDetected(cycle.str());
      }
      path.push_back(prev);
      cursor = prev;
    }
  }
  return order;
}

SubtaskDag build_dag(std::vector<SubtaskNode> nodes, EdgeSet edges) {
  SubtaskDag dag;
  for (auto& node : nodes) {
    if (node.id.empty()) throw UnknownNode("<empty id>");
    auto [it, inserted] = dag.nodes.emplace(node.id, std::move(node));
    if (!inserted) throw ProviderFailure("duplicate node id: " + it->first);
  }
  for (const auto& [from, to] : edges) {
    if (!dag.nodes.count(from)) throw UnknownNode(from);
    if (!dag.nodes.count(to)) throw UnknownNode(to);
  }
  dag.edges = std::move(edges);
  dag.order = topological_order(dag.nodes, dag.edges);
  return dag;
}

std::set<std::string> ready_frontier(const SubtaskDag& dag,
                                     const std::map<std::string, SubtaskStatus>& statuses) {
  std::set<std::string> frontier;
  for (const auto& [id, node] : dag.nodes) {
    auto status = statuses.find(id);
    if (status == statuses.end() || is_terminal(status->second)) continue;
    bool eligible = true;
    for (const auto& [from, to] : dag.edges) {
      if (to != id) continue;
      auto pred = statuses.find(from);
      if (pred == statuses.end() || pred->second != SubtaskStatus::fulfilled) {
        eligible = false;
        break;
      }
    }
    if (eligible) frontier.insert(id);
  }
  return frontier;
}

std::string_view to_string(AdjustmentLevel level) {
  switch (level) {
    case AdjustmentLevel::light: return "light";
    case AdjustmentLevel::medium: return "medium";
    case AdjustmentLevel::heavy: return "heavy";
  }
  return "?";
}

std::optional<AdjustmentLevel> adjustment_level_from_string(std::string_view text) {
  if (text == "light") return AdjustmentLevel::light;
  if (text == "medium") return AdjustmentLevel::medium;
  if (text == "heavy") return AdjustmentLevel::heavy;
  return std::nullopt;
}

PlanResult plan(const std::string& task_text, const std::string& context,
                PlanProvider& provider) {
  PlanDraft draft = provider.initial_plan(task_text, context);
  if (draft.impossible) return {.dag = {}, .impossible = true};
  if (draft.nodes.empty()) {
    throw ProviderFailure("provider returned no subtasks and did not declare impossibility");
  }
  return {.dag = build_dag(std::move(draft.nodes), std::move(draft.edges)),
          .impossible = false};
}

namespace {

void enforce_level(const SubtaskDag& current, const std::set<std::string>& fulfilled,
                   AdjustmentLevel level, const PlanDraft& draft) {
  if (level == AdjustmentLevel::heavy) return;

  std::set<std::string> new_ids;
  for (const auto& node : draft.nodes) new_ids.insert(node.id);

  if (level == AdjustmentLevel::light) {
    std::set<std::string> old_ids;
    for (const auto& [id, node] : current.nodes) old_ids.insert(id);
    if (new_ids != old_ids) {
      throw LevelViolation("light adjustment changed the node-id set");
    }
    if (draft.edges != current.edges) {
      throw LevelViolation("light adjustment changed the edge set");
    }
    return;
  }

  // medium: every fulfilled node must survive.
  for (const auto& id : fulfilled) {
    if (current.nodes.count(id) && !new_ids.count(id)) {
      throw LevelViolation("medium adjustment dropped fulfilled node " + id);
    }
  }
}

}  // namespace

PlanResult replan(const SubtaskDag& current, const std::set<std::string>& fulfilled,
                  const std::string& failure_report, AdjustmentLevel level,
                  std::uint64_t attempt, PlanProvider& provider) {
  PlanDraft draft = provider.replan(
      {.current = current, .failure_report = failure_report, .level = level, .attempt = attempt});
  if (draft.impossible) return {.dag = {}, .impossible = true};
  if (draft.nodes.empty()) {
    throw ProviderFailure("replan returned no subtasks and did not declare impossibility");
  }
  enforce_level(current, fulfilled, level, draft);
  return {.dag = build_dag(std::move(draft.nodes), std::move(draft.edges)),
          .impossible = false};
}

std::string supplement(const std::string& query, KnowledgeSource& source) {
  if (query.empty()) throw SourceUnavailable("empty supplement query");
  std::optional<std::string> result = source.lookup(query);
  if (!result || result->empty()) throw SourceUnavailable("knowledge source returned nothing");
  return *result;
}

}  // namespace orchestra
