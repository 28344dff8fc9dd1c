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

#include "orchestra/action.hpp"

#include <sstream>

namespace orchestra {

namespace {

// Unit separator keeps parameter boundaries unambiguous in the canonical form
// (a parameter containing '|' must not collide with two adjacent parameters).
constexpr char kSep = '\x1f';

struct NameVisitor {
  std::string operator()(const act::Click&) const { return "click"; }
  std::string operator()(const act::DoubleClick&) const { return "double_click"; }
  std::string operator()(const act::Move&) const { return "move"; }
  std::string operator()(const act::Drag&) const { return "drag"; }
  std::string operator()(const act::TypeText&) const { return "type_text"; }
  std::string operator()(const act::Hotkey&) const { return "hotkey"; }
  std::string operator()(const act::Scroll&) const { return "scroll"; }
  std::string operator()(const act::SwitchApplications&) const { return "switch_applications"; }
  std::string operator()(const act::SetCellValues&) const { return "set_cell_values"; }
  std::string operator()(const act::Open&) const { return "open"; }
  std::string operator()(const act::Screenshot&) const { return "screenshot"; }
  std::string operator()(const act::Wait&) const { return "wait"; }
  std::string operator()(const act::Memorize&) const { return "memorize"; }
};

struct EncodeVisitor {
  std::ostringstream out;

  void put() {}
  template <typename T, typename... Rest>
  void put(const T& value, const Rest&... rest) {
    out << kSep << value;
    put(rest...);
  }

  void operator()(const act::Click& a) { put("click", a.at.x, a.at.y); }
  void operator()(const act::DoubleClick& a) { put("double_click", a.at.x, a.at.y); }
  void operator()(const act::Move& a) { put("move", a.at.x, a.at.y); }
  void operator()(const act::Drag& a) { put("drag", a.from.x, a.from.y, a.to.x, a.to.y); }
  void operator()(const act::TypeText& a) { put("type_text", a.text); }
  void operator()(const act::Hotkey& a) {
    put("hotkey", a.keys.size());
    for (const auto& k : a.keys) put(k);
  }
  void operator()(const act::Scroll& a) {
    put("scroll", a.delta);
    if (a.at) put(a.at->x, a.at->y);
  }
  void operator()(const act::SwitchApplications& a) { put("switch_applications", a.target); }
  void operator()(const act::SetCellValues& a) {
    put("set_cell_values", a.range, a.values.size());
    for (const auto& row : a.values) {
      put(row.size());
      for (const auto& cell : row) put(cell);
    }
  }
  void operator()(const act::Open& a) { put("open", a.path); }
  void operator()(const act::Screenshot&) { put("screenshot"); }
  void operator()(const act::Wait& a) { put("wait", a.seconds); }
  void operator()(const act::Memorize& a) { put("memorize", a.key, a.content); }
};

}  // namespace

std::string action_variant_name(const OperatorAction& action) {
  return std::visit(NameVisitor{}, action);
}

std::string action_variant_name(const WorkerAction& action) {
  if (const auto* op = std::get_if<OperatorAction>(&action)) {
    return action_variant_name(*op);
  }
  return "script";
}

std::string canonical_encoding(const OperatorAction& action) {
  EncodeVisitor v;
  std::visit(v, action);
  return std::move(v.out).str();
}

std::string canonical_encoding(const WorkerAction& action) {
  if (const auto* op = std::get_if<OperatorAction>(&action)) {
    return canonical_encoding(*op);
  }
  const auto& script = std::get<TechnicianScript>(action);
  EncodeVisitor v;
  v.put("script", script.runtime_id, script.body, script.timeout_seconds,
        script.max_output_bytes);
  return std::move(v.out).str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::uint64_t action_fingerprint(const WorkerAction& action) {
  return fnv1a64(canonical_encoding(action));
}

std::optional<std::string> validate_action(const WorkerAction& action) {
  if (const auto* script = std::get_if<TechnicianScript>(&action)) {
    if (script->body.empty()) return "script body is empty";
    if (script->timeout_seconds <= 0) return "script timeout must be > 0";
    return std::nullopt;
  }
  const auto& op = std::get<OperatorAction>(action);
  auto bad_point = [](const Point& p) { return p.x < 0 || p.y < 0; };
  if (const auto* a = std::get_if<act::Click>(&op); a && bad_point(a->at)) {
    return "click coordinates must be non-negative";
  }
  if (const auto* a = std::get_if<act::DoubleClick>(&op); a && bad_point(a->at)) {
    return "double_click coordinates must be non-negative";
  }
  if (const auto* a = std::get_if<act::Move>(&op); a && bad_point(a->at)) {
    return "move coordinates must be non-negative";
  }
  if (const auto* a = std::get_if<act::Drag>(&op); a && (bad_point(a->from) || bad_point(a->to))) {
    return "drag coordinates must be non-negative";
  }
  if (const auto* a = std::get_if<act::Hotkey>(&op); a && a->keys.empty()) {
    return "hotkey key list must be non-empty";
  }
  if (const auto* a = std::get_if<act::Scroll>(&op); a && a->at && bad_point(*a->at)) {
    return "scroll coordinates must be non-negative";
  }
  if (const auto* a = std::get_if<act::Wait>(&op); a && a->seconds <= 0) {
    return "wait duration must be > 0";
  }
  if (const auto* a = std::get_if<act::Memorize>(&op); a && a->key.empty()) {
    return "memorize key must be non-empty";
  }
  if (const auto* a = std::get_if<act::SetCellValues>(&op)) {
    std::size_t width = a->values.empty() ? 0 : a->values.front().size();
    for (const auto& row : a->values) {
      if (row.size() != width) return "set_cell_values grid must be rectangular";
    }
  }
  return std::nullopt;
}

}  // namespace orchestra
