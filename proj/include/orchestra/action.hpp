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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace orchestra {

struct Point {
  int x = 0;
  int y = 0;
  bool operator==(const Point&) const = default;
};

// GUI-facing action repertoire. Parameters are plain values; the kernel treats
// screen contents as opaque, so no pixels appear anywhere in these types.
namespace act {

struct Click { Point at; bool operator==(const Click&) const = default; };
struct DoubleClick { Point at; bool operator==(const DoubleClick&) const = default; };
struct Move { Point at; bool operator==(const Move&) const = default; };
struct Drag {
  Point from;
  Point to;
  bool operator==(const Drag&) const = default;
};
struct TypeText { std::string text; bool operator==(const TypeText&) const = default; };
struct Hotkey {
  std::vector<std::string> keys;  // non-empty
  bool operator==(const Hotkey&) const = default;
};
struct Scroll {
  int delta = 0;
  std::optional<Point> at;
  bool operator==(const Scroll&) const = default;
};
struct SwitchApplications {
  std::string target;
  bool operator==(const SwitchApplications&) const = default;
};
struct SetCellValues {
  std::string range;                            // e.g. "A1:B2"
  std::vector<std::vector<std::string>> values; // rectangular grid of text cells
  bool operator==(const SetCellValues&) const = default;
};
struct Open { std::string path; bool operator==(const Open&) const = default; };
struct Screenshot { bool operator==(const Screenshot&) const = default; };
struct Wait {
  double seconds = 0.0;  // > 0
  bool operator==(const Wait&) const = default;
};
// Writes a contextual memory to the shared artifact store for other roles.
struct Memorize {
  std::string key;
  std::string content;
  bool operator==(const Memorize&) const = default;
};

}  // namespace act

// Script submitted by the Technician role for sandboxed execution.
struct TechnicianScript {
  std::string body;        // non-empty
  std::string runtime_id;  // names the sandbox runtime, e.g. "bash", "python"
  double timeout_seconds = 30.0;
  std::size_t max_output_bytes = 65536;
  bool operator==(const TechnicianScript&) const = default;
};

using OperatorAction =
    std::variant<act::Click, act::DoubleClick, act::Move, act::Drag, act::TypeText,
                 act::Hotkey, act::Scroll, act::SwitchApplications, act::SetCellValues,
                 act::Open, act::Screenshot, act::Wait, act::Memorize>;

// An executable action: either a GUI action or a Technician script.
using WorkerAction = std::variant<OperatorAction, TechnicianScript>;

std::string action_variant_name(const OperatorAction& action);
std::string action_variant_name(const WorkerAction& action);

// Canonical text form: variant name followed by the ordered parameters.
// Stable across runs and platforms; used for traces and fingerprinting.
std::string canonical_encoding(const OperatorAction& action);
std::string canonical_encoding(const WorkerAction& action);

// Deterministic 64-bit digest over the action variant and all parameters.
// Equal actions hash equal; timestamps never contribute, so stagnation
// detection ignores wall-clock.
std::uint64_t action_fingerprint(const WorkerAction& action);

// Returns an explanation when the action violates a structural invariant
// (negative coordinates, empty hotkey list, non-positive wait, ...).
std::optional<std::string> validate_action(const WorkerAction& action);

// FNV-1a over arbitrary bytes; the digest primitive behind action_fingerprint
// and the scenario digest in trace headers.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace orchestra
