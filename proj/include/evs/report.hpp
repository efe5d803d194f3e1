#pragma once

#include <nlohmann/json.hpp>

#include "evs/instance.hpp"

namespace evs {

// An instance together with the canonical form of the document that produced
// it. The digest keys golden reports: identical documents hash identically
// regardless of the key order or whitespace they arrived with.
struct LoadedInstance {
  EvsPtr instance;
  nlohmann::json document;
  std::string digest;
};

// Accepts either an explicit table document or {"family": {tag, ...}}.
LoadedInstance load_instance(const nlohmann::json& document);

// FNV-1a, 64-bit, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

// Element literal resolved against a concrete carrier: the payload grammar
// first, then a bare integer as a table index. Throws InputError when neither
// lands inside the instance.
Element parse_element_for(const Evs& X, const std::string& text);

// "{a, b, c}" split at top-level commas (outer braces delimit the set, so
// '{{0,1}}' is the one-member set containing the pair {0,1}). Anything not
// brace-wrapped passes through whole.
std::vector<std::string> split_set_literal(const std::string& text);

// One CLI invocation, argv without the program name. The machine document is
// the full stable-keyed report; the human text carries the same verdicts line
// by line. Exit codes: 0 success or verdict-true, 2 violation or
// verdict-false, 3 input error, 4 undecided.
struct CommandOutcome {
  int exit_code = 0;
  nlohmann::json machine;
  std::string human;
  std::string format = "human";  // which rendering the caller asked for
};

CommandOutcome run_command(std::vector<std::string> args);

}  // namespace evs
