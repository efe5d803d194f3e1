#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>

#include "evs/element.hpp"

namespace evs {

// Finite natural or the symbolic continuum token "c". Computed results are
// always finite; the token only ever comes from a recorded family oracle.
struct ExtendedCardinal {
  enum class Kind { finite, continuum };
  Kind kind = Kind::finite;
  long value = 0;

  static ExtendedCardinal finite(long n) { return {Kind::finite, n}; }
  static ExtendedCardinal continuum() { return {Kind::continuum, 0}; }
  bool operator==(const ExtendedCardinal&) const = default;
  std::string to_string() const {
    return kind == Kind::continuum ? "c" : std::to_string(value);
  }
};

// Dimension pair [evs-part : primitive-part], or the explicit no-basis marker.
struct DimensionDescriptor {
  bool no_basis = false;
  ExtendedCardinal evs_part;
  ExtendedCardinal primitive_part;

  static DimensionDescriptor of(long a, long b) {
    return {false, ExtendedCardinal::finite(a), ExtendedCardinal::finite(b)};
  }
  static DimensionDescriptor of(ExtendedCardinal a, ExtendedCardinal b) {
    return {false, a, b};
  }
  static DimensionDescriptor none() { return {true, {}, {}}; }
  bool operator==(const DimensionDescriptor&) const = default;
  std::string to_string() const {
    if (no_basis) return "no-basis";
    return "[" + evs_part.to_string() + ":" + primitive_part.to_string() + "]";
  }
  nlohmann::json to_json() const;
};

// Recorded ground truth for a symbolic family: a representative basis (when a
// finite one exists), the dimension, and prose derivations of the closed-form
// membership rules. Tests re-verify every claim before it is used.
struct FamilyOracle {
  std::optional<std::vector<Element>> basis;
  DimensionDescriptor dimension;
  std::string l_rule;
  std::string q_rule;
  std::string basis_note;
};

}  // namespace evs
