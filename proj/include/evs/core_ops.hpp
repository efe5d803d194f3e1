#pragma once

#include <nlohmann/json_fwd.hpp>

#include "evs/axioms.hpp"
#include "evs/instance.hpp"

namespace evs {

// The minimal elements of an instance together with their verified
// vector-space structure. `elements` is absent when the set is not
// enumerable (rational cone fibres etc.); the dimension then comes from the
// family's recorded rule.
struct PrimitiveSpace {
  std::optional<std::vector<Element>> elements;
  std::string description;             // prose stand-in when not enumerable
  std::optional<long> dimension;
  std::string dimension_token;         // "indeterminate" or "c" when unknown
  std::string mode;                    // "exhaustive" | "sampled"

  std::string dimension_string() const;
  nlohmann::json to_json() const;
};

// All minimal elements below one owner; never empty on a valid instance.
struct PrimitiveSet {
  Element owner;
  std::vector<Element> elements;

  nlohmann::json to_json() const;
};

// Verdicts for the three sub-instance conditions: closure under a*x + y,
// relative minimals being ambient-minimal, and a relative minimal below
// every member.
struct SubEvsReport {
  AxiomVerdict closure;
  AxiomVerdict primitive;
  AxiomVerdict support;
  std::optional<std::vector<Element>> relative_primitives;
  std::string mode;

  bool ok() const { return closure.ok() && primitive.ok() && support.ok(); }
  nlohmann::json to_json() const;
};

struct Classification {
  bool single_primitive = false;
  bool comparable = false;
  bool has_idempotent = false;

  nlohmann::json to_json() const;
};

// Extracts the minimal elements and verifies they carry a vector space:
// zero present, closed under addition and the declared scalars, and each
// member cancelling against its (-1)-multiple. Throws DomainError when the
// structure fails (the instance is then not an evs). opt.seed/opt.trials
// drive the sampled verification used when the set is not enumerable.
PrimitiveSpace primitive_space(const Evs& X, const ValidateOptions& opt = {});

// All minimal elements below x; empty output means the instance violates
// the support axiom and is reported as a DomainError.
PrimitiveSet primitives_of(const Evs& X, const Element& x);

// Checks that Y sits inside X as a sub exponential vector space. Y supplies
// the candidate carrier (explicitly or through its sampler); X supplies the
// operations being restricted.
SubEvsReport validate_subevs(const Evs& X, const Evs& Y,
                             const ValidateOptions& opt = {});
SubEvsReport validate_subevs(const Evs& X, const std::vector<Element>& subset,
                             const ValidateOptions& opt = {});

// Nonzero solutions of x + x = x, canonically sorted. Their presence rules
// out the order topology the literature builds on such instances.
std::vector<Element> detect_idempotents(const Evs& X);

// Structural flags: every element owning exactly one primitive, equal
// primitive sets forcing comparability, and idempotent presence. Finite
// carriers are scanned; families answer with their closed-form rules or
// throw Undecided.
Classification classify(const Evs& X);

}  // namespace evs
