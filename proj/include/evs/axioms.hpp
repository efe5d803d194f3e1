#pragma once

#include <map>
#include <nlohmann/json_fwd.hpp>

#include "evs/instance.hpp"

namespace evs {

struct AxiomWitness {
  std::string note;
  std::vector<std::pair<std::string, Element>> elements;
  std::vector<std::pair<std::string, Scalar>> scalars;

  const Element& element(const std::string& role) const;
  const Scalar& scalar(const std::string& role) const;
  nlohmann::json to_json() const;
  std::string to_string() const;
};

struct AxiomVerdict {
  enum class Status { pass, sampled_pass, fail };
  Status status = Status::pass;
  std::optional<AxiomWitness> witness;
  bool ok() const { return status != Status::fail; }
};

struct ValidateOptions {
  enum class Mode { exhaustive, sampled };
  Mode mode = Mode::exhaustive;
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
};

// Verdicts for the axiom slots, keyed:
//   A1.assoc  A1.comm  A1.identity   -- commutative monoid laws
//   A2.add    A2.scale              -- order compatibility
//   A3.i ... A3.iv                  -- scalar action laws
//   A4                              -- alpha*x = 0 iff alpha = 0 or x = 0
//   A5                              -- cancellation set = minimal elements
//   A6                              -- a primitive sits below every element
struct AxiomReport {
  std::map<std::string, AxiomVerdict> verdicts;
  ValidateOptions::Mode mode = ValidateOptions::Mode::exhaustive;
  std::uint64_t seed = 0;
  std::size_t trials = 0;

  bool all_pass() const;
  std::vector<std::string> failed_slots() const;
  nlohmann::json to_json() const;
};

const std::vector<std::string>& axiom_slots();

AxiomReport validate_axioms(const Evs& X, const ValidateOptions& opt = {});

// Re-evaluates a recorded failure; true when the witness still violates the
// named slot. Every fail verdict must satisfy this by construction.
bool witness_violates(const Evs& X, const std::string& slot, const AxiomWitness& w);

}  // namespace evs
