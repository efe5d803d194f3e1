#pragma once

#include <map>
#include <nlohmann/json_fwd.hpp>

#include "evs/axioms.hpp"
#include "evs/instance.hpp"

namespace evs {

// L(x): everything sitting above some nonzero multiple of x translated by a
// primitive. Finite scopes carry the explicit set; symbolic scopes answer
// through the owning instance's membership rule. Relative scopes are just
// sub-instances passed in place of the ambient one.
struct TestingSet {
  Element base;
  std::optional<std::vector<Element>> elements;
  std::string scope;

  bool member(const Evs& X, const Element& z) const;
  nlohmann::json to_json() const;
};

struct IndependenceReport {
  bool independent = true;
  std::optional<std::pair<Element, Element>> witness;
  std::string direction;  // which of the two memberships held
  std::vector<Element> set_checked;

  nlohmann::json to_json() const;
};

struct GeneratorReport {
  AxiomVerdict::Status status = AxiomVerdict::Status::pass;
  std::optional<Element> uncovered;
  std::string mode;

  bool ok() const { return status != AxiomVerdict::Status::fail; }
  nlohmann::json to_json() const;
};

// Verdicts for the testing-set laws, keyed:
//   base-inside-up-closed   x in L(x), and L(x) absorbs everything above
//   larger-base-smaller-set x <= y shrinks the testing set
//   base-invariant          L(a*y + p) = L(y)
//   primitive-free          L(x) misses the minimal elements
//   membership-transitive   a in L(b) nests L(a) inside L(b)
//   sum-in-both             x + y lands in L(x) and L(y)
struct PropertyReport {
  std::map<std::string, AxiomVerdict> verdicts;
  std::string mode;
  std::uint64_t seed = 0;
  std::size_t trials = 0;

  bool all_pass() const;
  std::vector<std::string> failed_slots() const;
  nlohmann::json to_json() const;
};

// z in L(x). The base x must not be primitive (the set is undefined there);
// both elements must belong to the scope.
bool testing_set_membership(const Evs& X, const Element& x, const Element& z);

// Materializes L(x) on finite scopes, wraps the predicate otherwise.
TestingSet testing_set(const Evs& X, const Element& x);

// x in L(y) or y in L(x).
bool orderly_dependent(const Evs& X, const Element& x, const Element& y);

// Pairwise independence of a whole set; the first failing pair (in canonical
// order) is reported with its direction.
IndependenceReport is_orderly_independent_set(const Evs& X,
                                              std::vector<Element> S);

// Do the testing sets of S cover everything non-primitive? Exhaustive on
// finite scopes, sampled otherwise.
GeneratorReport is_generator(const Evs& X, const std::vector<Element>& S,
                             const ValidateOptions& opt = {});

// The six testing-set laws, exhaustively or on seeded samples.
PropertyReport check_L_properties(const Evs& X, const ValidateOptions& opt = {});

}  // namespace evs
