#pragma once

#include <nlohmann/json_fwd.hpp>

#include "evs/core_ops.hpp"
#include "evs/oracle.hpp"
#include "evs/testing_sets.hpp"

namespace evs {

// Q(X): the non-primitive elements whose lower set (off the primitives) sits
// inside their own testing set. Bases can only be drawn from here.
struct FeasibleSet {
  std::optional<std::vector<Element>> elements;
  std::string owner;

  bool member(const Evs& X, const Element& x) const;
  nlohmann::json to_json() const;
};

// A verified basis: the set itself, the independence evidence, the coverage
// evidence (explicit witnesses on finite carriers, a passing draw count on
// sampled ones), and the dimension pair it certifies.
struct BasisCertificate {
  std::vector<Element> basis;
  IndependenceReport independence;
  std::vector<std::pair<Element, Element>> coverage;  // z -> covering member
  std::size_t sampled_coverage = 0;
  DimensionDescriptor dimension;
  std::string mode;  // exhaustive | sampled

  nlohmann::json to_json() const;
};

struct FindBasisOutcome {
  enum class Kind { found, no_basis, undecided };
  Kind kind = Kind::undecided;
  std::optional<BasisCertificate> certificate;
  std::optional<Element> uncovered;
  std::string note;

  nlohmann::json to_json() const;
};

enum class HasBasis { yes, no, undecided };
std::string to_string(HasBasis v);

// A certified sub-instance: the view itself (restricted carrier or symbolic
// section), the subevs verification it passed, and its measured dimension.
struct SubEvsView {
  EvsPtr view;
  SubEvsReport certified;
  DimensionDescriptor dimension;

  nlohmann::json to_json() const;
};

// x in Q(X). Exhaustive on finite carriers, closed-form rule on families.
bool feasible_membership(const Evs& X, const Element& x);

// Materializes Q(X) on finite carriers, wraps the predicate otherwise.
FeasibleSet feasible_set(const Evs& X);

// Does Q(X) generate the non-primitive part? Families answer through their
// recorded ground truth; without one the verdict is undecided, not a guess.
HasBasis has_basis(const Evs& X);

// Canonical basis search: one least representative per testing-set class of
// Q(X) on finite carriers; the recorded basis, re-verified, on families.
FindBasisOutcome find_basis(const Evs& X, const ValidateOptions& opt = {});

// Verify a candidate basis as given: independence plus coverage, with no
// search. nullopt when either check fails.
std::optional<BasisCertificate> try_certify_basis(const Evs& X,
                                                  std::vector<Element> B,
                                                  const ValidateOptions& opt = {});

// All bases (up to `limit`), by pruned subset search over Q(X). The
// brute-force oracle for the canonical search.
std::vector<BasisCertificate> enumerate_bases(const Evs& X,
                                              std::size_t limit = 64);

// [evs-part : primitive-part], or the no-basis marker.
DimensionDescriptor dimension(const Evs& X, const ValidateOptions& opt = {});

// Swap x in B for a y strictly inside its lower set; re-verifies.
BasisCertificate replace_basis_element(const Evs& X, const BasisCertificate& B,
                                       const Element& x, const Element& y,
                                       const ValidateOptions& opt = {});

// {alpha*b + p : b in B}; re-verifies. Dilations and translations of bases
// are bases, so a verification failure here is a fatal internal finding.
BasisCertificate transform_basis(const Evs& X, const BasisCertificate& B,
                                 const Scalar& alpha, const Element& p,
                                 const ValidateOptions& opt = {});

// Greedy maximal orderly independent subset of Q(X), in canonical order.
std::vector<Element> maximal_oi_in_Q(const Evs& X);

// The smallest sub-instance through x: all sums of scalar multiples of x.
// Requires x strictly above the identity. Certified to have dimension [1:0].
SubEvsView construct_Bx_subevs(EvsPtr X, const Element& x,
                               const ValidateOptions& opt = {});

// The graded sub-instance G(D) of dimension [gamma:delta] built from a
// verified basis: trims the basis to gamma members (translating them off
// their primitives when delta < gamma) and pairs them with a delta-dimensional
// primitive subspace.
SubEvsView construct_graded_subevs(EvsPtr X, const BasisCertificate& B,
                                   std::size_t gamma, std::size_t delta,
                                   const ValidateOptions& opt = {});

// S generates and no proper subset does. The independent oracle for
// find_basis: a set is a basis exactly when this holds.
bool minimal_generator_check(const Evs& X, const std::vector<Element>& S);

}  // namespace evs
