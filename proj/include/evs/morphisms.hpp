#pragma once

#include <map>
#include <nlohmann/json_fwd.hpp>

#include "evs/basis.hpp"

namespace evs {

// A declared map between two instances: an explicit graph on finite carriers,
// or one of the closed-form rules the symbolic families admit. Rules are all
// bijections, which is what makes the sampled preimage check possible.
struct MorphismSpec {
  enum class Rule { table, identity, scale, permute, negate_vector };

  EvsPtr source, target;
  Rule rule = Rule::table;
  std::map<Element, Element> graph;  // rule == table
  std::optional<Scalar> alpha;       // rule == scale
  std::vector<int> permutation;      // rule == permute: out[i] = in[perm[i]]
  std::string claimed_kind = "morphism";

  Element apply(const Element& x) const;
  bool invertible() const;
  Element apply_inverse(const Element& y) const;

  // Reads the `morphism` key of an instance document: either
  //   {"map": [[x, f(x)], ...], "claimed_kind": ...}
  // or {"rule": "identity"|"scale"|"permute"|"negate-vector", ...options}.
  static MorphismSpec from_json(EvsPtr source, EvsPtr target,
                                const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

// Verdicts for the four defining conditions plus the bijectivity the claimed
// kind demands. Failures carry re-checkable witnesses.
struct MorphismReport {
  AxiomVerdict additivity;   // f(x+y) = f(x)+f(y)
  AxiomVerdict homogeneity;  // f(a x) = a f(x)
  AxiomVerdict order;        // x <= y forces f(x) <= f(y)
  AxiomVerdict preimage;     // p <= q in the image pulls back: every preimage
                             // of p sits below some preimage of q, and every
                             // preimage of q sits above some preimage of p
  AxiomVerdict kind;         // injectivity/surjectivity per the claim
  std::string claimed_kind;
  std::string mode;  // exhaustive | sampled

  bool ok() const;
  nlohmann::json to_json() const;
};

struct IsoSearchOutcome {
  enum class Kind { found, proven_none, undecided };
  Kind kind = Kind::undecided;
  std::optional<MorphismSpec> iso;  // verified when kind == found
  std::string note;
  std::size_t nodes = 0;  // assignment attempts spent

  nlohmann::json to_json() const;
};

// Checks conditions (i)-(iv) and the claimed bijectivity. Exhaustive when
// both carriers are finite; seeded sampling otherwise (rule maps only).
MorphismReport verify_order_morphism(const MorphismSpec& m,
                                     const ValidateOptions& opt = {});

// Pruned backtracking over bijections of two finite carriers. `found`
// carries a verified isomorphism; `proven_none` means the search space was
// exhausted (or an invariant already separates the instances); running out
// of budget is `undecided`.
IsoSearchOutcome find_order_isomorphism(EvsPtr X, EvsPtr Y,
                                        std::size_t budget = 200000);

// Push a verified basis through a verified isomorphism and re-verify it on
// the target. Isomorphic instances share their dimension, so any failure
// here is a fatal internal finding.
BasisCertificate transport_basis(const MorphismSpec& m,
                                 const MorphismReport& verified,
                                 const BasisCertificate& B,
                                 const ValidateOptions& opt = {});

// Does the image of the source feasible set equal the target feasible set?
// Finite carriers only; the map must be a verified isomorphism.
bool compare_feasible_sets(const MorphismSpec& m,
                           const MorphismReport& verified);

}  // namespace evs
