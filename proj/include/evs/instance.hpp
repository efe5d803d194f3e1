#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "evs/element.hpp"

namespace evs {

struct FamilyOracle;

// Deterministic source of choices. Index selection uses modulo reduction on
// purpose: uniform_int_distribution is implementation-defined, and reports
// must reproduce byte-identically across standard libraries.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}

  std::uint64_t raw() { return gen(); }

  std::size_t index(std::size_t n) {
    if (n == 0) throw DomainError("cannot draw from an empty range");
    return static_cast<std::size_t>(gen() % n);
  }

  long integer(long lo, long hi) {  // inclusive bounds
    if (hi < lo) throw DomainError("empty integer range");
    return lo + static_cast<long>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[index(v.size())];
  }
};

// Witness that z lies in a testing set: alpha*x + p <= z with alpha != 0 and
// p primitive.
struct LWitness {
  Scalar alpha;
  Element p;
};

// An exponential vector space: commutative monoid (X,+,theta) with a scalar
// action of a field and a compatible partial order. Concrete carriers are
// either explicit finite tables or symbolic families with closed-form rules.
class Evs {
 public:
  virtual ~Evs() = default;

  virtual Field field() const = 0;
  virtual std::string describe() const = 0;
  virtual Element zero() const = 0;
  virtual bool contains(const Element& x) const = 0;
  virtual Element add(const Element& x, const Element& y) const = 0;
  virtual Element scale(const Scalar& a, const Element& x) const = 0;
  virtual bool leq(const Element& x, const Element& y) const = 0;

  virtual bool finite() const = 0;

  // Finite list of scalars used for exhaustive/sampled quantification.
  // Always contains 0, 1 and -1.
  virtual std::vector<Scalar> scalar_set() const;

  // Whether scale() accepts this scalar. Explicit tables only define the
  // action on their declared scalar list; families accept the whole field.
  virtual bool scale_defined(const Scalar& a) const;

  // Canonical ordering used wherever a deterministic representative or
  // output order is needed.
  virtual bool canon_less(const Element& a, const Element& b) const { return a < b; }

  // --- carrier access -------------------------------------------------
  const std::vector<Element>& carrier() const;  // throws DomainError when infinite
  std::size_t carrier_size() const { return carrier().size(); }

  // --- minimal (primitive) elements ------------------------------------
  virtual bool is_minimal(const Element& x) const;  // default: order scan of the carrier
  bool minimal_enumerable() const;
  const std::vector<Element>& minimal_elements() const;  // cached
  virtual std::vector<Element> primitives_below(const Element& x) const;

  // --- sampling ---------------------------------------------------------
  virtual Element sample_one(Rng& rng) const;  // default: draw from the carrier
  std::vector<Element> sample(Rng& rng, std::size_t count) const;
  virtual Element sample_minimal(Rng& rng) const;
  virtual Element sample_upper(Rng& rng, const Element& x) const;  // some w >= x

  // --- testing sets -----------------------------------------------------
  // z in L(x): exists alpha != 0 and primitive p with alpha*x + p <= z.
  virtual bool L_member(const Element& x, const Element& z) const;
  virtual std::optional<LWitness> L_witness(const Element& x, const Element& z) const;

  // x in Q(X): x not primitive and every non-primitive y <= x lies in L(x).
  virtual bool Q_member(const Element& x) const;

  bool is_idempotent(const Element& x) const {
    return !(x == zero()) && add(x, x) == x;
  }

  // --- closed-form structural facts --------------------------------------
  // Finite carriers compute these by exhaustion; symbolic families override
  // with the rule derived for them. nullopt = not known in closed form.

  // Every element has exactly one primitive below it.
  virtual std::optional<bool> single_primitive_rule() const { return std::nullopt; }
  // Equal primitive sets force order-comparability.
  virtual std::optional<bool> comparable_rule() const { return std::nullopt; }
  // Complete list of non-zero idempotents (empty vector = there are none).
  virtual std::optional<std::vector<Element>> idempotents_rule() const {
    return std::nullopt;
  }

  // Recorded ground truth (basis, dimension, rule derivations) for symbolic
  // families that ship one. Finite instances compute instead of recording.
  virtual const FamilyOracle* oracle() const { return nullptr; }

  void canon_sort(std::vector<Element>& v) const;

 protected:
  // Finite instances return their full canonical carrier here.
  virtual std::vector<Element> enumerate_carrier() const;
  // Instances with enumerable minimal sets return them here even when the
  // carrier itself is infinite.
  virtual std::vector<Element> enumerate_minimal() const;
  virtual bool minimal_enumerable_hint() const { return finite(); }

 private:
  mutable std::optional<std::vector<Element>> carrier_cache_;
  mutable std::optional<std::vector<Element>> minimal_cache_;
};

using EvsPtr = std::shared_ptr<const Evs>;

// A finite sub-carrier of an ambient instance, with operations delegated and
// order/minimality taken relative to the subset. Used for relative testing
// sets, subevs views, and materialized closures.
class RestrictedEvs : public Evs {
 public:
  RestrictedEvs(EvsPtr ambient, std::vector<Element> subset, std::string name);

  Field field() const override { return ambient_->field(); }
  std::string describe() const override { return name_; }
  Element zero() const override { return ambient_->zero(); }
  bool contains(const Element& x) const override;
  Element add(const Element& x, const Element& y) const override {
    return ambient_->add(x, y);
  }
  Element scale(const Scalar& a, const Element& x) const override {
    return ambient_->scale(a, x);
  }
  bool leq(const Element& x, const Element& y) const override {
    return ambient_->leq(x, y);
  }
  bool finite() const override { return true; }
  std::vector<Scalar> scalar_set() const override { return ambient_->scalar_set(); }
  bool scale_defined(const Scalar& a) const override { return ambient_->scale_defined(a); }
  bool canon_less(const Element& a, const Element& b) const override {
    return ambient_->canon_less(a, b);
  }

  const Evs& ambient() const { return *ambient_; }
  EvsPtr ambient_ptr() const { return ambient_; }

 protected:
  std::vector<Element> enumerate_carrier() const override { return subset_; }

 private:
  EvsPtr ambient_;
  std::vector<Element> subset_;  // canonically sorted
  std::string name_;
};

}  // namespace evs
